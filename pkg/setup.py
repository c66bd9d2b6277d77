"""setup.py
local installation: pip install -e .

python setup.py sdist
twine upload --repository pypitest dist/battrom-x.x.x.tar.gz
twine upload --repository pypi dist/battrom-x.x.x.tar.gz
"""
from setuptools import setup, find_packages
from battrom.version import __version__ as version

try:
    with open('README.md', 'r') as f:
        long_description = f.read()
except IOError:
    long_description = ''

install_requires = [
    'colorlog',
    'msgpack',
    'numpy',
    'scipy',
]

setup(
    name='battrom',
    packages=find_packages(exclude=['tests']),
    package_data={'battrom': ['data/*.json', 'data/*.csv']},
    version=version,
    description=(
        'Reduced order thermal models (LTI and LPV) of a liquid cooled '
        'battery cell'),
    long_description=long_description,
    long_description_content_type='text/markdown',
    keywords=['battery', 'thermal', 'reduced order model', 'lpv'],
    install_requires=install_requires,
    extras_require={'test': ['pytest', 'hypothesis']},
    entry_points={'console_scripts': ['battrom = battrom.start:main_cli']},
    python_requires='>=3.8',
    classifiers=[
        'Intended Audience :: Science/Research',
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3 :: Only',
        'Topic :: Scientific/Engineering :: Physics',
    ],
)

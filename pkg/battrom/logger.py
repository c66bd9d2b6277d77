"""Root logger setup for the command line and the study runner.

Library modules log through `logging` directly and never configure it.
"""
import colorlog
import logging
import os

LOG_LEVEL = os.getenv('LOG_LEVEL', 'warning')
LOG_COLORIZED = os.getenv('LOG_COLORIZED', '0') != '0'
LOG_DATE_FMT = os.getenv('LOG_FMT', '%y%m%d %H:%M:%S')

HANDLER_NAME = 'battrom'

_FMT = '[%(levelname)1.1s %(asctime)s %(module)s:%(lineno)d]'
_COLORS = {
    'DEBUG': 'cyan',
    'INFO': 'green',
    'WARNING': 'yellow',
    'ERROR': 'red',
    'CRITICAL': 'red,bg_white',
}
_LEVELS = ('debug', 'info', 'warning', 'error', 'critical')


def _formatter(colorized: bool) -> logging.Formatter:
    if colorized:
        return colorlog.ColoredFormatter(
            fmt=f'%(log_color)s{_FMT}%(reset)s %(message)s',
            datefmt=LOG_DATE_FMT,
            reset=True,
            log_colors=_COLORS,
            style='%')
    return logging.Formatter(
        fmt=f'{_FMT} %(message)s', datefmt=LOG_DATE_FMT, style='%')


def setup_logger(log_level: str = LOG_LEVEL,
                 colorized: bool = LOG_COLORIZED):
    """Installs one stderr handler on the root logger. Calling it again
    replaces that handler (the CLI entry point runs once per test)."""
    logger = logging.getLogger()
    set_log_level(log_level)
    for handler in logger.handlers[:]:
        if handler.get_name() == HANDLER_NAME:
            logger.removeHandler(handler)

    ch = logging.StreamHandler()
    ch.set_name(HANDLER_NAME)
    ch.setLevel(logging.DEBUG)
    ch.setFormatter(_formatter(colorized))
    logger.addHandler(ch)

    # RuntimeWarnings of numpy and scipy (overflow in a fit, ill
    # conditioned solves) end up in the same log
    logging.captureWarnings(True)


def set_log_level(log_level: str):
    name = log_level.lower()
    if name not in _LEVELS:
        raise ValueError(f'unknown log level: {log_level}')
    logging.getLogger().setLevel(getattr(logging, name.upper()))

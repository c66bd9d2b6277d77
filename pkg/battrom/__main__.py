from .start import main_cli

main_cli()

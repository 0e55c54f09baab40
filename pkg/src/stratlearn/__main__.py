"""Run the command-line interface with `python -m stratlearn`."""
import sys

from .cli import main

sys.exit(main())

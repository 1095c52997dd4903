"""``python -m k0lattice`` runs the command-line interface."""

from .cli import main

raise SystemExit(main(None))

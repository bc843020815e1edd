"""Allow running the command-line interface as ``python -m nsfland``."""

from .cli import main

if __name__ == "__main__":
    raise SystemExit(main())

"""CLI entrypoint.

`python -m bkernel` and the `bkernel` script both land here.
"""

from __future__ import annotations

import sys

from .cli import run


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

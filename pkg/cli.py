#!/usr/bin/env python3
"""CLI wrapper for running the engine from a source checkout."""

import sys

from qnf_engine.cli_app import main


if __name__ == "__main__":
    sys.exit(main())

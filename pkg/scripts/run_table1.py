#!/usr/bin/env python3
"""Re-evaluate the published optimal pulse parameters for all six
protocol/regime combinations and write table1.json."""

import sys

from rydion.cli import main

if __name__ == "__main__":
    sys.exit(main(["reproduce", "table1", "--out-dir", "results/table1"]))

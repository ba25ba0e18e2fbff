#!/usr/bin/env python3
"""Run the differential-evolution pulse search for one protocol/regime.

Usage: python scripts/run_optimization.py [A|B] [conservative|optimistic]
"""

import sys

from rydion.cli import main

if __name__ == "__main__":
    protocol = sys.argv[1] if len(sys.argv) > 1 else "B"
    regime = sys.argv[2] if len(sys.argv) > 2 else "conservative"
    sys.exit(main([
        "optimize", "--protocol", protocol, "--regime", regime,
        "--seeds", "11,23,47",
        "--out-prefix", f"results/opt_{protocol}_{regime}",
    ]))

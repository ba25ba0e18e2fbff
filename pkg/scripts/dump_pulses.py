#!/usr/bin/env python3
"""Emit (t, Omega_L, Delta_L) samples of the three protocol pulse shapes for
plotting."""

import sys

from rydion.cli import main

if __name__ == "__main__":
    status = 0
    for protocol in ("A", "B", "C"):
        status |= main([
            "pulse", "dump", "--protocol", protocol, "--regime", "conservative",
            "--out", f"results/pulse_{protocol}_conservative.csv",
        ])
    sys.exit(status)

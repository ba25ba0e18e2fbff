#!/usr/bin/env python3
"""Gate-time sweep with radiative decay in the optimization objective
(optimistic regime, lifetime 7.8 us), reproducing the decay-fidelity data."""

import sys

from rydion.cli import main

if __name__ == "__main__":
    taus = sys.argv[1] if len(sys.argv) > 1 else "0.2,0.3,0.5,0.8"
    sys.exit(main([
        "sweep-decay", "--protocol", "B", "--regime", "optimistic",
        "--gamma-r", str(1 / 7.8), "--tau-grid", taus,
        "--seeds", "11,23,47",
        "--out-prefix", "results/decay_sweep_optimistic",
    ]))

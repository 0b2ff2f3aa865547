#!/usr/bin/env python3
"""Time-resolved escape flux for the pulsed triangular barrier.

Writes results/rate_profile.csv: the flux rises linearly in t, peaks at
t_max = (theta*tau00^2 / (8(n-1)(V-E)))^(1/4) and decays as exp(-c t^4).
"""

import pathlib
import sys

from pulsetunnel.cli import RunConfig, cmd_rate, write_csv

OUT = pathlib.Path(__file__).resolve().parent.parent / "results"


def main() -> int:
    OUT.mkdir(exist_ok=True)
    config = RunConfig(
        barrier="triangular", V=10.0, E0=1.0, m=1.0, E=5.0,
        pulse="lorentz", amp=0.05, theta=2.0, n=3,
    )
    config.validate()
    columns, rows = cmd_rate(config)
    path = OUT / "rate_profile.csv"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        write_csv(fh, "rate", config, columns, rows)
    print(f"wrote {path} ({len(rows)} rows)")
    return 0


if __name__ == "__main__":
    sys.exit(main())

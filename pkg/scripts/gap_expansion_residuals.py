#!/usr/bin/env python3
"""Empirical uniformity of the large-gap expansion remainder.

For each (gamma, rho, alpha) on a compact grid, prints the residual
|F_num - F_asy| scaled by s^(1/3) across an s-range; a bounded scaled
column is the numerical content of the O(s^(-1/3)) remainder claim.
"""

import numpy as np

from hepearcey.asymptotics import gap_log_expansion
from hepearcey.fredholm import GridSpec, gap_log_probability
from hepearcey.pearcey import ModelParams


def main() -> None:
    grid = GridSpec(m=160)
    svals = np.array([20.0, 30.0, 40.0, 60.0, 80.0])
    print(f"{'gamma':>6} {'rho':>5} {'alpha':>5}  " + "  ".join(f"s={s:<5g}" for s in svals))
    for gamma in (0.25, 0.5, 0.9):
        for rho in (-1.0, 0.0, 1.0):
            for alpha in (0.0, 0.5, 1.0):
                params = ModelParams(alpha, rho)
                scaled = [
                    abs(
                        gap_log_probability(float(s), gamma, params, grid)
                        - gap_log_expansion(float(s), gamma, params)
                    )
                    * float(s) ** (1.0 / 3.0)
                    for s in svals
                ]
                row = "  ".join(f"{v:7.4f}" for v in scaled)
                print(f"{gamma:>6} {rho:>5} {alpha:>5}  {row}")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""The oscillatory term of the Hamiltonian, made visible.

Subtracts the three non-oscillatory expansion terms from the numerically
computed -R(s,s), multiplies by s, and prints the result next to the
predicted cosine 2|beta|/(3 sqrt 3) cos(2 psi(s)); their agreement shows
the phase and amplitude of the oscillation.
"""

import math

import numpy as np

from hepearcey.asymptotics import hamiltonian_expansion, oscillation_amplitude, phase
from hepearcey.fredholm import GridSpec, resolvent_at_endpoint
from hepearcey.pearcey import ModelParams


def main() -> None:
    params = ModelParams(0.0, 0.0)
    gamma = 0.5
    grid = GridSpec(m=160)
    amp = oscillation_amplitude(gamma)
    print(f"predicted amplitude 2|beta|/(3 sqrt 3) = {amp:.6f}")
    print(f"{'s':>6} {'s*osc_num':>12} {'amp*cos(2psi)':>15}")
    for s in np.linspace(40.0, 80.0, 41):
        s = float(s)
        osc = (
            -resolvent_at_endpoint(s, gamma, params, grid)
            - hamiltonian_expansion(s, gamma, params, terms=3)
        ) * s
        pred = amp * math.cos(2.0 * phase(s, gamma, params))
        print(f"{s:6.1f} {osc:12.6f} {pred:15.6f}")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Walk the family of waves from nearly flat to visibly steep.

The continuation warms each solve with a secant extrapolation of the
previous two members, so the whole sweep costs a handful of Newton
iterations per wave. The table shows how the speed, the Bernoulli
constant and the crest sharpen together as the steepness grows.
"""

import numpy as np

from stokespressure import WaveConfig, continue_family
from stokespressure.spectral_solver import midpoint_residual
from stokespressure.verifier import crest_angle

CFG = WaveConfig(mode_count=256)


def main():
    fam = continue_family(0.01, 0.12, CFG, initial_step=0.01)

    print("family of periodic deep-water waves (wavelength 2*pi, g = 1)\n")
    header = (f"{'s':>6} {'c':>12} {'E':>12} {'K':>8} {'angle':>8} "
              f"{'iters':>5} {'tail':>9} {'midres':>9}")
    print(header)
    print("-" * len(header))
    for m in fam.members:
        print(f"{m.steepness:6.3f} {m.solution.c:12.8f} {m.solution.E:12.8f} "
              f"{m.crest_indicator:8.4f} {crest_angle(m.solution):8.3f} "
              f"{m.newton_iters:5d} {m.tail_ratio:9.1e} "
              f"{midpoint_residual(m.solution):9.1e}")

    c = np.array([m.solution.c for m in fam.members])
    print(f"\nwave speed grew {100.0 * (c[-1] / c[0] - 1.0):.2f}% over the "
          f"sweep; every member kept its spectral tail below "
          f"{max(m.tail_ratio for m in fam.members):.1e}.")
    print("the crest angle falls monotonically toward the 120-degree "
          "corner of the limiting wave (see limiting_wave.py).")


if __name__ == "__main__":
    main()

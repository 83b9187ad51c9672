#!/usr/bin/env python3
"""Dump the conditioned-entropy landscape and its stationary directions.

Reads a state file (same JSON format as the CLI) or samples a random state,
then writes a theta,phi,entropy,residual grid to stdout or a file and prints
the refined stationary points.  Useful for plotting the optimization surface.
"""

import argparse
import math
import sys

import numpy as np

from qdiscord import random_state, stationary_scan, triple_from_matrix
from qdiscord.cli import load_state
from qdiscord.measurement import conditional_entropy_batch
from qdiscord.optimize import _residual_batch


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("state", nargs="?", help="JSON state file; omit for a random state")
    parser.add_argument("--seed", type=int, default=0, help="seed for the random state")
    parser.add_argument("--step-deg", type=float, default=2.0, help="grid step in degrees")
    parser.add_argument("--out", default="-", help="landscape CSV destination ('-' = stdout)")
    args = parser.parse_args()

    if args.state:
        rho = load_state(args.state)
    else:
        rho = random_state(rng=np.random.default_rng(args.seed))
    t = triple_from_matrix(rho)

    step = math.radians(args.step_deg)
    thetas = np.arange(0.0, math.pi / 2 + step / 2, step)
    phis = np.arange(0.0, 2 * math.pi, step)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    st = np.sin(tt.ravel())
    dirs = np.stack([st * np.cos(pp.ravel()), st * np.sin(pp.ravel()),
                     np.cos(tt.ravel())], axis=1)
    values = conditional_entropy_batch(t, dirs)
    residuals = _residual_batch(t, dirs)

    out = sys.stdout if args.out == "-" else open(args.out, "w")
    try:
        out.write("theta,phi,entropy,residual\n")
        for (th, ph), v, r in zip(zip(tt.ravel(), pp.ravel()), values, residuals):
            out.write(f"{th:.9g},{ph:.9g},{v:.9g},{'' if not np.isfinite(r) else format(r, '.9g')}\n")
    finally:
        if out is not sys.stdout:
            out.close()

    print("stationary directions (sorted by entropy):", file=sys.stderr)
    for point in stationary_scan(t):
        d = point.direction
        print(f"  theta={d.theta:.6f} phi={d.phi:.6f} "
              f"entropy={point.value:.9f} residual={point.residual:.2e}", file=sys.stderr)


if __name__ == "__main__":
    main()

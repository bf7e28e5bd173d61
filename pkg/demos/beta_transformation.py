"""Exponential orbits versus the beta transformation T(y) = <alpha y>.

The two iterations share the multiplier but not the invariant measure:
exponential orbits average against Lebesgue measure, while the
beta-transformation orbit averages against the Renyi-Parry density.
For the golden ratio and the indicator of [0, 1/tau) the two limits
are 0.618 and 0.724, far enough apart to see in a small batch.

Run:
    python3 demos/beta_transformation.py --count 20 --depth 5000
"""

import argparse

import numpy as np

from avglab import (
    PeriodicFunction,
    RenyiParryDensity,
    SeedPoint,
    beta_orbit,
    golden_ratio,
    renyi_parry_compare,
)

INV_TAU = 2.0 / (1.0 + np.sqrt(5.0))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=20, help="number of seeds")
    ap.add_argument("--depth", type=int, default=5000, help="orbit length")
    ap.add_argument("--seed", type=int, default=7, help="sampling seed")
    args = ap.parse_args()

    tau = golden_ratio()
    f = PeriodicFunction.step([INV_TAU, 1.0], [1.0, 0.0])
    seeds = [SeedPoint.sampled(args.seed, i, interval=(1.0, 2.0))
             for i in range(args.count)]
    rp = renyi_parry_compare(f, tau, seeds, args.depth)

    print(f"indicator of [0, 1/tau), {args.count} seeds, depth {args.depth}")
    print(f"  Lebesgue mean      = {rp['lebesgue_mean'].real:.6f}")
    print(f"  density integral   = {rp['density_integral']:.6f}")
    print(f"  exp-orbit median   = {rp['exp_orbit_avg']['median']:.6f} "
          f"(iqr {rp['exp_orbit_avg']['iqr']:.4f})")
    print(f"  beta-orbit median  = {rp['beta_orbit_avg']['median']:.6f} "
          f"(iqr {rp['beta_orbit_avg']['iqr']:.4f})")

    density = RenyiParryDensity.golden()
    bo = beta_orbit(tau, SeedPoint.exact(seeds[0].fraction() % 1), args.depth)
    hist, edges = np.histogram(bo.values(), bins=10, range=(0.0, 1.0),
                               density=True)
    print("\nempirical beta-orbit density vs invariant density:")
    for lo, hi, h in zip(edges, edges[1:], hist):
        mid = 0.5 * (lo + hi)
        print(f"  [{lo:.1f}, {hi:.1f})  empirical {h:.4f}   "
              f"invariant {density(mid):.4f}")


if __name__ == "__main__":
    main()

"""Birkhoff averages along <alpha^n x> converge to the function mean.

A trigonometric polynomial averages to its constant coefficient, and a
step function averages to its integral, for almost every seed.  The
script prints a convergence trace per checkpoint so the decay of
|S_N - M(f)| is visible directly.

Run:
    python3 demos/averaging_convergence.py --alpha 3/2 --count 3
"""

import argparse

from avglab import (
    Multiplier,
    PeriodicFunction,
    SeedPoint,
    TrigPolynomial,
    convergence_trace,
    generate_orbit,
)

CHECKPOINTS = (100, 1000, 10000)


def show_trace(label, f, orbit):
    trace = convergence_trace(f, orbit, schedule=CHECKPOINTS)
    target = trace.target
    print(f"  {label}: target {target.real:+.6f}{target.imag:+.6f}j")
    for (n, s), err in zip(trace.checkpoints, trace.abs_errors):
        print(f"    N={n:>6d}  S_N={s.real:+.6f}{s.imag:+.6f}j  "
              f"|S_N-M(f)|={err:.5f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", default="3/2", help="multiplier spec")
    ap.add_argument("--count", type=int, default=3, help="number of seeds")
    ap.add_argument("--seed", type=int, default=7, help="sampling seed")
    args = ap.parse_args()

    m = Multiplier.parse(args.alpha)
    # 2 + 3 e(x) has mean 2; the indicator of [0, 1/2) has mean 1/2
    trig = TrigPolynomial(2.0, [(1, 3.0)])
    step = PeriodicFunction.step([0.5, 1.0], [1.0, 0.0])

    for i in range(args.count):
        x = SeedPoint.sampled(args.seed, i, interval=(1.0, 2.0))
        orbit = generate_orbit(m, x, CHECKPOINTS[-1])
        print(f"seed x_{i} = {float(x.fraction()):.6f}")
        show_trace("trig polynomial 2 + 3 e(x)", trig, orbit)
        show_trace("indicator of [0, 1/2)   ", step, orbit)


if __name__ == "__main__":
    main()

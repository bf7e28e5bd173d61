"""The golden ratio orbit from x = 1 is the measure-zero exception.

For tau = (1 + sqrt(5))/2 the powers tau^n approach integers at the
exact geometric rate tau^(-n), so <tau^n> clusters at 0 and 1 instead
of equidistributing, and Birkhoff averages along it stay far from the
function mean.  Random seeds show none of this.  The Diophantine scan
separates the two cases mechanically.

Run:
    python3 demos/pisot_exception.py --depth 100
"""

import argparse
import math

from avglab import (
    SeedPoint,
    TrigPolynomial,
    birkhoff_average,
    dio_scan,
    generate_orbit,
    golden_ratio,
    integers,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--depth", type=int, default=100, help="scan depth")
    ap.add_argument("--epsilon", type=float, default=0.5,
                    help="non-approximation exponent offset")
    ap.add_argument("--seed", type=int, default=7, help="sampling seed")
    args = ap.parse_args()

    tau = golden_ratio()
    inv = 2.0 / (1.0 + math.sqrt(5.0))

    orbit = generate_orbit(tau, 1, 13)
    print("entries <tau^n> and their distance to {0, 1}:")
    print("  n    <tau^n>         dist        tau^(-n)")
    for n, v in enumerate(orbit.values()):
        d = min(v, 1.0 - v)
        print(f"  {n:2d}   {v:.10f}   {d:.3e}   {inv ** n:.3e}")

    f = TrigPolynomial(0.0, [(1, 1.0)])
    s = birkhoff_average(f, generate_orbit(tau, 1, args.depth))
    print(f"\nS_{args.depth}(e(x)) along the exceptional orbit = "
          f"{s.real:+.4f}{s.imag:+.4f}j (a typical orbit gives ~0)")

    scan = dio_scan(tau, 1, integers(), args.epsilon, args.depth)
    late = [n for n in scan["violations"] if 3 * n > 2 * args.depth]
    print(f"\ndio_scan(x=1): verdict {scan['verdict']}, "
          f"{len(scan['violations'])} violations, {len(late)} in the "
          f"final third")

    print(f"\ndio_scan on {3} random seeds:")
    for i in range(3):
        x = SeedPoint.sampled(args.seed, i, interval=(1.0, 2.0))
        r = dio_scan(tau, x, integers(), args.epsilon, args.depth)
        print(f"  x_{i}: verdict {r['verdict']}, "
              f"violations at n = {r['violations'] or 'none'}")


if __name__ == "__main__":
    main()

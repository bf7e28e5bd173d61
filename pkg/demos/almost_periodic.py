"""Bohr series truncation and the Stepanov norm toolkit.

A Bohr almost periodic series with summable coefficients is
approximated by its partial trigonometric polynomials with an explicit
tail bound, uniform over every orbit average.  The Stepanov seminorm
measures periodic functions through unit windows, and mollification
contracts toward the original function as the window shrinks.

Run:
    python3 demos/almost_periodic.py
"""

import argparse
import math

from avglab import (
    BohrSeries,
    Multiplier,
    SeedPoint,
    TrigPolynomial,
    birkhoff_average,
    generate_orbit,
    mollify,
    stepanov_norm,
    truncate_bohr,
)


def trig_difference(f, g):
    coeffs = dict(g.terms)
    terms = [(k, a - coeffs.pop(k, 0.0)) for k, a in f.terms]
    terms += [(k, -a) for k, a in coeffs.items()]
    return TrigPolynomial(f.a0 - g.a0, terms)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--depth", type=int, default=2000, help="orbit length")
    ap.add_argument("--seed", type=int, default=7, help="sampling seed")
    args = ap.parse_args()

    freqs = [1.0, math.sqrt(2.0), (1.0 + math.sqrt(5.0)) / 2.0,
             math.sqrt(3.0), math.pi]
    series = BohrSeries.geometric(freqs, first=1.0, ratio=0.5, a0=1.0)
    print("geometric Bohr series, coefficients 0.5^j on five frequencies")

    m = Multiplier.parse("3/2")
    x = SeedPoint.sampled(args.seed, 0, interval=(1.0, 2.0))
    orbit = generate_orbit(m, x, args.depth, keep_unreduced=True)
    full, _ = truncate_bohr(series, len(series.terms))
    s_full = birkhoff_average(full, orbit)

    print("  m   tail(m)    |S_N(f) - S_N(g_m)|")
    for cut in range(len(series.terms) + 1):
        g, tail = truncate_bohr(series, cut)
        s = birkhoff_average(g, orbit)
        gap = abs(s_full - s)
        ok = "<=" if gap <= tail else "EXCEEDS"
        print(f"  {cut}   {tail:.5f}    {gap:.5f}  {ok} tail")

    sine = TrigPolynomial.sine(1)
    norm = stepanov_norm(sine)
    print(f"\nstepanov_norm(sin 2 pi x) = {float(norm):.10f}"
          f"   (2/pi = {2.0 / math.pi:.10f})")

    print("\nmollification: window delta, scale factor on sine, "
          "||f - f_delta||_S")
    for delta in (0.25, 1.0 / 16.0, 1.0 / 64.0):
        g = mollify(sine, delta)
        factor = math.sin(2.0 * math.pi * delta) / (2.0 * math.pi * delta)
        resid = float(stepanov_norm(trig_difference(sine, g)))
        print(f"  delta = {delta:<9g} factor = {factor:.6f}   "
              f"residual = {resid:.6f}")


if __name__ == "__main__":
    main()

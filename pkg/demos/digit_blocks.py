"""Digit-block statistics of <2^n x>: almost every seed looks normal.

The base-q digits of x drive the orbit <q^n x>, so block frequencies
of the expansion measure equidistribution of the orbit under digit
shifts.  Rational seeds are eventually periodic and miss blocks;
sampled seeds show every block at frequency near q^(-L).

Run:
    python3 demos/digit_blocks.py --digits 20000 --count 5
"""

import argparse
from fractions import Fraction

from avglab import SeedPoint, digit_block_frequencies


def show(label, seed, base, digits, block_max):
    print(f"\n{label}")
    for length in range(1, block_max + 1):
        bf = digit_block_frequencies(seed, base, length, digits)
        freqs = bf.as_dict()
        uniform = base ** -length
        worst = max(abs(v - uniform) for v in freqs.values())
        missing = [k for k, v in freqs.items() if v == 0.0]
        line = f"  L={length}: max |freq - {uniform:g}| = {worst:.5f}"
        if missing:
            line += f", absent blocks: {', '.join(sorted(missing))}"
        print(line)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--base", type=int, default=2, help="digit base")
    ap.add_argument("--digits", type=int, default=20000,
                    help="digits per expansion")
    ap.add_argument("--count", type=int, default=5, help="sampled seeds")
    ap.add_argument("--block-max", type=int, default=3,
                    help="largest block length")
    ap.add_argument("--seed", type=int, default=7, help="sampling seed")
    args = ap.parse_args()

    # 1/3 in base 2 repeats 01: both length-1 blocks hit exactly 1/2,
    # while 00 and 11 never occur
    show("x = 1/3 (rational, eventually periodic)",
         SeedPoint.exact(Fraction(1, 3)), args.base, args.digits,
         args.block_max)

    bits = args.digits + 16  # precision guard for sampled expansions
    for i in range(args.count):
        x = SeedPoint.sampled(args.seed, i, interval=(0.0, 1.0), bits=bits)
        show(f"sampled seed x_{i}", x, args.base, args.digits,
             args.block_max)


if __name__ == "__main__":
    main()

"""Exact integer kernels for high-precision real arithmetic.

Reals are carried either as exact rationals (pairs of ints), as quadratic
integers (A + B*sqrt(d))/C with ints A, B, C, or as scaled integers
V ~= v * 2**F for a per-computation fraction-bit count F.  Everything here
is pure integer arithmetic: deterministic, thread safe, no global state.
gmpy2's mpz is used when importable, otherwise plain int.

mpz(n)                  big-int constructor (gmpy2 or int)
iisqrt(n)               floor square root
sqrt_scaled(d, bits)    floor(sqrt(d) * 2**bits)
floor_sqrt_term(b, d)   floor(b * sqrt(d)), b any sign
floor_quadratic(a, b, d, c)   floor((a + b*sqrt(d)) / c), c > 0
frac_to_float(num, den)       num/den in [0, 1) as a float, clamped below 1
is_square_free(d)       trial-division square-free test
"""

from __future__ import annotations

import math

try:
    from gmpy2 import isqrt as _isqrt, mpz
except ImportError:  # pragma: no cover - gmpy2 is optional
    from math import isqrt as _isqrt

    mpz = int

#: largest float64 below 1; fractional parts are clamped here, never 1.0
ONE_BELOW = math.nextafter(1.0, 0.0)


def iisqrt(n):
    """floor(sqrt(n)) for a nonnegative int."""
    return _isqrt(mpz(n))


def sqrt_scaled(d: int, bits: int):
    """floor(sqrt(d) * 2**bits) for d >= 0."""
    return iisqrt(mpz(d) << (2 * bits))


def floor_sqrt_term(b, d: int):
    """floor(b * sqrt(d)) for int b of any sign, int d >= 0.

    For b < 0 and b*sqrt(d) irrational the floor is -isqrt(b*b*d) - 1;
    the perfect-square case (sqrt(d) an integer) is handled exactly.
    """
    if b == 0 or d == 0:
        return mpz(0)
    sq = mpz(b) * b * d
    s = iisqrt(sq)
    if b > 0:
        return s
    if s * s == sq:
        return -s
    return -s - 1


def floor_quadratic(a, b, d: int, c):
    """Exact floor((a + b*sqrt(d)) / c) with int a, b, c (c > 0), d >= 0.

    Uses floor(a + b*sqrt(d)) = a + floor(b*sqrt(d)); since no integer lies
    strictly between that value and the real one, integer floor division by
    c gives the exact answer.
    """
    if c <= 0:
        raise ValueError("floor_quadratic needs c > 0")
    return (mpz(a) + floor_sqrt_term(b, d)) // c


def frac_to_float(num, den) -> float:
    """num/den as float for 0 <= num < den, clamped to [0, 1).

    Correctly rounded int division can land exactly on 1.0 when
    num/den > 1 - 2**-54; the clamp keeps the half-open invariant and is
    within any stamped error.
    """
    if num < 0 or num >= den:
        raise ValueError("frac_to_float needs 0 <= num < den")
    f = float(num / den)
    if f >= 1.0:
        return ONE_BELOW
    if f < 0.0:  # pragma: no cover - defensive
        return 0.0
    return f


def is_square_free(d: int) -> bool:
    """True when no prime square divides d (d >= 1)."""
    if d < 1:
        return False
    if d % 4 == 0:
        return False
    while d % 2 == 0:
        d //= 2
    p = 3
    while p * p <= d:
        if d % (p * p) == 0:
            return False
        while d % p == 0:
            d //= p
        p += 2
    return True


def log2_int(n) -> float:
    """log2(|n|) for a nonzero int of any size, accurate to ~2**-50 relative."""
    n = abs(int(n))
    if n == 0:
        raise ValueError("log2_int(0)")
    bl = n.bit_length()
    if bl <= 64:
        return math.log2(n)
    top = n >> (bl - 64)
    return (bl - 64) + math.log2(top)

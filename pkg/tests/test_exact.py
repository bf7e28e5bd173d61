"""Integer kernels: exact floors, scaled roots, float conversion."""

import math
from fractions import Fraction

import numpy as np
import pytest

from avglab.exact import (
    ONE_BELOW,
    floor_quadratic,
    floor_sqrt_term,
    frac_to_float,
    is_square_free,
    log2_int,
    sqrt_scaled,
)


def test_floor_sqrt_term_against_high_precision():
    rng = np.random.default_rng(3)
    for _ in range(300):
        b = int(rng.integers(-10**6, 10**6))
        d = int(rng.integers(2, 10**4))
        got = floor_sqrt_term(b, d)
        # 400-bit scaled reference
        s = math.isqrt(b * b * d << 400)
        ref = (s if b >= 0 else -s - (s * s != (b * b * d << 400))) >> 200
        assert got == ref


def test_floor_sqrt_term_perfect_squares():
    assert floor_sqrt_term(2, 4) == 4
    assert floor_sqrt_term(-2, 4) == -4
    assert floor_sqrt_term(-3, 9) == -9
    assert floor_sqrt_term(0, 7) == 0


def test_floor_quadratic_matches_fraction_bounds():
    rng = np.random.default_rng(5)
    for _ in range(300):
        a = int(rng.integers(-10**9, 10**9))
        b = int(rng.integers(-10**5, 10**5))
        d = int(rng.integers(2, 1000))
        c = int(rng.integers(1, 10**6))
        k = floor_quadratic(a, b, d, c)
        # k <= (a + b sqrt d)/c < k + 1, checked by squaring
        lo = k * c - a          # need b sqrt(d) >= lo
        hi = (k + 1) * c - a    # need b sqrt(d) < hi
        assert quad_ge(b, d, lo)
        assert not quad_ge(b, d, hi)


def quad_ge(b, d, t):
    """Exact test of b*sqrt(d) >= t for integers."""
    if b >= 0:
        if t <= 0:
            return True
        return b * b * d >= t * t
    if t >= 0:
        return False
    return b * b * d <= t * t


def test_floor_quadratic_requires_positive_denominator():
    with pytest.raises(ValueError):
        floor_quadratic(1, 1, 5, 0)


def test_sqrt_scaled_accuracy():
    for d in (2, 3, 5, 7, 1234567):
        s = sqrt_scaled(d, 128)
        assert s * s <= d << 256 < (s + 1) * (s + 1)


def test_frac_to_float_correct_rounding():
    rng = np.random.default_rng(9)
    for _ in range(200):
        num = int(rng.integers(0, 10**15))
        den = int(rng.integers(1, 10**15))
        num %= den
        got = frac_to_float(num, den)
        assert got == float(Fraction(num, den)) or got == ONE_BELOW
        assert 0.0 <= got < 1.0


def test_frac_to_float_clamps_below_one():
    den = 1 << 200
    assert frac_to_float(den - 1, den) == ONE_BELOW
    assert frac_to_float(0, den) == 0.0


def test_is_square_free():
    assert is_square_free(2)
    assert is_square_free(5)
    assert is_square_free(2 * 3 * 5 * 7)
    assert not is_square_free(4)
    assert not is_square_free(12)
    assert not is_square_free(49)
    assert not is_square_free(1 << 20)


def test_log2_int_accuracy():
    rng = np.random.default_rng(13)
    for _ in range(100):
        n = int(rng.integers(1, 2**60))
        assert abs(log2_int(n) - math.log2(n)) < 1e-12
    big = (1 << 500) + 12345
    assert abs(log2_int(big) - 500.0) < 1e-10

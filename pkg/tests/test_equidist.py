"""Discrepancy formulas against brute-force interval counting."""

import math
from fractions import Fraction

import numpy as np
import pytest

from avglab.equidist import (
    block_frequencies,
    digit_block_frequencies,
    digit_stream,
    discrepancy_report,
    discrepancy_trace,
    extreme_discrepancy,
    star_discrepancy,
    ud_bound_check,
    weyl_sum,
)
from avglab.orbits import RationalMultiplier, SeedPoint, generate_orbit


def brute_star(u):
    """sup_t |#{u_i < t}/N - t| over candidate thresholds."""
    n = len(u)
    best = 0.0
    for t in list(u) + [1.0]:
        lt = sum(1 for v in u if v < t) / n
        le = sum(1 for v in u if v <= t) / n
        best = max(best, abs(lt - t), abs(le - t))
    return best


def brute_extreme(u):
    """sup over subintervals, endpoints drawn from the sample."""
    n = len(u)
    eps = 1e-12
    cands = sorted({0.0, 1.0} | set(u) | {min(v + eps, 1.0) for v in u})
    best = 0.0
    for i, s in enumerate(cands):
        for t in cands[i + 1:]:
            inside = sum(1 for v in u if s <= v < t) / n
            best = max(best, abs(inside - (t - s)))
            inside_cl = sum(1 for v in u if s <= v <= t) / n
            best = max(best, abs(inside_cl - (t - s)))
    return best


def test_star_known_values():
    assert star_discrepancy([1 / 8, 3 / 8, 5 / 8, 7 / 8]) == pytest.approx(1 / 8)
    assert star_discrepancy([0.0, 0.25, 0.5, 0.75]) == pytest.approx(0.25)
    assert star_discrepancy([0.0]) == pytest.approx(1.0)
    assert star_discrepancy([0.3, 0.3, 0.3]) == pytest.approx(0.7)


def test_extreme_known_values():
    assert extreme_discrepancy([1 / 8, 3 / 8, 5 / 8, 7 / 8]) == pytest.approx(0.25)
    assert extreme_discrepancy([0.0, 0.25, 0.5, 0.75]) == pytest.approx(0.25)
    assert extreme_discrepancy([0.5]) == pytest.approx(1.0)
    assert extreme_discrepancy([0.3, 0.3, 0.3]) == pytest.approx(1.0)


def test_discrepancy_against_brute_force():
    rng = np.random.default_rng(17)
    for trial in range(40):
        n = int(rng.integers(1, 30))
        u = rng.random(n)
        if trial % 3 == 0:
            u = np.round(u * 8) / 8  # force ties and endpoint hits
        assert star_discrepancy(u) == pytest.approx(brute_star(u), abs=1e-9)
        assert extreme_discrepancy(u) == pytest.approx(brute_extreme(u), abs=1e-9)


def test_extreme_dominates_star():
    rng = np.random.default_rng(23)
    for _ in range(30):
        u = rng.random(int(rng.integers(1, 200)))
        d_star = star_discrepancy(u)
        d_ext = extreme_discrepancy(u)
        assert d_star - 1e-12 <= d_ext <= 2 * d_star + 1e-12
        assert d_star >= 1.0 / (2 * len(u)) - 1e-12


def test_extreme_translation_invariant():
    rng = np.random.default_rng(27)
    u = rng.random(100)
    base = extreme_discrepancy(u)
    for c in (0.1, 0.37, 0.9):
        assert extreme_discrepancy((u + c) % 1.0) == pytest.approx(base, abs=1e-10)


def test_discrepancy_trace():
    u = np.array([0.5, 0.25, 0.75])
    rows = discrepancy_trace(u, [1, 2, 3])
    assert rows[0][0] == 1
    assert rows[0][1] == pytest.approx(star_discrepancy(u[:1]))
    assert rows[2][2] == pytest.approx(extreme_discrepancy(u))
    with pytest.raises(ValueError):
        discrepancy_trace(u, [4])
    with pytest.raises(ValueError):
        discrepancy_trace(u, [2, 2])


def test_orbit_accepted_directly():
    o = generate_orbit(RationalMultiplier(2), Fraction(1, 3), 8)
    assert star_discrepancy(o) == star_discrepancy(o.entries)


def test_input_validation():
    with pytest.raises(ValueError):
        star_discrepancy([])
    with pytest.raises(ValueError):
        star_discrepancy([1.5])
    with pytest.raises(ValueError):
        extreme_discrepancy([-0.1])
    with pytest.raises(ValueError):
        star_discrepancy([np.nan])


def test_weyl_sum_exact_cases():
    u = np.arange(8) / 8
    assert weyl_sum(u, 0) == 1.0  # exactly, no quadrature
    assert abs(weyl_sum(u, 1)) < 1e-14
    assert abs(weyl_sum(u, 3)) < 1e-14
    assert weyl_sum(u, 8) == pytest.approx(1.0)
    assert weyl_sum([0.0, 0.5, 0.0, 0.5], 1) == pytest.approx(0.0, abs=1e-15)
    assert weyl_sum([0.25, 0.25], 2) == pytest.approx(-1.0)


def test_weyl_sum_matches_direct_evaluation():
    rng = np.random.default_rng(29)
    u = rng.random(50)
    for k in (1, 2, -3):
        direct = sum(complex(math.cos(2 * math.pi * k * v),
                             math.sin(2 * math.pi * k * v)) for v in u) / 50
        assert weyl_sum(u, k) == pytest.approx(direct, abs=1e-12)


def test_discrepancy_report_shape():
    rng = np.random.default_rng(41)
    u = rng.random(64)
    rep = discrepancy_report(u, ks=(0, 1, -1), checkpoints=[16, 64])
    assert rep.n == 64
    assert rep.weyl[0] == 1.0
    d = rep.to_json_dict()
    assert d["N"] == 64
    assert [w["k"] for w in d["weyl"]] == [-1, 0, 1]
    assert len(d["trace"]) == 2
    assert d["trace"][1][0] == 64
    assert d["star"] == pytest.approx(star_discrepancy(u))


def test_ud_bound_check_flat_ratios_pass():
    ns = [10, 100, 1000, 10000]
    stars = [math.log(n) ** 1.6 / math.sqrt(n) for n in ns]
    out = ud_bound_check([(n, s) for n, s in zip(ns, stars)], epsilon=0.1)
    assert out["passed"]
    assert out["c_hat"] == pytest.approx(1.0)
    assert len(out["ratios"]) == 4


def test_ud_bound_check_growth_fails():
    ns = [10, 1000, 100000, 10000000]
    # star stuck at constant: ratio grows like sqrt(N)/polylog
    trace = [(n, 0.5) for n in ns]
    out = ud_bound_check(trace, epsilon=0.5)
    assert not out["passed"]


def test_ud_bound_check_accepts_trace_triples():
    trace = [(10, 0.1, 0.15), (100, 0.05, 0.08), (1000, 0.01, 0.02),
             (10000, 0.004, 0.008)]
    out = ud_bound_check(trace)
    assert "c_hat" in out and len(out["ratios"]) == 4


def test_ud_bound_check_validation():
    with pytest.raises(ValueError):
        ud_bound_check([])
    with pytest.raises(ValueError):
        ud_bound_check([(2, 0.1), (3, 0.1), (4, 0.1), (5, 0.1)])
    with pytest.raises(ValueError):
        ud_bound_check([(3, 0.1), (5, 0.1), (5, 0.1)])
    with pytest.raises(ValueError):
        ud_bound_check([(3, 0.1), (5, 0.1)], epsilon=0.0)


def test_digit_stream_known_rationals():
    d = digit_stream(Fraction(1, 3), 10, 6)
    assert d.tolist() == [3, 3, 3, 3, 3, 3]
    d = digit_stream(Fraction(1, 7), 10, 6)
    assert d.tolist() == [1, 4, 2, 8, 5, 7]
    d = digit_stream(Fraction(5, 8), 2, 5)
    assert d.tolist() == [1, 0, 1, 0, 0]
    # integer part is discarded
    d = digit_stream(Fraction(9, 4), 2, 3)
    assert d.tolist() == [0, 1, 0]
    d = digit_stream(0, 7, 4)
    assert d.tolist() == [0, 0, 0, 0]


def test_digit_stream_long_run_matches_decimal_string():
    # 1/7 repeats 142857; check far past one bignum chunk
    d = digit_stream(Fraction(1, 7), 10, 200)
    expect = ("142857" * 34)[:200]
    assert "".join(str(v) for v in d.tolist()) == expect


def test_digit_stream_precision_guard():
    s = SeedPoint.sampled(3, 0, bits=64)
    digit_stream(s, 2, 48)
    with pytest.raises(ValueError, match="artifact"):
        digit_stream(s, 2, 49)
    with pytest.raises(ValueError, match="artifact"):
        digit_stream(s, 10, 20)


def test_block_frequencies_enumeration():
    # digits 0,1,0,1,... blocks of length 2: "01" and "10" alternate
    d = np.tile([0, 1], 8)
    bf = block_frequencies(d, 2, 2)
    assert bf.total == 15
    assert bf.counts[0b01] == 8
    assert bf.counts[0b10] == 7
    assert bf.counts[0b00] == 0
    assert bf.as_dict()["01"] == pytest.approx(8 / 15)


def test_digit_block_frequencies_one_third():
    bf = digit_block_frequencies(Fraction(1, 3), 2, 1, 1000)
    assert bf.frequencies[0] == pytest.approx(0.5)
    assert bf.frequencies[1] == pytest.approx(0.5)
    bf2 = digit_block_frequencies(Fraction(1, 3), 2, 2, 1001)
    assert bf2.counts[0b00] == 0
    assert bf2.counts[0b11] == 0
    assert bf2.frequencies[0b01] == pytest.approx(0.5)
    assert bf2.frequencies[0b10] == pytest.approx(0.5)


def test_block_frequencies_uniform_stream():
    rng = np.random.default_rng(31)
    d = rng.integers(0, 2, size=20000)
    bf = block_frequencies(d, 2, 3)
    assert bf.max_abs_deviation() < 0.02
    assert bf.counts.sum() == bf.total


def test_block_frequencies_validation():
    with pytest.raises(ValueError):
        block_frequencies([0, 1], 2, 3)
    with pytest.raises(ValueError):
        block_frequencies([0, 2], 2, 1)
    with pytest.raises(ValueError):
        block_frequencies([0, 1, 0], 2, 0)

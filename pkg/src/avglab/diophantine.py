"""Uniformly discrete point sets and orbit non-approximation scans.

A uniformly discrete set Y carries a certified minimum gap and answers
exact nearest-point distance queries.  The scan walks v_n = alpha^(n-1) x
for n = 1 .. N and flags every n where dist(v_n, Y) drops below the
threshold n^-(1+epsilon); the Borel-Cantelli style budget bounds the
measure of seeds in a unit interval that can produce late flags.

All set variants have rational points, so distances from rational query
points are exact Fractions; the only approximation in a scan is the
orbit store itself, whose stamped error certifies each comparison.
Comparisons landing inside the error band trigger precision doubling.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import floor_quadratic
from .orbits import (
    Multiplier,
    OrbitPrecisionError,
    QuadraticMultiplier,
    SeedPoint,
    generate_orbit,
)

__all__ = [
    "UniformlyDiscreteSet",
    "Lattice",
    "FiniteSet",
    "BeattySet",
    "UnionSet",
    "integers",
    "dist",
    "dio_scan",
    "cantelli_budget",
]


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError("query point must be finite")
        return Fraction(x)
    raise TypeError(f"expected int, float, or Fraction, got {type(x).__name__}")


class UniformlyDiscreteSet:
    """Base for point sets with a certified positive minimum gap.

    Subclasses provide dist_exact (exact Fraction distance from a
    Fraction query), points_between (sorted points in a closed window),
    and a min_gap attribute.
    """

    min_gap: Fraction | float

    def dist_exact(self, x: Fraction) -> Fraction:
        raise NotImplementedError

    def points_between(self, lo: Fraction, hi: Fraction) -> list[Fraction]:
        raise NotImplementedError

    def dist(self, x) -> float:
        """Nearest-point distance, correctly rounded from the exact value."""
        return float(self.dist_exact(_as_fraction(x)))

    def contains(self, x) -> bool:
        return self.dist_exact(_as_fraction(x)) == 0


@dataclass(frozen=True)
class Lattice(UniformlyDiscreteSet):
    """Arithmetic progression offset + k*spacing over all integers k."""

    offset: Fraction = Fraction(0)
    spacing: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "offset", _as_fraction(self.offset))
        object.__setattr__(self, "spacing", _as_fraction(self.spacing))
        if self.spacing <= 0:
            raise ValueError("spacing must be positive")

    @property
    def min_gap(self) -> Fraction:
        return self.spacing

    def dist_exact(self, x: Fraction) -> Fraction:
        r = (x - self.offset) % self.spacing
        return min(r, self.spacing - r)

    def points_between(self, lo: Fraction, hi: Fraction) -> list[Fraction]:
        lo, hi = _as_fraction(lo), _as_fraction(hi)
        k_lo = math.ceil((lo - self.offset) / self.spacing)
        k_hi = math.floor((hi - self.offset) / self.spacing)
        return [self.offset + k * self.spacing for k in range(k_lo, k_hi + 1)]


class FiniteSet(UniformlyDiscreteSet):
    """Finite sorted collection of rational points."""

    def __init__(self, points):
        pts = sorted(_as_fraction(p) for p in points)
        if not pts:
            raise ValueError("finite set needs at least one point")
        for a, b in zip(pts, pts[1:]):
            if a == b:
                raise ValueError(f"duplicate point {a}")
        self.points = tuple(pts)
        self.min_gap = (
            min(b - a for a, b in zip(pts, pts[1:])) if len(pts) > 1 else math.inf
        )

    def dist_exact(self, x: Fraction) -> Fraction:
        i = bisect.bisect_left(self.points, x)
        best = None
        for j in (i - 1, i):
            if 0 <= j < len(self.points):
                cand = abs(x - self.points[j])
                best = cand if best is None or cand < best else best
        return best

    def points_between(self, lo: Fraction, hi: Fraction) -> list[Fraction]:
        lo, hi = _as_fraction(lo), _as_fraction(hi)
        return [p for p in self.points if lo <= p <= hi]


def _floor_quad(A: Fraction, B: Fraction, d: int) -> int:
    """floor(A + B*sqrt(d)) via the exact integer kernel."""
    den = A.denominator * B.denominator // math.gcd(A.denominator, B.denominator)
    a = A.numerator * (den // A.denominator)
    b = B.numerator * (den // B.denominator)
    return int(floor_quadratic(a, b, d, den))


class BeattySet(UniformlyDiscreteSet):
    """Points scale*floor(k*slope) + offset for integer k, slope > 1 irrational.

    The slope is a quadratic irrational so floors are computed exactly.
    Every point is rational (scale and offset are rational and the floor
    is an integer), so distance queries stay exact; the slope only
    selects which integers appear.
    """

    def __init__(self, slope: QuadraticMultiplier, scale=1, offset=0):
        if not isinstance(slope, QuadraticMultiplier):
            raise TypeError("slope must be a quadratic irrational (QuadraticMultiplier)")
        self.scale = _as_fraction(scale)
        self.offset = _as_fraction(offset)
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        self.slope = slope
        floor_slope = _floor_quad(slope.a, slope.b, slope.d)
        if floor_slope < 1:
            raise ValueError("slope must exceed 1")
        # consecutive floor(k*slope) differ by floor(slope) or floor(slope)+1
        self.min_gap = self.scale * floor_slope
        # 1/slope = (a - b sqrt d) / (a^2 - b^2 d), cached as coefficients
        norm = slope.a * slope.a - slope.b * slope.b * slope.d
        self._inv_a = slope.a / norm
        self._inv_b = -slope.b / norm

    def _floor_k_slope(self, k: int) -> int:
        return _floor_quad(k * self.slope.a, k * self.slope.b, self.slope.d)

    def _floor_div_slope(self, w: Fraction) -> int:
        return _floor_quad(w * self._inv_a, w * self._inv_b, self.slope.d)

    def _point(self, k: int) -> Fraction:
        return self.scale * self._floor_k_slope(k) + self.offset

    def dist_exact(self, x: Fraction) -> Fraction:
        w = (x - self.offset) / self.scale
        k0 = self._floor_div_slope(w)
        best = None
        for k in (k0 - 1, k0, k0 + 1, k0 + 2):
            cand = abs(x - self._point(k))
            best = cand if best is None or cand < best else best
        return best

    def points_between(self, lo: Fraction, hi: Fraction) -> list[Fraction]:
        lo, hi = _as_fraction(lo), _as_fraction(hi)
        k = self._floor_div_slope((lo - self.offset) / self.scale) - 2
        out = []
        while True:
            p = self._point(k)
            if p > hi:
                break
            if p >= lo:
                out.append(p)
            k += 1
        return out


class UnionSet(UniformlyDiscreteSet):
    """Union of uniformly discrete parts.

    Distances are exact minima over the parts.  The certified gap is the
    smaller of the parts' own gaps and the observed cross-part gap over a
    probe window wide enough to show several points of every unbounded
    part; it is checked positive after collapsing duplicated points.
    """

    def __init__(self, parts):
        parts = tuple(parts)
        if not parts:
            raise ValueError("union needs at least one part")
        for p in parts:
            if not isinstance(p, UniformlyDiscreteSet):
                raise TypeError("union parts must be uniformly discrete sets")
        self.parts = parts
        self.min_gap = self._merged_gap()
        if not self.min_gap > 0:
            raise ValueError("merged minimum gap is not positive")

    def _probe_radius(self) -> Fraction:
        r = Fraction(1)
        for p in self.parts:
            if isinstance(p, Lattice):
                r = max(r, abs(p.offset) + 4 * p.spacing)
            elif isinstance(p, BeattySet):
                span = p.scale * (_floor_quad(p.slope.a, p.slope.b, p.slope.d) + 1)
                r = max(r, abs(p.offset) + 4 * span)
            elif isinstance(p, FiniteSet):
                r = max(r, abs(p.points[0]), abs(p.points[-1]))
            elif isinstance(p, UnionSet):
                r = max(r, p._probe_radius())
        return r + 1

    def _merged_gap(self):
        gap = min(p.min_gap for p in self.parts)
        r = self._probe_radius()
        merged = sorted(set().union(*(p.points_between(-r, r) for p in self.parts)))
        for a, b in zip(merged, merged[1:]):
            gap = min(gap, b - a)
        return gap

    def dist_exact(self, x: Fraction) -> Fraction:
        return min(p.dist_exact(x) for p in self.parts)

    def points_between(self, lo: Fraction, hi: Fraction) -> list[Fraction]:
        return sorted(set().union(*(p.points_between(lo, hi) for p in self.parts)))


def integers() -> Lattice:
    """The integer lattice."""
    return Lattice(Fraction(0), Fraction(1))


def dist(x, y_set: UniformlyDiscreteSet) -> float:
    """Nearest-point distance from x to the set, exact then rounded once."""
    return y_set.dist(x)


_SCAN_SLACKS = (0, 64, 128, 192)


def dio_scan(
    multiplier: Multiplier,
    x,
    y_set: UniformlyDiscreteSet,
    epsilon: float,
    count: int,
    *,
    target_error: float = math.ldexp(1.0, -40),
    budget_mb: float | None = None,
) -> dict:
    """Scan v_n = alpha^(n-1) x for approaches to Y closer than n^-(1+eps).

    Returns a record with the violating indices (dist below threshold),
    exact hits (stored orbit value in Y, reported separately), a verdict,
    and the measure budget for the seed's unit interval.  The verdict is
    "suspect-exceptional" when any violation lands in the final third of
    [1, N], else "finite-violations".

    Thresholds are the double-precision values of n^-(1+epsilon).  Each
    comparison is certified against the orbit store's stamped absolute
    error; a distance within that band of the threshold (or of zero) is
    indeterminate and the scan retries with a deeper store, at most
    three times, then raises OrbitPrecisionError.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if count < 1:
        raise ValueError("count must be >= 1")
    if not isinstance(y_set, UniformlyDiscreteSet):
        raise TypeError("y_set must be a uniformly discrete set")
    seed = x if isinstance(x, SeedPoint) else SeedPoint.exact(x)

    power = -(1.0 + float(epsilon))
    stuck = None
    for slack in _SCAN_SLACKS:
        orbit = generate_orbit(
            multiplier,
            seed,
            count,
            target_error=target_error,
            keep_unreduced=True,
            store_slack_bits=slack,
            budget_mb=budget_mb,
        )
        store = orbit.unreduced
        err = Fraction(store.abs_error)
        violations: list[int] = []
        hits: list[int] = []
        stuck = None
        for n in range(1, count + 1):
            d = y_set.dist_exact(store.fraction(n - 1))
            if d == 0:
                hits.append(n)
                continue
            if d <= err:
                stuck = n  # cannot tell an exact hit from a near approach
                break
            threshold = Fraction(float(n) ** power)
            if abs(d - threshold) <= err:
                stuck = n
                break
            if d < threshold:
                violations.append(n)
        if stuck is None:
            break
    if stuck is not None:
        raise OrbitPrecisionError(
            f"comparison at n = {stuck} stays inside the certified error band "
            "after three precision doublings"
        )

    verdict = (
        "suspect-exceptional"
        if any(3 * n > 2 * count for n in violations)
        else "finite-violations"
    )
    base = math.floor(float(seed.fraction()))
    budget = cantelli_budget(multiplier, (base, base + 1), y_set, epsilon, count)
    return {
        "alpha": multiplier.spec_string(),
        "x": float(seed.fraction()),
        "epsilon": float(epsilon),
        "N": int(count),
        "violations": violations,
        "hits": hits,
        "verdict": verdict,
        "budget": budget,
    }


def cantelli_budget(
    multiplier: Multiplier,
    interval,
    y_set: UniformlyDiscreteSet,
    epsilon: float,
    count: int,
) -> float:
    """Measure bound on seeds in a unit interval violating the scan threshold.

    Sums over n = 1 .. N the measure of x in the interval with
    dist(alpha^(n-1) x, Y) < n^-(1+epsilon): each target point pulls back
    to a window of width 2/(n^(1+eps) |alpha|^(n-1)) and at most
    1 + floor(|alpha|^(n-1) / min_gap) points can intersect the image of
    the interval.  Once |alpha|^(n-1) passes 2**52 the bracket over the
    power is replaced by 1/min_gap plus the vanishing remainder, which
    changes the sum by less than one part in 2**50.
    """
    lo, hi = interval
    if not float(hi) - float(lo) == 1.0:
        raise ValueError("interval must have unit length")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if count < 1:
        raise ValueError("count must be >= 1")
    a = abs(multiplier.as_float())
    delta = float(y_set.min_gap)
    one_plus = 1.0 + float(epsilon)
    total = 0.0
    a_pow = 1.0
    exact_cap = float(2**52)
    for n in range(1, count + 1):
        width = 2.0 / float(n) ** one_plus
        if a_pow <= exact_cap:
            factor = (1.0 + math.floor(a_pow / delta)) / a_pow
        else:
            factor = (0.0 if math.isinf(a_pow) else 1.0 / a_pow) + 1.0 / delta
        total += width * factor
        if not math.isinf(a_pow):
            a_pow *= a
    return total

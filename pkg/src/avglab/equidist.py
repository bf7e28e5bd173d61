"""Equidistribution statistics for point sets in the unit interval.

Star and extreme discrepancy via the sorted-sample formulas, normalized
exponential sums, a growth diagnostic for discrepancy against the
root-N-times-log-power envelope, and exact digit-block frequencies of
rational seeds under integer bases.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .orbits import FractionalOrbit, SeedPoint

__all__ = [
    "star_discrepancy",
    "extreme_discrepancy",
    "discrepancy_trace",
    "weyl_sum",
    "DiscrepancyReport",
    "discrepancy_report",
    "ud_bound_check",
    "digit_stream",
    "BlockFrequencies",
    "block_frequencies",
    "digit_block_frequencies",
]


def _validated(values):
    if isinstance(values, FractionalOrbit):
        values = values.entries
    u = np.asarray(values, dtype=float)
    if u.ndim != 1 or u.size == 0:
        raise ValueError("values must be a nonempty 1-d array")
    if not np.all(np.isfinite(u)):
        raise ValueError("values must be finite")
    if u.min() < 0.0 or u.max() > 1.0:
        raise ValueError("values must lie in [0, 1]")
    return u


def star_discrepancy(values):
    """Star discrepancy of a finite point set in [0, 1].

    Uses the sorted-sample formula
    D*_N = max_i max(i/N - u_(i), u_(i) - (i-1)/N),
    exact up to float rounding, O(N log N).

    Parameters
    ----------
    values : array_like or FractionalOrbit
        Points in [0, 1].

    Returns
    -------
    float
        Star discrepancy, in [1/(2N), 1].
    """
    u = np.sort(_validated(values))
    n = u.size
    i = np.arange(1, n + 1, dtype=float)
    return float(np.max(np.maximum(i / n - u, u - (i - 1) / n)))


def extreme_discrepancy(values):
    """Extreme (two-sided interval) discrepancy of points in [0, 1].

    Uses D_N = 1/N + max_i (i/N - u_(i)) + max_i (u_(i) - i/N) on the
    sorted sample.  The supremum runs over all subintervals, so the
    result dominates the star discrepancy and never exceeds twice it.

    Returns
    -------
    float
        Extreme discrepancy, in (0, 1].
    """
    u = np.sort(_validated(values))
    n = u.size
    i = np.arange(1, n + 1, dtype=float)
    a = float(np.max(i / n - u))
    b = float(np.max(u - i / n))
    return 1.0 / n + a + b


def discrepancy_trace(values, checkpoints):
    """Star and extreme discrepancy of each prefix values[:N].

    Returns
    -------
    list of (N, star, extreme)
    """
    u = _validated(values)
    ns = [int(n) for n in checkpoints]
    if any(n < 1 or n > u.size for n in ns):
        raise ValueError("checkpoints must satisfy 1 <= N <= len(values)")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("checkpoints must be strictly increasing")
    return [(n, star_discrepancy(u[:n]), extreme_discrepancy(u[:n]))
            for n in ns]


def weyl_sum(values, k):
    """Normalized exponential sum (1/N) sum_n exp(2 pi i k u_n).

    Parameters
    ----------
    values : array_like or FractionalOrbit
        Points in [0, 1].
    k : int
        Frequency; k = 0 returns exactly 1.

    Returns
    -------
    complex
        Average of exp(2 pi i k u_n); modulus at most 1.
    """
    k = int(k)
    u = _validated(values)
    if k == 0:
        return complex(1.0)
    z = np.exp((2j * np.pi * k) * u)
    return complex(np.sum(z) / u.size)


@dataclass(frozen=True)
class DiscrepancyReport:
    """Discrepancy and exponential-sum summary of one point set."""

    n: int
    star: float
    extreme: float
    weyl: dict = field(default_factory=dict)
    trace: list = field(default_factory=list)

    def to_json_dict(self):
        return {
            "N": self.n,
            "star": self.star,
            "extreme": self.extreme,
            "weyl": [{"k": k, "re": v.real, "im": v.imag}
                     for k, v in sorted(self.weyl.items())],
            "trace": [[n, s, e] for n, s, e in self.trace],
        }


def discrepancy_report(values, ks=(), checkpoints=None):
    """Bundle star/extreme discrepancy, Weyl sums, and a prefix trace."""
    u = _validated(values)
    weyl = {int(k): weyl_sum(u, k) for k in ks}
    trace = discrepancy_trace(u, checkpoints) if checkpoints else []
    return DiscrepancyReport(
        n=u.size,
        star=star_discrepancy(u),
        extreme=extreme_discrepancy(u),
        weyl=weyl,
        trace=trace,
    )


def ud_bound_check(trace, epsilon=0.5):
    """Growth diagnostic for star discrepancy vs sqrt(N)-polylog decay.

    Forms r_i = star_i * sqrt(N_i) / (log N_i)**(1.5 + epsilon)
    (natural log) per checkpoint and reports C_hat = max r_i.  The
    "passed" flag is a heuristic, not a theorem: the maximum ratio over
    the later half of the checkpoints must not exceed twice the maximum
    over the earlier half.

    Parameters
    ----------
    trace : sequence of (N, star, ...) tuples
        Strictly increasing N, each at least 3.
    epsilon : float
        Positive slack in the log exponent.

    Returns
    -------
    dict
        Keys ``ratios``, ``c_hat``, ``first_half_max``,
        ``last_half_max``, ``passed``.
    """
    rows = [(int(r[0]), float(r[1])) for r in trace]
    if not rows:
        raise ValueError("trace must be nonempty")
    ns = np.array([r[0] for r in rows], dtype=float)
    stars = np.array([r[1] for r in rows], dtype=float)
    if np.any(ns < 3):
        raise ValueError("checkpoints must be at least 3 so log N > 1")
    if np.any(np.diff(ns) <= 0):
        raise ValueError("checkpoints must be strictly increasing")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    ratios = stars * np.sqrt(ns) / np.log(ns) ** (1.5 + epsilon)
    half = ns.size // 2
    first = float(np.max(ratios[:half])) if half else float(ratios[0])
    last = float(np.max(ratios[half:]))
    return {
        "ratios": ratios.tolist(),
        "c_hat": float(np.max(ratios)),
        "first_half_max": first,
        "last_half_max": last,
        "passed": bool(last <= 2.0 * first),
    }


_CHUNK = 64  # digits extracted per bignum division


def digit_stream(seed, base, count):
    """Exact base-b digits of the fractional part of a rational seed.

    Digits come from the integer long-division recurrence (in chunks of
    64 digits per bignum step), so they are the true digits of the
    rational number, not of a float image.  Seeds produced by sampling
    carry information only up to their sampled precision, so the
    request is rejected once count * log2(base) would exceed
    precision_bits - 16.

    Parameters
    ----------
    seed : SeedPoint or Fraction or int
        Number whose fractional-part digits are taken.
    base : int
        Integer base, at least 2.
    count : int
        Number of digits.

    Returns
    -------
    numpy.ndarray of int64
    """
    base = int(base)
    if base < 2:
        raise ValueError("base must be an integer >= 2")
    if count < 1:
        raise ValueError("count must be positive")
    if not isinstance(seed, SeedPoint):
        seed = SeedPoint.exact(seed)
    if seed.precision_bits is not None:
        budget = seed.precision_bits - 16
        if count * math.log2(base) > budget:
            raise ValueError(
                "requested %d base-%d digits but the sampled seed only "
                "carries %d bits; digits past that are artifacts"
                % (count, base, seed.precision_bits))
    digits = np.empty(count, dtype=np.int64)
    den = seed.denominator
    r = seed.numerator % den
    step = base**_CHUNK
    pos = 0
    while pos < count:
        take = min(_CHUNK, count - pos)
        r *= step
        blk = r // den
        r %= den
        # blk holds the next 64 digits, most significant first
        for j in range(_CHUNK - 1, -1, -1):
            if j < take:
                digits[pos + j] = blk % base
            blk //= base
        pos += take
    return digits


@dataclass(frozen=True)
class BlockFrequencies:
    """Sliding-window digit block counts in a fixed base."""

    base: int
    block_len: int
    counts: np.ndarray
    total: int

    @property
    def frequencies(self):
        return self.counts / self.total

    def max_abs_deviation(self):
        """Largest |frequency - base**-L| over all blocks."""
        return float(np.max(np.abs(self.frequencies - self.base ** -self.block_len)))

    def as_dict(self):
        """Digit-string keyed frequencies, for JSON emission."""
        out = {}
        for code, c in enumerate(self.counts):
            digits = []
            v = code
            for _ in range(self.block_len):
                digits.append(v % self.base)
                v //= self.base
            key = "".join(str(d) for d in reversed(digits))
            out[key] = c / self.total
        return out


def block_frequencies(digits, base, block_len):
    """Frequencies of all length-L blocks over sliding windows.

    Parameters
    ----------
    digits : array_like of int
        Digit sequence, each in [0, base).
    base : int
    block_len : int

    Returns
    -------
    BlockFrequencies
        Counts over the len(digits) - L + 1 windows; frequencies sum
        to 1.
    """
    base = int(base)
    block_len = int(block_len)
    d = np.asarray(digits, dtype=np.int64)
    if base < 2 or block_len < 1:
        raise ValueError("need base >= 2 and block_len >= 1")
    if d.ndim != 1 or d.size < block_len:
        raise ValueError("digit sequence shorter than one block")
    if d.size and (d.min() < 0 or d.max() >= base):
        raise ValueError("digits out of range for base")
    if float(base) ** block_len > 2**20:
        raise ValueError("block table too large")
    # encode each window as an integer, then bincount
    code = np.zeros(d.size - block_len + 1, dtype=np.int64)
    for j in range(block_len):
        code = code * base + d[j:j + code.size]
    counts = np.bincount(code, minlength=base**block_len)
    return BlockFrequencies(base, block_len, counts, int(code.size))


def digit_block_frequencies(seed, base, block_len, count):
    """Block statistics of the first `count` base-b digits of a seed.

    Composition of digit_stream and block_frequencies; see both for
    the parameter contracts (in particular the sampled-precision
    rejection rule).

    Returns
    -------
    BlockFrequencies
    """
    return block_frequencies(digit_stream(seed, base, count), base, block_len)

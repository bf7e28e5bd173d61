"""Certified fractional orbits of exponential maps and beta-transformations.

The central objects are orbits n -> <alpha^n * x> (fractional part of
exponentially growing products) and n -> T^n(x), T(y) = alpha*y mod 1.
Multipliers come in three flavors with different arithmetic back ends:

* RationalMultiplier p/q: exact integer arithmetic, rounding only at the
  final fractional-part extraction.
* QuadraticMultiplier a + b*sqrt(d): exact via the integer recurrence
  alpha^n = (C_n * alpha + D_n) / E^(n-1); floors are decided exactly with
  integer square roots.
* BigFloatMultiplier (dyadic mantissa * 2^exponent): scaled-integer fixed
  point at a working precision chosen from the target error.

Certified modes stamp a guaranteed absolute error on every entry; the fast
beta mode stamps +inf.  All kernels are deterministic and thread safe.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .exact import (
    ONE_BELOW,
    floor_quadratic,
    floor_sqrt_term,
    frac_to_float,
    is_square_free,
    log2_int,
    mpz,
)

__all__ = [
    "Multiplier",
    "RationalMultiplier",
    "QuadraticMultiplier",
    "BigFloatMultiplier",
    "golden_ratio",
    "SeedPoint",
    "FractionalOrbit",
    "UnreducedStore",
    "GeneralSequence",
    "generate_orbit",
    "beta_orbit",
    "subsample",
    "OrbitBudgetError",
    "OrbitPrecisionError",
    "DEFAULT_TARGET_ERROR",
    "DEFAULT_BUDGET_MB",
    "BUDGET_ENV_VAR",
]

DEFAULT_TARGET_ERROR = 2.0**-40
DEFAULT_BUDGET_MB = 256
BUDGET_ENV_VAR = "AVGLAB_PRECISION_BUDGET_MB"

_FRAC_GUARD_BITS = 96  # extra scale bits when extracting fractional parts


class OrbitBudgetError(MemoryError):
    """Working precision would exceed the configured memory budget."""


class OrbitPrecisionError(ArithmeticError):
    """A floor decision could not be certified within the retry budget."""


class _BoundaryUnresolved(Exception):
    """Internal: a fractional part sits within the error band of an integer."""


# ---------------------------------------------------------------------------
# multipliers


def _quadratic_sign(a: Fraction, b: Fraction, d: int) -> int:
    """Exact sign of a + b*sqrt(d)."""
    den = a.denominator * b.denominator
    num_a = a.numerator * b.denominator
    num_b = b.numerator * a.denominator
    if num_b == 0:
        return 0 if num_a == 0 else (1 if num_a > 0 else -1)
    if num_a >= 0 and num_b >= 0:
        return 1 if (num_a or num_b) else 0
    if num_a <= 0 and num_b <= 0:
        return -1 if (num_a or num_b) else 0
    # opposite signs: compare squares
    lhs = num_a * num_a
    rhs = num_b * num_b * d
    if lhs == rhs:
        return 0
    bigger_a = lhs > rhs
    if num_a > 0:
        return 1 if bigger_a else -1
    return -1 if bigger_a else 1


class Multiplier:
    """Base class; concrete multipliers certify |alpha| > 1 on construction."""

    def log2_abs(self) -> float:
        """Cached log2|alpha|, accurate to better than 2**-40 relative."""
        cached = getattr(self, "_log2_abs", None)
        if cached is None:
            scaled = abs(int(self.scaled(128)))
            cached = log2_int(scaled) - 128.0
            object.__setattr__(self, "_log2_abs", cached)
        return cached

    def scaled(self, bits: int):
        """floor(alpha * 2**bits), exact."""
        raise NotImplementedError

    def as_float(self) -> float:
        raise NotImplementedError

    def spec_string(self) -> str:
        raise NotImplementedError

    @staticmethod
    def parse(text: str) -> "Multiplier":
        """Parse a multiplier spec.

        Accepted forms: integer ("2", "-3"), rational ("3/2"), named
        ("golden"), quadratic ("1+sqrt(2)", "1/2+1/2*sqrt(5)", "sqrt(8)"),
        decimal big-float ("2.7182818", optional "@bits" precision suffix).
        """
        s = text.strip().lower().replace(" ", "")
        if s in ("golden", "tau", "phi"):
            return golden_ratio()
        m = re.fullmatch(r"(-?\d+)(?:/(\d+))?", s)
        if m:
            p = int(m.group(1))
            q = int(m.group(2)) if m.group(2) else 1
            return RationalMultiplier(p, q)
        m = re.fullmatch(
            r"(?:(-?\d+(?:/\d+)?)([+-]))?(-?)(?:(\d+(?:/\d+)?)\*)?sqrt\((\d+)\)",
            s,
        )
        if m:
            a = Fraction(m.group(1)) if m.group(1) else Fraction(0)
            sign = -1 if (m.group(2) == "-") != (m.group(3) == "-") else 1
            b = Fraction(m.group(4)) if m.group(4) else Fraction(1)
            b *= sign
            d = int(m.group(5))
            # pull square factors out of d
            f = 1
            k = 2
            while k * k <= d:
                while d % (k * k) == 0:
                    d //= k * k
                    f *= k
                k += 1
            if d == 1:
                return RationalMultiplier((a + b * f).numerator, (a + b * f).denominator)
            return QuadraticMultiplier(a, b * f, d)
        m = re.fullmatch(r"(-?\d+\.\d+(?:e-?\d+)?)(?:@(\d+))?", s)
        if m:
            prec = int(m.group(2)) if m.group(2) else 113
            return BigFloatMultiplier.from_decimal(m.group(1), prec)
        raise ValueError(f"cannot parse multiplier spec {text!r}")


@dataclass(frozen=True)
class RationalMultiplier(Multiplier):
    """alpha = p/q in lowest terms, |p| > q >= 1."""

    p: int
    q: int = 1

    def __post_init__(self):
        if self.q == 0:
            raise ValueError("zero denominator")
        g = math.gcd(self.p, self.q)
        p, q = self.p // g, self.q // g
        if q < 0:
            p, q = -p, -q
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        if abs(p) <= q:
            raise ValueError(
                f"multiplier must satisfy |alpha| > 1, got {p}/{q}"
            )

    def scaled(self, bits: int):
        return (mpz(self.p) << bits) // self.q

    def as_float(self) -> float:
        return self.p / self.q

    def spec_string(self) -> str:
        return str(self.p) if self.q == 1 else f"{self.p}/{self.q}"

    def pow_multiplier(self, k: int) -> "RationalMultiplier":
        return RationalMultiplier(self.p**k, self.q**k)


@dataclass(frozen=True)
class QuadraticMultiplier(Multiplier):
    """alpha = a + b*sqrt(d), rational a, b with b != 0, d >= 2 square free."""

    a: Fraction
    b: Fraction
    d: int

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.b == 0:
            raise ValueError("b = 0 is not a quadratic irrational; use RationalMultiplier")
        if self.d < 2 or not is_square_free(self.d):
            raise ValueError(f"d must be >= 2 and square free, got {self.d}")
        below = _quadratic_sign(self.a - 1, self.b, self.d)  # alpha - 1
        above = _quadratic_sign(self.a + 1, self.b, self.d)  # alpha + 1
        if not (below > 0 or above < 0):
            raise ValueError("multiplier must satisfy |alpha| > 1")

    def scaled(self, bits: int):
        ad, bd = self.a.denominator, self.b.denominator
        A = mpz(self.a.numerator) * bd << bits
        B = mpz(self.b.numerator) * ad
        return floor_quadratic(A, B << bits, self.d, mpz(ad) * bd)

    def as_float(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def spec_string(self) -> str:
        a, b = self.a, self.b
        bs = f"{b}*sqrt({self.d})" if b != 1 else f"sqrt({self.d})"
        if a == 0:
            return bs
        return f"{a}+{bs}" if b > 0 else f"{a}{'' if str(b).startswith('-') else '-'}{bs}"

    def pow_multiplier(self, k: int) -> "Multiplier":
        # alpha^k = c*alpha + e with rational c, e from the power table
        c, e = Fraction(0), Fraction(1)
        s = 2 * self.a
        t = self.b * self.b * self.d - self.a * self.a
        for _ in range(k):
            c, e = s * c + e, t * c
        # c*(a + b sqrt d) + e
        return QuadraticMultiplier(c * self.a + e, c * self.b, self.d)


@dataclass(frozen=True)
class BigFloatMultiplier(Multiplier):
    """alpha = mantissa * 2**exponent, an exact dyadic rational."""

    mantissa: int
    exponent: int

    def __post_init__(self):
        if self.mantissa == 0:
            raise ValueError("zero multiplier")
        m, e = self.mantissa, self.exponent
        while m % 2 == 0:
            m //= 2
            e += 1
        object.__setattr__(self, "mantissa", m)
        object.__setattr__(self, "exponent", e)
        if e >= 0:
            big = abs(m) << e > 1 if e else abs(m) > 1
        else:
            big = abs(m) > (1 << -e)
        if not big:
            raise ValueError("multiplier must satisfy |alpha| > 1")

    @classmethod
    def from_decimal(cls, text: str, bits: int = 113) -> "BigFloatMultiplier":
        v = Fraction(text)
        mant = round(v * (1 << bits))
        return cls(mant, -bits)

    @classmethod
    def from_float(cls, x: float) -> "BigFloatMultiplier":
        mant, exp = x.as_integer_ratio()
        return cls(mant, -(exp.bit_length() - 1))

    def scaled(self, bits: int):
        shift = self.exponent + bits
        m = mpz(self.mantissa)
        return m << shift if shift >= 0 else m >> (-shift)

    def as_float(self) -> float:
        return math.ldexp(self.mantissa, self.exponent)

    def spec_string(self) -> str:
        return repr(self.as_float())

    def fraction(self) -> Fraction:
        if self.exponent >= 0:
            return Fraction(self.mantissa * (1 << self.exponent))
        return Fraction(self.mantissa, 1 << -self.exponent)


def golden_ratio() -> QuadraticMultiplier:
    """(1 + sqrt(5)) / 2."""
    return QuadraticMultiplier(Fraction(1, 2), Fraction(1, 2), 5)


# ---------------------------------------------------------------------------
# seed points


@dataclass(frozen=True)
class SeedPoint:
    """An exact rational seed x = numerator/denominator.

    Floats, decimal strings and sampled draws are all exact rationals; the
    seed stands for precisely that value.  precision_bits records how many
    random bits a sampled seed carries (None means the seed is exact in
    full); digit extraction refuses to read past it.
    """

    numerator: int
    denominator: int
    precision_bits: int | None = None
    label: str = "explicit"

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError("denominator must be positive")
        g = math.gcd(self.numerator, self.denominator)
        object.__setattr__(self, "numerator", self.numerator // g)
        object.__setattr__(self, "denominator", self.denominator // g)

    @classmethod
    def exact(cls, value) -> "SeedPoint":
        if isinstance(value, SeedPoint):
            return value
        f = Fraction(value)  # exact for int, float, Fraction, "p/q", decimal str
        return cls(f.numerator, f.denominator)

    @classmethod
    def sampled(
        cls,
        seed: int,
        index: int,
        interval: tuple[float, float] = (1.0, 2.0),
        bits: int = 53,
    ) -> "SeedPoint":
        """Reproducible draw from [lo, hi).

        Substream: philox4x64 keyed by (seed, index), counter from zero; the
        first ceil(bits/64) raw 64-bit words, most significant first, form a
        bits-bit integer u, and x = lo + (hi - lo) * u / 2**bits.
        """
        lo, hi = interval
        if not (hi > lo):
            raise ValueError("empty sampling interval")
        if bits < 1:
            raise ValueError("bits must be >= 1")
        bg = np.random.Philox(key=np.array([seed, index], dtype=np.uint64))
        words = -(-bits // 64)
        raw = bg.random_raw(words)
        u = 0
        for w in np.atleast_1d(raw):
            u = (u << 64) | int(w)
        u >>= 64 * words - bits
        flo, fhi = Fraction(lo), Fraction(hi)
        x = flo + (fhi - flo) * Fraction(u, 1 << bits)
        return cls(x.numerator, x.denominator, precision_bits=bits,
                   label=f"sampled({seed},{index})")

    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def as_float(self) -> float:
        return self.numerator / self.denominator


# ---------------------------------------------------------------------------
# orbits


@dataclass
class UnreducedStore:
    """Scaled-integer snapshots of the unreduced products alpha^n * x.

    values[n] ~= alpha^n * x * 2**frac_bits with absolute error (in real
    units) at most abs_error.
    """

    values: list
    frac_bits: int
    abs_error: float

    def __len__(self):
        return len(self.values)

    def fraction(self, i: int) -> Fraction:
        return Fraction(int(self.values[i]), 1 << self.frac_bits)

    def frac_mod(self, i: int, modulus: Fraction) -> float:
        """<values[i] / modulus> as a float."""
        mn, md = modulus.numerator, modulus.denominator
        den = mpz(mn) << self.frac_bits
        num = (mpz(self.values[i]) * md) % den
        return frac_to_float(num, den)


@dataclass
class FractionalOrbit:
    """A finite orbit of fractional parts with a certified error stamp.

    entries[n] lies in [0, 1); the real value represented is entries[n] *
    scale.  guaranteed_abs_error bounds |entries[n] - true fractional part|
    (+inf in fast mode).  unreduced optionally carries the full products for
    non-periodic evaluation and modulus resampling.
    """

    entries: np.ndarray
    guaranteed_abs_error: float
    mode: str  # "exact" | "bigfloat-certified" | "float-fast"
    kind: str  # "exponential" | "beta" | "subsample"
    scale: Fraction = Fraction(1)
    multiplier: Multiplier | None = None
    seed: SeedPoint | None = None
    unreduced: UnreducedStore | None = None

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=np.float64)
        if self.entries.size and (self.entries.min() < 0.0 or self.entries.max() >= 1.0):
            raise ValueError("orbit entries must lie in [0, 1)")
        if self.mode not in ("exact", "bigfloat-certified", "float-fast"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if not (self.guaranteed_abs_error > 0):
            raise ValueError("guaranteed_abs_error must be positive")
        self.scale = Fraction(self.scale)

    def __len__(self):
        return len(self.entries)

    @property
    def certified(self) -> bool:
        return math.isfinite(self.guaranteed_abs_error)

    def values(self) -> np.ndarray:
        """Entries rescaled to [0, scale)."""
        return self.entries * float(self.scale)

    def write_csv(self, fh) -> None:
        """Dump as CSV with header n,frac; 18 significant digits."""
        fh.write("n,frac\n")
        for n, v in enumerate(self.entries):
            fh.write(f"{n},{v:.18g}\n")


def _budget_bits(budget_mb: float | None) -> int:
    if budget_mb is None:
        budget_mb = float(os.environ.get(BUDGET_ENV_VAR, DEFAULT_BUDGET_MB))
    return int(budget_mb * 8 * 2**20)


def _check_budget(required_bits: int, budget_mb: float | None, what: str) -> None:
    limit = _budget_bits(budget_mb)
    if required_bits > limit:
        raise OrbitBudgetError(
            f"{what} requires about {required_bits} bits of working storage, "
            f"over the budget of {limit} bits "
            f"({limit // (8 * 2**20)} MiB; raise {BUDGET_ENV_VAR} or budget_mb)"
        )


def _target_bits(target_error: float) -> int:
    if not (0.0 < target_error <= 2.0**-20):
        raise ValueError("target_error must lie in (0, 2**-20]")
    if target_error < 2.0**-52:
        raise ValueError(
            "entries are float64; a target below 2**-52 is not representable"
        )
    return max(40, math.ceil(-math.log2(target_error)))


def _working_bits(mult: Multiplier, seed: SeedPoint, count: int, tbits: int) -> int:
    """Working precision for a count-entry certified orbit."""
    la = mult.log2_abs()
    xbits = max(
        seed.numerator.bit_length() - seed.denominator.bit_length() + 1, 1
    ) + 2  # >= ceil(log2(|x| + 2))
    bits = (
        math.ceil(count * la)
        + xbits
        + math.ceil(math.log2(max(count, 2)))
        + tbits
        + 32
    )
    # |alpha| near 1 inflates the rounding series by (|alpha| - 1)^-1
    gap = 2.0**la - 1.0
    if gap < 1.0:
        bits += max(0, -math.floor(math.log2(gap)))
    return bits


# -- exponential kernels ----------------------------------------------------


def _exp_rational(mult: RationalMultiplier, seed: SeedPoint, count: int,
                  keep_bits: int | None, budget_mb):
    p, q = mpz(mult.p), mpz(mult.q)
    xn, xd = mpz(seed.numerator), mpz(seed.denominator)
    logq = 0.0 if mult.q == 1 else math.log2(mult.q)
    den_bits = seed.denominator.bit_length() + int(count * logq) + 64
    work = 4 * den_bits
    if keep_bits is not None:
        work += count * (int(count * mult.log2_abs()) // 2 + keep_bits + 64)
    _check_budget(work, budget_mb, f"exact rational orbit of length {count}")

    entries = np.empty(count)
    kept = [] if keep_bits is not None else None
    num = xn if keep_bits is not None else None

    if mult.q == 1:
        r = xn % xd
        for n in range(count):
            entries[n] = frac_to_float(r, xd)
            if kept is not None:
                kept.append(int((num << keep_bits) // xd))
                num = num * p
            r = (r * p) % xd
    else:
        den_top = xd * q ** (count - 1) if count > 1 else xd
        t = xn % den_top
        den = xd
        for n in range(count):
            r = t % den
            entries[n] = frac_to_float(r, den)
            if kept is not None:
                kept.append(int((num << keep_bits) // den))
                num = num * p
            t = (t * p) % den_top
            den = den * q
    return entries, kept


@lru_cache(maxsize=8)
def _quadratic_power_table(a: Fraction, b: Fraction, d: int, count: int):
    """Integer table (C_n, D_n, E) with alpha^n = (C_n*alpha + D_n)/E^(n-1)."""
    s = 2 * a
    t = b * b * d - a * a
    E = math.lcm(s.denominator, t.denominator)
    S = mpz(s.numerator * (E // s.denominator))
    T = mpz(t.numerator * (E // t.denominator))
    E = mpz(E)
    C = [mpz(0)] * count
    D = [mpz(0)] * count
    if count > 1:
        C[1] = mpz(1)
        D[1] = mpz(0)
    for n in range(1, count - 1):
        C[n + 1] = S * C[n] + E * D[n]
        D[n + 1] = T * C[n]
    return C, D, E


def _exp_quadratic(mult: QuadraticMultiplier, seed: SeedPoint, count: int,
                   keep_bits: int | None, budget_mb):
    d = mult.d
    an, ad = mult.a.numerator, mult.a.denominator
    bn, bd = mult.b.numerator, mult.b.denominator
    xn, xd = mpz(seed.numerator), mpz(seed.denominator)

    size_bits = int(count * mult.log2_abs()) + seed.denominator.bit_length() + 128
    work = 8 * (size_bits + _FRAC_GUARD_BITS)
    if keep_bits is not None:
        work += count * (size_bits // 2 + keep_bits + 64)
    _check_budget(work, budget_mb, f"exact quadratic orbit of length {count}")

    C, D, E = _quadratic_power_table(mult.a, mult.b, d, max(count, 2))
    G = _FRAC_GUARD_BITS
    entries = np.empty(count)
    kept = [] if keep_bits is not None else None

    base_den = xd * ad * bd
    epow = mpz(1)  # E^(n-1), starts at n=1
    for n in range(count):
        if n == 0:
            A, B, Cden = xn, mpz(0), xd
        else:
            A = xn * (C[n] * an * bd + D[n] * ad * bd)
            B = xn * C[n] * bn * ad
            Cden = base_den * epow
            epow = epow * E
        num = (A << G) + floor_sqrt_term(B << G, d)
        den = Cden << G
        k = num // den
        rem = num - k * den
        entries[n] = frac_to_float(rem, den)
        if kept is not None:
            kept.append(int(floor_quadratic(A << keep_bits, B << keep_bits, d, Cden)))
    return entries, kept


def _exp_fixedpoint(mult: Multiplier, seed: SeedPoint, count: int, fbits: int,
                    keep_bits: int | None, budget_mb):
    growth = int(count * mult.log2_abs())
    _check_budget(
        4 * (fbits + growth + 64)
        + (count * (keep_bits + growth) if keep_bits is not None else 0),
        budget_mb,
        f"fixed-point orbit of length {count} at {fbits} fraction bits",
    )
    T = mult.scaled(fbits)
    one = mpz(1) << fbits
    Vnum = mpz(seed.numerator) << fbits
    V = Vnum // seed.denominator
    alpha_abs = abs(mult.as_float())
    entries = np.empty(count)
    kept = [] if keep_bits is not None else None
    # error bound on V in units of 2**-fbits; exact when the seed is dyadic
    err = 0.0 if Vnum % seed.denominator == 0 else 1.0
    for n in range(count):
        r = V % one
        margin = 0 if err == 0.0 else int(err) + 2
        if margin and (r < margin or one - r < margin):
            raise _BoundaryUnresolved(n)
        entries[n] = frac_to_float(r, one)
        if kept is not None:
            shift = fbits - keep_bits
            kept.append(int(V >> shift) if shift >= 0 else int(V << -shift))
        V = (V * T) >> fbits
        err = err * alpha_abs + 2.0
    return entries, kept, err


# -- public generation ------------------------------------------------------


def generate_orbit(
    multiplier: Multiplier,
    seed,
    count: int,
    target_error: float = DEFAULT_TARGET_ERROR,
    *,
    keep_unreduced: bool = False,
    store_slack_bits: int = 0,
    allow_zero: bool = False,
    budget_mb: float | None = None,
) -> FractionalOrbit:
    """Entries <alpha^n * x> for n = 0 .. count-1 with certified error.

    Parameters
    ----------
    multiplier : Multiplier
        |alpha| > 1, validated on construction.
    seed : SeedPoint or number
        x; must be nonzero unless allow_zero is set.
    count : int
        Orbit length.
    target_error : float
        Requested absolute error, in (0, 2**-20]; the stamped guarantee is
        at most min(target_error, 2**-40).
    keep_unreduced : bool
        Retain scaled-integer snapshots of alpha^n * x for non-periodic
        evaluation and modulus resampling.  Memory grows quadratically in
        count and is budget checked.
    store_slack_bits : int
        Extra fraction bits for the unreduced snapshots beyond the entry
        guarantee; scans raise this to resolve comparisons that land
        inside the certified band.
    """
    seed = SeedPoint.exact(seed)
    if count < 1:
        raise ValueError("count must be >= 1")
    if seed.numerator == 0 and not allow_zero:
        raise ValueError("seed x = 0 gives the trivial orbit; pass allow_zero=True")
    if store_slack_bits < 0:
        raise ValueError("store_slack_bits must be nonnegative")

    tbits = _target_bits(target_error)
    keep_bits = tbits + 64 + store_slack_bits if keep_unreduced else None

    if isinstance(multiplier, RationalMultiplier):
        entries, kept = _exp_rational(multiplier, seed, count, keep_bits, budget_mb)
        mode, stamp = "exact", 2.0**-52
    elif isinstance(multiplier, QuadraticMultiplier):
        entries, kept = _exp_quadratic(multiplier, seed, count, keep_bits, budget_mb)
        mode, stamp = "exact", 2.0**-52
    else:
        fbits = _working_bits(multiplier, seed, count, tbits)
        if keep_bits is not None:
            fbits = max(fbits, keep_bits + 64)
        kept = None
        for attempt in range(4):
            try:
                entries, kept, err_units = _exp_fixedpoint(
                    multiplier, seed, count, fbits << attempt, keep_bits, budget_mb
                )
                break
            except _BoundaryUnresolved as exc:
                last = exc
        else:
            raise OrbitPrecisionError(
                f"entry {last.args[0]} sits within the error band of an integer "
                f"after 3 precision doublings; the orbit value may be an exact integer"
            )
        mode = "bigfloat-certified"
        stamp = max(
            2.0**-52, math.ldexp(err_units, -(fbits << attempt)) + 2.0**-52
        )
        if stamp > min(target_error, 2.0**-40):  # pragma: no cover - by construction
            raise OrbitPrecisionError("certified bound exceeds the requested target")

    unreduced = None
    if keep_unreduced:
        unreduced = UnreducedStore(kept, keep_bits, math.ldexp(2.0, -keep_bits))
    return FractionalOrbit(
        entries=entries,
        guaranteed_abs_error=stamp,
        mode=mode,
        kind="exponential",
        multiplier=multiplier,
        seed=seed,
        unreduced=unreduced,
    )


# -- beta-transformation ----------------------------------------------------


def _beta_rational(mult: RationalMultiplier, seed: SeedPoint, count: int, budget_mb):
    p, q = mpz(mult.p), mpz(mult.q)
    num, den = mpz(seed.numerator), mpz(seed.denominator)
    logq = 0.0 if mult.q == 1 else math.log2(mult.q)
    _check_budget(4 * (seed.denominator.bit_length() + int(count * logq) + 64),
                  budget_mb, f"exact rational beta-orbit of length {count}")
    entries = np.empty(count)
    for n in range(count):
        entries[n] = frac_to_float(num, den)
        num = num * p
        if mult.q != 1:
            den = den * q
        num %= den
    return entries


def _beta_quadratic(mult: QuadraticMultiplier, seed: SeedPoint, count: int, budget_mb):
    d = mult.d
    an, ad = mpz(mult.a.numerator), mpz(mult.a.denominator)
    bn, bd = mpz(mult.b.numerator), mpz(mult.b.denominator)
    growth = max((mult.a.denominator * mult.b.denominator).bit_length(), 1)
    _check_budget(8 * (count * growth + seed.denominator.bit_length() + 128),
                  budget_mb, f"exact quadratic beta-orbit of length {count}")
    G = _FRAC_GUARD_BITS
    A, B, Cden = mpz(seed.numerator), mpz(0), mpz(seed.denominator)
    entries = np.empty(count)
    for n in range(count):
        num = (A << G) + floor_sqrt_term(B << G, d)
        if num < 0:
            num = mpz(0)
        entries[n] = frac_to_float(num, Cden << G)
        # y <- frac(alpha * y), exactly
        A2 = A * an * bd + B * bn * ad * d
        B2 = A * bn * ad + B * an * bd
        Cden = Cden * ad * bd
        k = floor_quadratic(A2, B2, d, Cden)
        A, B = A2 - k * Cden, B2
    return entries


def _beta_fixedpoint(mult: Multiplier, seed: SeedPoint, count: int, fbits: int,
                     budget_mb):
    _check_budget(6 * (fbits + 64), budget_mb,
                  f"fixed-point beta-orbit at {fbits} fraction bits")
    T = mult.scaled(fbits)
    one = mpz(1) << fbits
    Vnum = mpz(seed.numerator) << fbits
    V = Vnum // seed.denominator
    alpha_abs = abs(mult.as_float())
    entries = np.empty(count)
    err = 0.0 if Vnum % seed.denominator == 0 else 1.0
    for n in range(count):
        margin = 0 if err == 0.0 else int(err) + 2
        # near an integer the mod-1 branch below cannot be certified
        if margin and (V < margin or one - V < margin):
            raise _BoundaryUnresolved(n)
        entries[n] = frac_to_float(V, one)
        V = (V * T >> fbits) % one
        err = err * alpha_abs + 2.0
    return entries, err


def beta_orbit(
    multiplier: Multiplier,
    seed,
    count: int,
    mode: str = "certified",
    target_error: float = DEFAULT_TARGET_ERROR,
    budget_mb: float | None = None,
) -> FractionalOrbit:
    """Orbit of T(y) = alpha*y mod 1 started at y = x in [0, 1).

    mode "certified" uses the exact or fixed-point kernels and stamps a
    guaranteed error; mode "fast" iterates in float64 and stamps +inf.
    """
    seed = SeedPoint.exact(seed)
    x = seed.fraction()
    if not (0 <= x < 1):
        raise ValueError("beta-orbit seed must lie in [0, 1)")
    if count < 1:
        raise ValueError("count must be >= 1")

    if mode == "fast":
        a = multiplier.as_float()
        entries = np.empty(count)
        y = seed.as_float()
        for n in range(count):
            entries[n] = y
            y = (y * a) % 1.0
        return FractionalOrbit(entries, math.inf, "float-fast", "beta",
                               multiplier=multiplier, seed=seed)
    if mode != "certified":
        raise ValueError("mode must be 'certified' or 'fast'")

    tbits = _target_bits(target_error)
    if isinstance(multiplier, RationalMultiplier):
        entries = _beta_rational(multiplier, seed, count, budget_mb)
        omode, stamp = "exact", 2.0**-52
    elif isinstance(multiplier, QuadraticMultiplier):
        entries = _beta_quadratic(multiplier, seed, count, budget_mb)
        omode, stamp = "exact", 2.0**-50
    else:
        fbits = _working_bits(multiplier, seed, count, tbits)
        for attempt in range(4):
            try:
                entries, err_units = _beta_fixedpoint(multiplier, seed, count,
                                                      fbits << attempt, budget_mb)
                break
            except _BoundaryUnresolved as exc:
                last = exc
        else:
            raise OrbitPrecisionError(
                f"beta-orbit floor decision at step {last.args[0]} unresolved "
                f"after 3 precision doublings"
            )
        omode = "bigfloat-certified"
        stamp = max(2.0**-52,
                    math.ldexp(err_units, -(fbits << attempt)) + 2.0**-52)
        if stamp > min(target_error, 2.0**-40):  # pragma: no cover
            raise OrbitPrecisionError("certified bound exceeds the requested target")

    return FractionalOrbit(entries, stamp, omode, "beta",
                           multiplier=multiplier, seed=seed)


# -- subsampling ------------------------------------------------------------


def subsample(
    orbit: FractionalOrbit,
    stride: int,
    offset: int = 0,
    modulus=1,
) -> FractionalOrbit:
    """Entries m -> <u_(stride*m + offset) / modulus>, reduced to [0, 1).

    With modulus 1 this slices the stored entries.  Any other modulus needs
    the unreduced products, i.e. an orbit generated with keep_unreduced.
    """
    if stride < 1 or not (0 <= offset < stride):
        raise ValueError("need stride >= 1 and 0 <= offset < stride")
    modulus = Fraction(modulus)
    if modulus <= 0:
        raise ValueError("modulus must be positive")
    idx = range(offset, len(orbit), stride)
    if modulus == 1:
        sub_unred = None
        if orbit.unreduced is not None:
            sub_unred = UnreducedStore(
                [orbit.unreduced.values[i] for i in idx],
                orbit.unreduced.frac_bits,
                orbit.unreduced.abs_error,
            )
        return FractionalOrbit(
            orbit.entries[offset::stride].copy(),
            orbit.guaranteed_abs_error,
            orbit.mode,
            "subsample",
            scale=orbit.scale,
            multiplier=orbit.multiplier,
            seed=orbit.seed,
            unreduced=sub_unred,
        )
    if orbit.unreduced is None:
        raise ValueError(
            "modulus resampling needs unreduced values; generate the orbit "
            "with keep_unreduced=True"
        )
    store = orbit.unreduced
    entries = np.fromiter(
        (store.frac_mod(i, modulus) for i in idx), dtype=np.float64, count=len(idx)
    )
    stamp = store.abs_error / float(modulus) + 2.0**-50
    return FractionalOrbit(
        entries,
        stamp,
        orbit.mode,
        "subsample",
        scale=modulus,
        multiplier=orbit.multiplier,
        seed=orbit.seed,
        unreduced=UnreducedStore([store.values[i] for i in idx],
                                 store.frac_bits, store.abs_error),
    )


# -- general sequences ------------------------------------------------------


@dataclass(frozen=True)
class GeneralSequence:
    """u_m = alpha**(stride*m + offset): powers with affine index maps.

    Carries a separation certificate inf_{n != m} |u_n - u_m| > 0 so the
    sequence qualifies for orbit generation of <u_m * x>.
    """

    multiplier: Multiplier
    stride: int = 1
    offset: int = 0

    def __post_init__(self):
        if self.stride < 1 or self.offset < 0:
            raise ValueError("need stride >= 1 and offset >= 0")

    @classmethod
    def powers(cls, multiplier: Multiplier) -> "GeneralSequence":
        return cls(multiplier)

    def subsequence(self, stride: int, offset: int) -> "GeneralSequence":
        if stride < 1 or not (0 <= offset < stride):
            raise ValueError("need stride >= 1 and 0 <= offset < stride")
        return GeneralSequence(
            self.multiplier, self.stride * stride, self.stride * offset + self.offset
        )

    def separation_gap(self) -> float:
        """Certified inf over n != m of |u_n - u_m| (float evaluation).

        |a^(kn+l) - a^(km+l)| = |a|^(km+l) * |a^(k(n-m)) - 1| is minimized at
        m = 0 and small n - m because |alpha| > 1.
        """
        a = self.multiplier.as_float()
        k = self.stride
        best = math.inf
        j = 1
        while True:
            step = abs(a ** (k * j) - 1.0)
            best = min(best, step)
            if abs(a) ** (k * j) > 4.0 and step > 2 * best:
                break
            j += 1
            if j > 64:
                break
        return abs(a) ** self.offset * best

    def generate(
        self,
        seed,
        count: int,
        target_error: float = DEFAULT_TARGET_ERROR,
        modulus=1,
        budget_mb: float | None = None,
    ) -> FractionalOrbit:
        """Orbit <u_m * x / modulus> for m = 0 .. count-1."""
        need = self.offset + self.stride * (count - 1) + 1
        keep = Fraction(modulus) != 1
        base = generate_orbit(
            self.multiplier, seed, need, target_error,
            keep_unreduced=keep, budget_mb=budget_mb,
        )
        return subsample(base, self.stride, self.offset, modulus)

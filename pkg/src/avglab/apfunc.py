"""Function classes for averaging: trigonometric polynomials, periodic
functions, periodic functions with power-law singularities, absolutely
summable frequency series, and unit-window-integrable functions.

Operations: mean values (exact where closed forms exist, adaptive
quadrature otherwise, windowed extrapolation for the non-periodic
class), frequency coefficients, unit-window norms, sliding-window
mollification, truncated variation around a singularity, and series
truncation with a certified tail.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import numpy as np
from scipy.integrate import quad

__all__ = [
    "TrigPolynomial",
    "PeriodicFunction",
    "SingularTerm",
    "SingularPeriodic",
    "BohrSeries",
    "StepanovFunction",
    "MeanEstimate",
    "StepanovNorm",
    "mean",
    "fourier_bohr",
    "stepanov_norm",
    "mollify",
    "shift",
    "truncated_variation",
    "truncate_bohr",
    "frac_power",
]

DEFAULT_TOLERANCE = 1e-10
DEFAULT_T_MAX = 512.0
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class MeanEstimate:
    """Mean value together with an uncertainty radius.

    converged False signals that the windowed extrapolation did not
    settle within t_max; the value is still the best estimate and the
    uncertainty is the observed residual, never a silent guess.
    """

    value: complex
    uncertainty: float
    converged: bool

    def __complex__(self):
        return complex(self.value)


@dataclass(frozen=True)
class StepanovNorm:
    """Unit-window L1 norm: certified lower bound plus refinement."""

    lower_bound: float
    estimate: float
    exact: bool

    def __float__(self):
        return float(self.lower_bound)


def _quad_complex(g, lo, hi, tolerance, points=None):
    kwargs = {"epsabs": tolerance, "epsrel": tolerance, "limit": 400}
    if points is not None:
        pts = sorted(p for p in points if lo < p < hi)
        if pts:
            kwargs["points"] = pts
    probe = g(lo + (hi - lo) * 0.234567)
    if isinstance(probe, complex) or np.iscomplexobj(probe):
        re, re_err = quad(lambda t: float(np.real(g(t))), lo, hi, **kwargs)
        im, im_err = quad(lambda t: float(np.imag(g(t))), lo, hi, **kwargs)
        return complex(re, im), re_err + im_err
    val, err = quad(lambda t: float(g(t)), lo, hi, **kwargs)
    return complex(val), err


def _as_fraction(k):
    """Exact rational view of a frequency, or None for float inputs.

    Floats are deliberately treated as irrational: every float is a
    dyadic rational, but honoring that literally would assign
    astronomical periods to values like 0.1.  Callers who mean a
    rational frequency must pass int or Fraction.
    """
    if isinstance(k, Fraction):
        return k
    if isinstance(k, (int, np.integer)):
        return Fraction(int(k))
    return None


def _common_period(freqs):
    """Smallest L > 0 with k*L integral for all k, or None."""
    fracs = []
    for k in freqs:
        f = _as_fraction(k)
        if f is None:
            return None
        fracs.append(abs(f))
    if not fracs:
        return Fraction(1)
    g = reduce(
        lambda a, b: Fraction(math.gcd(a.numerator * b.denominator,
                                       b.numerator * a.denominator),
                              a.denominator * b.denominator),
        fracs)
    return 1 / g


class TrigPolynomial:
    """Finite sum a0 + sum_l a_l exp(2 pi i k_l x).

    Frequencies must be distinct and nonzero; pass int or Fraction for
    frequencies meant as exact rationals (floats count as irrational
    for period detection and orbit evaluation).
    """

    def __init__(self, a0=0, terms=()):
        terms = tuple((k, complex(a)) for k, a in terms)
        seen = set()
        for k, _ in terms:
            kf = float(k)
            if kf == 0.0:
                raise ValueError("frequencies must be nonzero; use a0")
            if kf in seen:
                raise ValueError("frequencies must be distinct")
            seen.add(kf)
        self.a0 = complex(a0)
        self.terms = terms

    @classmethod
    def cosine(cls, k, amplitude=1.0):
        a = complex(amplitude) / 2.0
        return cls(0, [(k, a), (-k, a)])

    @classmethod
    def sine(cls, k, amplitude=1.0):
        a = complex(amplitude) / 2.0
        return cls(0, [(k, -1j * a), (-k, 1j * a)])

    @classmethod
    def exponential(cls, k, amplitude=1.0):
        return cls(0, [(k, complex(amplitude))])

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.full(x.shape, self.a0, dtype=complex)
        for k, a in self.terms:
            out += a * np.exp((2j * np.pi * float(k)) * x)
        if out.shape == ():
            return complex(out)
        return out

    def coefficient(self, k):
        """Coefficient at frequency k (exact lookup)."""
        if float(k) == 0.0:
            return self.a0
        for kl, a in self.terms:
            if float(kl) == float(k):
                return a
        return 0j

    def sup_bound(self):
        """|a0| + sum |a_l|, an upper bound for sup|f|."""
        return abs(self.a0) + sum(abs(a) for _, a in self.terms)

    def period(self):
        """Exact period when all frequencies are rational, else None."""
        return _common_period([k for k, _ in self.terms])

    def __add__(self, other):
        if isinstance(other, TrigPolynomial):
            merged = {}
            for k, a in self.terms + other.terms:
                key = float(k)
                if key in merged:
                    merged[key] = (merged[key][0], merged[key][1] + a)
                else:
                    merged[key] = (k, a)
            terms = [(k, a) for k, a in merged.values() if a != 0]
            return TrigPolynomial(self.a0 + other.a0, terms)
        return TrigPolynomial(self.a0 + complex(other), self.terms)

    def __sub__(self, other):
        return self + (other * -1.0)

    def __mul__(self, scalar):
        c = complex(scalar)
        return TrigPolynomial(self.a0 * c,
                              [(k, a * c) for k, a in self.terms])

    __rmul__ = __mul__


class PeriodicFunction:
    """Periodic function given by an evaluator, with optional exact
    antiderivative and derivative callables.

    The evaluator should accept numpy arrays; scalar-only callables
    are wrapped automatically.
    """

    def __init__(self, evaluator, period=1, antiderivative=None,
                 derivative=None, riemann=True, label=""):
        if not float(period) > 0:
            raise ValueError("period must be positive")
        self.evaluator = evaluator
        self.period = period
        self.antiderivative = antiderivative
        self.derivative = derivative
        self.riemann = riemann
        self.label = label

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        try:
            out = self.evaluator(x)
            out = np.asarray(out)
            if out.shape != x.shape:
                raise TypeError
        except (TypeError, ValueError):
            flat = np.array([self.evaluator(float(v)) for v in x.ravel()])
            out = flat.reshape(x.shape)
        if out.shape == ():
            return out[()]
        return out

    @classmethod
    def step(cls, breaks, values):
        """Piecewise-constant 1-periodic function.

        breaks: ascending cut points in (0, 1]; the last must be 1.
        values[i] applies on [breaks[i-1], breaks[i]) with breaks[-1]=1
        and an implicit 0 start.
        """
        breaks = [Fraction(b) if isinstance(b, (int, Fraction)) else float(b)
                  for b in breaks]
        values = [float(v) for v in values]
        if len(breaks) != len(values):
            raise ValueError("breaks and values must have equal length")
        bf = [float(b) for b in breaks]
        if sorted(bf) != bf or len(set(bf)) != len(bf):
            raise ValueError("breaks must be strictly ascending")
        if not (bf[0] > 0.0 and bf[-1] == 1.0):
            raise ValueError("breaks must lie in (0, 1] and end at 1")
        arr_b = np.array(bf)
        arr_v = np.array(values)

        def ev(x):
            u = np.mod(x, 1.0)
            u = np.where(u >= 1.0, 0.0, u)  # np.mod(-1e-18, 1) == 1.0
            return arr_v[np.searchsorted(arr_b, u, side="right")]

        def anti(x):
            # piecewise-linear antiderivative on [0, 1), extended by mean slope
            x = np.asarray(x, dtype=float)
            whole = np.floor(x)
            u = x - whole
            lo = np.concatenate(([0.0], arr_b[:-1]))
            seg = np.searchsorted(arr_b, u, side="right")
            seg = np.minimum(seg, len(values) - 1)
            partial = np.cumsum(np.concatenate(([0.0], arr_v * (arr_b - lo))))
            total = partial[-1]
            out = whole * total + partial[seg] + arr_v[seg] * (u - lo[seg])
            if out.shape == ():
                return out[()]
            return out

        f = cls(ev, 1, antiderivative=anti, label="step")
        f.step_breaks = breaks
        f.step_values = values
        return f

    def exact_mean(self):
        """Mean from the antiderivative when one is declared."""
        if self.antiderivative is None:
            return None
        L = float(self.period)
        return complex(self.antiderivative(L) - self.antiderivative(0.0)) / L

    def __sub__(self, other):
        if isinstance(other, PeriodicFunction):
            if float(other.period) != float(self.period):
                raise ValueError("periods differ")
            anti = None
            if self.antiderivative is not None and other.antiderivative is not None:
                fa, ga = self.antiderivative, other.antiderivative
                anti = lambda x: fa(x) - ga(x)
            return PeriodicFunction(lambda x: self(x) - other(x), self.period,
                                    antiderivative=anti)
        g = other
        return PeriodicFunction(lambda x: self(x) - g(x), self.period)


@dataclass(frozen=True)
class SingularTerm:
    """Power-law piece c * |x - z|^(-exponent) active within halfwidth
    of z on the declared side(s), as a 1-periodic feature."""

    z: float
    exponent: float
    coeff: float
    halfwidth: float
    side: str = "both"

    def __post_init__(self):
        if not 0.0 <= self.z < 1.0:
            raise ValueError("singularity z must lie in [0, 1)")
        if not 0.0 < self.exponent < 0.5:
            raise ValueError("exponent must lie in (0, 1/2)")
        if not 0.0 < self.halfwidth <= 0.5:
            raise ValueError("halfwidth must lie in (0, 1/2]")
        if self.side not in ("both", "left", "right"):
            raise ValueError("side must be both, left, or right")


class SingularPeriodic:
    """1-periodic function with finitely many power-law singularities
    plus a bounded periodic remainder.

    Evaluation at a singular point returns inf.
    """

    def __init__(self, terms, remainder=None):
        terms = tuple(terms)
        if not terms:
            raise ValueError("need at least one singular term")
        for i, t in enumerate(terms):
            for u in terms[i + 1:]:
                gap = abs(t.z - u.z)
                gap = min(gap, 1.0 - gap)
                if gap < t.halfwidth + u.halfwidth:
                    raise ValueError("singular windows overlap mod 1")
        if remainder is not None and float(remainder.period) != 1.0:
            raise ValueError("remainder must have period 1")
        self.terms = terms
        self.remainder = remainder
        self.period = 1

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=float)
        if self.remainder is not None:
            out = out + np.real(self.remainder(x))
        for t in self.terms:
            w = np.mod(x - t.z, 1.0)
            if t.side in ("both", "right"):
                m = (w > 0.0) & (w < t.halfwidth)
                out = np.where(m, out + t.coeff * np.where(m, w, 1.0) ** -t.exponent, out)
            if t.side in ("both", "left"):
                m = (w > 1.0 - t.halfwidth) & (w < 1.0)
                out = np.where(m, out + t.coeff * np.where(m, 1.0 - w, 1.0) ** -t.exponent, out)
            hit = w == 0.0
            if np.any(hit) and t.coeff != 0.0:
                out = np.where(hit, np.inf, out)
        if out.shape == ():
            return out[()]
        return out

    def breakpoints(self):
        """Window edges and singular points, for quadrature splitting."""
        pts = set()
        for t in self.terms:
            pts.add(t.z % 1.0)
            pts.add((t.z - t.halfwidth) % 1.0)
            pts.add((t.z + t.halfwidth) % 1.0)
        return sorted(pts)

    def term_at(self, z):
        for t in self.terms:
            if float(t.z) == float(z):
                return t
        raise ValueError("z = %r is not a declared singularity" % (z,))

    def singular_mean(self):
        """Exact integral of the power-law pieces over one period."""
        total = 0.0
        for t in self.terms:
            mass = t.coeff * t.halfwidth ** (1.0 - t.exponent) / (1.0 - t.exponent)
            sides = 2 if t.side == "both" else 1
            total += sides * mass
        return total


def frac_power(exponent=0.25):
    """The 1-periodic function x -> <x> ** -exponent.

    Singular from the right at integers only: just left of an integer
    the fractional part is near 1, so the left side is smooth.  Modeled
    as a right-sided power law at z = 0 with halfwidth 1/2 plus the
    bounded tail on [1/2, 1).
    """
    a = float(exponent)

    def tail(x):
        u = np.mod(np.asarray(x, dtype=float), 1.0)
        out = np.where(u >= 0.5, np.where(u >= 0.5, u, 1.0) ** -a, 0.0)
        if out.shape == ():
            return out[()]
        return out

    def tail_deriv(x):
        u = np.mod(np.asarray(x, dtype=float), 1.0)
        out = np.where(u >= 0.5, -a * np.where(u >= 0.5, u, 1.0) ** (-a - 1.0), 0.0)
        if out.shape == ():
            return out[()]
        return out

    remainder = PeriodicFunction(tail, 1, derivative=tail_deriv,
                                 label="frac-power tail")
    return SingularPeriodic(
        [SingularTerm(z=0.0, exponent=a, coeff=1.0, halfwidth=0.5,
                      side="right")],
        remainder=remainder)


class BohrSeries:
    """Frequency series a0 + sum a_l exp(2 pi i k_l x) with absolutely
    summable coefficients.

    terms is the materialized (ordered) prefix; tail_certificate(m)
    must bound sum_{l > m} |a_l| for the full series and be
    non-increasing in m.  Without a certificate the series is treated
    as finite and tails are exact partial sums.
    """

    def __init__(self, a0=0, terms=(), tail_certificate=None):
        self.a0 = complex(a0)
        self.terms = tuple((k, complex(a)) for k, a in terms)
        if tail_certificate is None:
            mags = [abs(a) for _, a in self.terms]
            suffix = list(np.concatenate((np.cumsum(mags[::-1])[::-1], [0.0])))
            tail_certificate = lambda m: float(suffix[min(m, len(suffix) - 1)])
        self.tail_certificate = tail_certificate
        last = None
        for m in range(len(self.terms) + 1):
            t = float(tail_certificate(m))
            if t < -1e-15:
                raise ValueError("tail certificate must be nonnegative")
            if last is not None and t > last + 1e-12:
                raise ValueError("tail certificate must be non-increasing")
            mat = sum(abs(a) for _, a in self.terms[m:])
            if t < mat - 1e-9:
                raise ValueError(
                    "tail certificate below the materialized tail at m=%d" % m)
            last = t

    @classmethod
    def geometric(cls, frequencies, first=1.0, ratio=0.5, a0=0):
        """|a_l| = first * ratio**l across the given frequencies, with
        the exact geometric tail as certificate."""
        if not 0 < ratio < 1:
            raise ValueError("ratio must lie in (0, 1)")
        terms = [(k, first * ratio**i) for i, k in enumerate(frequencies)]
        # the certificate covers the full infinite geometric family, not
        # just the materialized prefix
        cert = lambda m: first * ratio**m / (1 - ratio)
        return cls(a0, terms, cert)

    def __call__(self, x):
        if not hasattr(self, "_materialized"):
            self._materialized = TrigPolynomial(self.a0, self.terms)
        return self._materialized(x)

    def truncate(self, m):
        """First m terms as a TrigPolynomial, with the tail bound."""
        if not 0 <= m <= len(self.terms):
            raise ValueError("m must lie in [0, %d]" % len(self.terms))
        return (TrigPolynomial(self.a0, self.terms[:m]),
                float(self.tail_certificate(m)))


class StepanovFunction:
    """Function with finite unit-window L1 mass, given by an evaluator.

    periodic_view, when set, is an equivalent periodic or singular
    periodic object used for exact means and norms.  spikes, when set,
    is a (point_set, SingularTerm-like model) pair placing power-law
    spikes at every point of a uniformly discrete set; evaluation near
    those points uses the nearest-point distance.
    """

    def __init__(self, evaluator=None, periodic_view=None, spikes=None,
                 background=None, label=""):
        if evaluator is None and periodic_view is None and spikes is None:
            raise ValueError("need an evaluator, a periodic view, or spikes")
        self.evaluator = evaluator
        self.periodic_view = periodic_view
        self.spikes = spikes
        self.background = background
        self.label = label

    def __call__(self, x):
        x_arr = np.asarray(x, dtype=float)
        if self.evaluator is not None:
            out = np.asarray(self.evaluator(x_arr), dtype=complex)
        elif self.periodic_view is not None:
            out = np.asarray(self.periodic_view(x_arr), dtype=complex)
        else:
            out = np.zeros(x_arr.shape, dtype=complex)
        if self.spikes is not None:
            point_set, model = self.spikes
            flat = np.atleast_1d(x_arr).ravel()
            spike = np.zeros(flat.shape, dtype=float)
            for i, v in enumerate(flat):
                d = float(point_set.dist(float(v)))
                if 0.0 < d < model.halfwidth:
                    spike[i] = model.coeff * d ** -model.exponent
                elif d == 0.0:
                    spike[i] = np.inf
            out = out + spike.reshape(np.shape(out))
        if self.background is not None:
            out = out + np.asarray(self.background(x_arr), dtype=complex)
        if out.shape == ():
            return complex(out)
        return out


def _windowed_mean(f, t_max, tolerance):
    """Symmetric window averages with one Richardson step in T.

    The integral over [-T, T] is accumulated from unit windows, so
    doubling T reuses all earlier quadrature work and each quadrature
    call sees an interval short enough for the adaptive rule.
    """
    t = 4
    ladder = []
    total = 0.0 + 0.0j
    covered = 0  # integral currently covers [-covered, covered]
    while t <= t_max:
        for j in range(covered, t):
            lo = float(j)
            a, _ = _quad_complex(f, lo, lo + 1.0, tolerance)
            b, _ = _quad_complex(f, -lo - 1.0, -lo, tolerance)
            total += a + b
        covered = t
        ladder.append(total / (2.0 * t))
        t *= 2
    if len(ladder) < 2:
        raise ValueError("t_max too small for windowed averaging")
    extrap = [2.0 * b - a for a, b in zip(ladder, ladder[1:])]
    value = extrap[-1]
    resid = abs(extrap[-1] - extrap[-2]) if len(extrap) > 1 else math.inf
    unc = resid + tolerance
    converged = resid <= max(100.0 * tolerance, 1e-7 * (1.0 + abs(value)))
    return MeanEstimate(value, unc, converged)


def mean(f, t_max=DEFAULT_T_MAX, tolerance=DEFAULT_TOLERANCE):
    """Mean value of f.

    TrigPolynomial: exactly a0.  PeriodicFunction: one-period average,
    exact via a declared antiderivative, else adaptive quadrature.
    SingularPeriodic: closed forms for the power-law pieces plus
    quadrature of the remainder.  BohrSeries: a0 with the tail bound as
    uncertainty.  StepanovFunction: exact periodic view if declared,
    else symmetric-window averages extrapolated in T up to t_max,
    returned as a MeanEstimate (converged flag, never a silent value).

    Returns
    -------
    complex or MeanEstimate
        MeanEstimate for BohrSeries and StepanovFunction, complex
        otherwise.
    """
    if not tolerance > 0:
        raise ValueError("tolerance must be positive")
    if isinstance(f, TrigPolynomial):
        return f.a0
    if isinstance(f, PeriodicFunction):
        exact = f.exact_mean()
        if exact is not None:
            return exact
        L = float(f.period)
        val, _ = _quad_complex(f, 0.0, L, tolerance)
        return val / L
    if isinstance(f, SingularPeriodic):
        total = complex(f.singular_mean())
        if f.remainder is not None:
            val, _ = _quad_complex(f.remainder, 0.0, 1.0, tolerance,
                                   points=f.breakpoints())
            total += val
        return total
    if isinstance(f, BohrSeries):
        return MeanEstimate(f.a0, float(f.tail_certificate(len(f.terms))),
                            True)
    if isinstance(f, StepanovFunction):
        if f.periodic_view is not None and f.background is None and f.spikes is None:
            v = mean(f.periodic_view, t_max, tolerance)
            return MeanEstimate(complex(v), tolerance, True)
        return _windowed_mean(f, t_max, tolerance)
    raise TypeError("unsupported function type %r" % type(f).__name__)


def fourier_bohr(f, k, t_max=DEFAULT_T_MAX, tolerance=DEFAULT_TOLERANCE):
    """Frequency coefficient: mean of exp(-2 pi i k x) * f(x).

    Exact lookup for TrigPolynomial; for periodic f with k*period
    integral the product is periodic and handled by quadrature; all
    other cases fall back to windowed averaging.
    """
    if isinstance(f, TrigPolynomial):
        return f.coefficient(k)
    if isinstance(f, BohrSeries):
        poly, tail = f.truncate(len(f.terms))
        return MeanEstimate(poly.coefficient(k), tail, True)
    kf = float(k)
    if isinstance(f, (PeriodicFunction, SingularPeriodic)):
        L = float(f.period) if isinstance(f, PeriodicFunction) else 1.0
        if abs(kf * L - round(kf * L)) < 1e-12:
            g = lambda x: np.exp(-2j * np.pi * kf * x) * f(x)
            points = f.breakpoints() if isinstance(f, SingularPeriodic) else None
            val, _ = _quad_complex(g, 0.0, L, tolerance, points=points)
            return val / L
    g = lambda x: np.exp(-2j * np.pi * kf * x) * np.asarray(f(x))
    return _windowed_mean(g, t_max, tolerance)


def _abs_window_integral(f, lo, tolerance, points=None):
    g = lambda x: abs(f(x))
    val, err = _quad_complex(g, lo, lo + 1.0, tolerance, points=points)
    v = float(np.real(val))
    if not math.isfinite(v):
        raise ArithmeticError(
            "window [%g, %g] integral diverged" % (lo, lo + 1.0))
    return v


def stepanov_norm(f, grid_step=1.0 / 64.0, tolerance=DEFAULT_TOLERANCE):
    """Unit-window L1 norm sup_x int_x^{x+1} |f|.

    Period-1 functions (and periods dividing 1) have constant window
    integrals, so a single window gives the exact value.  Other
    periodic functions take the sup over a grid of one period; general
    functions take the sup over a grid of [0, 8].  Grid results are
    certified lower bounds; the estimate field adds a modulus-based
    refinement when a sup bound for |f| is available.

    Returns
    -------
    StepanovNorm
    """
    if not 0.0 < grid_step <= 1.0:
        raise ValueError("grid_step must lie in (0, 1]")
    if isinstance(f, BohrSeries):
        f = f.truncate(len(f.terms))[0]
    if isinstance(f, TrigPolynomial):
        L = f.period()
        if L is not None and float(L) <= 64.0:
            # window integrals have period L; if L divides 1 they are constant
            Lf = float(L)
            if abs(round(1.0 / Lf) - 1.0 / Lf) < 1e-12 or Lf == 1.0:
                v = _abs_window_integral(f, 0.0, tolerance)
                return StepanovNorm(v, v, True)
            xs = np.arange(0.0, Lf, grid_step * Lf)
            best = max(_abs_window_integral(f, float(x), tolerance) for x in xs)
            slack = 2.0 * f.sup_bound() * grid_step * Lf
            return StepanovNorm(best, best + slack, False)
        xs = np.arange(0.0, 8.0, grid_step)
        best = max(_abs_window_integral(f, float(x), tolerance) for x in xs)
        slack = 2.0 * f.sup_bound() * grid_step
        return StepanovNorm(best, best + slack, False)
    if isinstance(f, SingularPeriodic):
        v = _abs_window_integral(f, 0.0, tolerance, points=f.breakpoints())
        return StepanovNorm(v, v, True)
    if isinstance(f, PeriodicFunction):
        Lf = float(f.period)
        if abs(round(1.0 / Lf) - 1.0 / Lf) < 1e-12 or Lf == 1.0:
            v = _abs_window_integral(f, 0.0, tolerance)
            return StepanovNorm(v, v, True)
        xs = np.arange(0.0, Lf, grid_step * min(Lf, 1.0))
        best = max(_abs_window_integral(f, float(x), tolerance) for x in xs)
        return StepanovNorm(best, best, False)
    if isinstance(f, StepanovFunction):
        if f.periodic_view is not None and f.background is None and f.spikes is None:
            return stepanov_norm(f.periodic_view, grid_step, tolerance)
        xs = np.arange(0.0, 8.0, grid_step)
        best = max(_abs_window_integral(f, float(x), tolerance) for x in xs)
        return StepanovNorm(best, best, False)
    raise TypeError("unsupported function type %r" % type(f).__name__)


def mollify(f, delta, tolerance=DEFAULT_TOLERANCE):
    """Sliding-window average f_delta(x) = (1/2 delta) int_{x-d}^{x+d} f.

    Continuous by construction.  TrigPolynomial: closed form (each
    coefficient scales by sin(2 pi k d)/(2 pi k d)).  PeriodicFunction:
    closed form via the antiderivative when declared, else pointwise
    quadrature.  StepanovFunction: pointwise quadrature (or the
    mollified periodic view when one is declared).
    """
    d = float(delta)
    if not d > 0:
        raise ValueError("delta must be positive")
    if isinstance(f, TrigPolynomial):
        terms = []
        for k, a in f.terms:
            th = _TWO_PI * float(k) * d
            factor = math.sin(th) / th
            if factor != 0.0:
                terms.append((k, a * factor))
        return TrigPolynomial(f.a0, terms)
    if isinstance(f, PeriodicFunction):
        if f.antiderivative is not None:
            F = f.antiderivative
            ev = lambda x: (F(x + d) - F(x - d)) / (2.0 * d)
            return PeriodicFunction(ev, f.period,
                                    label=f.label + " mollified")

        def ev(x):
            x = np.asarray(x, dtype=float)
            flat = np.atleast_1d(x).ravel()
            vals = np.array([complex(_quad_complex(f, v - d, v + d,
                                                   tolerance)[0])
                             for v in flat]) / (2.0 * d)
            if np.all(np.abs(vals.imag) < 1e-15):
                vals = vals.real
            out = vals.reshape(np.shape(x))
            if out.shape == ():
                return out[()]
            return out

        return PeriodicFunction(ev, f.period, label=f.label + " mollified")
    if isinstance(f, StepanovFunction):
        if f.periodic_view is not None and f.background is None and f.spikes is None:
            inner = f.periodic_view
            if isinstance(inner, (TrigPolynomial, PeriodicFunction)):
                return StepanovFunction(periodic_view=mollify(inner, d, tolerance),
                                        label=f.label + " mollified")

        def ev(x):
            x = np.asarray(x, dtype=float)
            flat = np.atleast_1d(x).ravel()
            vals = np.array([complex(_quad_complex(f, v - d, v + d,
                                                   tolerance)[0])
                             for v in flat]) / (2.0 * d)
            out = vals.reshape(np.shape(x))
            if out.shape == ():
                return complex(out[()])
            return out

        return StepanovFunction(evaluator=ev, label=f.label + " mollified")
    raise TypeError("mollify is defined for trigonometric, periodic, and "
                    "unit-window-integrable functions")


def shift(f, t):
    """Translate: returns x -> f(x + t) in the same class."""
    t = float(t)
    if isinstance(f, TrigPolynomial):
        return TrigPolynomial(
            f.a0,
            [(k, a * complex(np.exp(2j * np.pi * float(k) * t)))
             for k, a in f.terms])
    if isinstance(f, PeriodicFunction):
        anti = None
        if f.antiderivative is not None:
            F = f.antiderivative
            anti = lambda x: F(x + t) - F(t)
        return PeriodicFunction(lambda x: f(x + t), f.period,
                                antiderivative=anti, label=f.label)
    if isinstance(f, SingularPeriodic):
        terms = [SingularTerm((u.z - t) % 1.0, u.exponent, u.coeff,
                              u.halfwidth, u.side) for u in f.terms]
        rem = None
        if f.remainder is not None:
            rem = shift(f.remainder, t)
        return SingularPeriodic(terms, rem)
    if isinstance(f, StepanovFunction):
        return StepanovFunction(evaluator=lambda x: f(np.asarray(x) + t),
                                label=f.label)
    raise TypeError("unsupported function type %r" % type(f).__name__)


def truncated_variation(f, z, s, n, tolerance=1e-12):
    """Two-sided variation mass around a singularity, window truncated
    at distance n**-s.

    Integrates |f'| over (z - halfwidth, z - n**-s) and
    (z + n**-s, z + halfwidth), restricted to the declared sides.
    Power-law pieces contribute the closed form
    coeff * (n**(s*exponent) - halfwidth**-exponent) per side; a
    remainder with a declared derivative contributes quadrature.

    Parameters
    ----------
    f : SingularPeriodic
    z : float
        A declared singularity of f.
    s : float
        Positive truncation exponent.
    n : int
        At least 2, with n**-s < halfwidth.

    Returns
    -------
    float
    """
    if isinstance(f, StepanovFunction) and f.periodic_view is not None:
        f = f.periodic_view
    if not isinstance(f, SingularPeriodic):
        raise TypeError("truncated variation needs a singular periodic function")
    t = f.term_at(z)
    if not s > 0:
        raise ValueError("s must be positive")
    n = int(n)
    if n < 2:
        raise ValueError("n must be at least 2")
    eps = float(n) ** -s
    if eps >= t.halfwidth:
        raise ValueError(
            "window degenerate: n**-s = %g is not below halfwidth %g"
            % (eps, t.halfwidth))
    sides = 2 if t.side == "both" else 1
    closed = sides * t.coeff * (float(n) ** (s * t.exponent)
                                - t.halfwidth ** -t.exponent)
    total = closed
    if f.remainder is not None:
        if f.remainder.derivative is None:
            raise ValueError("remainder has no declared derivative")
        rd = f.remainder.derivative
        g = lambda x: abs(float(np.real(rd(x))))
        for lo, hi in ((t.z - t.halfwidth, t.z - eps),
                       (t.z + eps, t.z + t.halfwidth)):
            val, _ = _quad_complex(g, lo, hi, tolerance,
                                   points=[b + k for b in f.breakpoints()
                                           for k in (-1.0, 0.0, 1.0)])
            total += float(np.real(val))
    return total


def truncate_bohr(series, m):
    """First m terms of a series as a TrigPolynomial plus tail bound."""
    if not isinstance(series, BohrSeries):
        raise TypeError("expected a BohrSeries")
    return series.truncate(int(m))

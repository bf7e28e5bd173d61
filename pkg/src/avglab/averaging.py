"""Birkhoff averages along multiplicative orbits.

S_N(f, x) = (1/N) sum_{n<N} f(alpha^n x), convergence traces against the
function mean, the Sobol-style product criterion (discrepancy times
truncated variation), and the comparison between exponential-orbit and
beta-transformation statistics with the built-in golden-ratio invariant
density.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .apfunc import (
    BohrSeries,
    PeriodicFunction,
    SingularPeriodic,
    StepanovFunction,
    TrigPolynomial,
    mean as function_mean,
    truncated_variation,
)
from .equidist import extreme_discrepancy
from .orbits import (
    FractionalOrbit,
    Multiplier,
    QuadraticMultiplier,
    SeedPoint,
    beta_orbit,
    generate_orbit,
    golden_ratio,
)

__all__ = [
    "AverageTrace",
    "RenyiParryDensity",
    "SobolReport",
    "birkhoff_average",
    "convergence_trace",
    "sobol_criterion",
    "renyi_parry_compare",
]

DEFAULT_SCHEDULE = (100, 1000, 10000, 100000)


@dataclass(frozen=True)
class AverageTrace:
    """Birkhoff averages at increasing checkpoints with a reference target.

    checkpoints holds (N_i, S_{N_i}) pairs with N_i strictly increasing;
    abs_errors[i] = |S_{N_i} - target|.
    """

    checkpoints: tuple
    target: complex
    abs_errors: tuple

    def __post_init__(self):
        ns = [int(n) for n, _ in self.checkpoints]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("checkpoint N values must be strictly increasing")
        if len(self.abs_errors) != len(self.checkpoints):
            raise ValueError("abs_errors length must match checkpoints")
        for (_, s), e in zip(self.checkpoints, self.abs_errors):
            if not math.isclose(abs(complex(s) - complex(self.target)), e,
                                rel_tol=1e-9, abs_tol=1e-12):
                raise ValueError("abs_errors inconsistent with checkpoints "
                                 "and target")

    @property
    def final_error(self):
        return self.abs_errors[-1]


@dataclass(frozen=True)
class SobolReport:
    """Product-criterion rows (N, discrepancy, variation, product).

    decreasing_tail reports whether the product has decreased through
    the final three checkpoints: the last product sits strictly below
    each of the two before it.  A noisy middle checkpoint cannot mask a
    downward trend, while a trace that ends at or above an earlier
    value fails the diagnostic.
    """

    rows: tuple
    decreasing_tail: bool
    eta: float
    epsilon: float


class RenyiParryDensity:
    """Piecewise-constant invariant density of a beta transformation.

    values[i] applies on [breaks[i-1], breaks[i]) with an implicit 0
    start; breaks end at 1.  The built-in golden-ratio density has value
    (5 + 3*sqrt(5))/10 below 1/tau and (5 + sqrt(5))/10 above it.
    """

    def __init__(self, breakpoints, values):
        breaks = [float(b) for b in breakpoints]
        vals = [float(v) for v in values]
        if len(breaks) != len(vals):
            raise ValueError("breakpoints and values must have equal length")
        if sorted(breaks) != breaks or len(set(breaks)) != len(breaks):
            raise ValueError("breakpoints must be strictly ascending")
        if not breaks or not (breaks[0] > 0.0 and breaks[-1] == 1.0):
            raise ValueError("breakpoints must lie in (0, 1] and end at 1")
        if any(v < 0.0 for v in vals):
            raise ValueError("density values must be nonnegative")
        lo = [0.0] + breaks[:-1]
        mass = sum(v * (b - a) for v, a, b in zip(vals, lo, breaks))
        if abs(mass - 1.0) > 1e-9:
            raise ValueError("density must integrate to 1, got %.12g" % mass)
        self.breakpoints = tuple(breaks)
        self.values = tuple(vals)

    @classmethod
    def golden(cls):
        """Invariant density for alpha = (1 + sqrt(5))/2."""
        r5 = math.sqrt(5.0)
        return cls(((r5 - 1.0) / 2.0, 1.0),
                   ((5.0 + 3.0 * r5) / 10.0, (5.0 + r5) / 10.0))

    def as_step(self):
        return PeriodicFunction.step(self.breakpoints, self.values)

    def __call__(self, x):
        return self.as_step()(x)

    def integrate_against(self, f, tolerance=1e-10):
        """Integral of f times the density over [0, 1).

        Exact piecewise sums for step functions, closed forms for
        trigonometric polynomials, adaptive quadrature per piece
        otherwise.
        """
        lo = (0.0,) + self.breakpoints[:-1]
        if isinstance(f, PeriodicFunction) and hasattr(f, "step_breaks"):
            cuts = sorted(set([0.0, 1.0])
                          | set(self.breakpoints)
                          | set(float(b) for b in f.step_breaks))
            total = 0.0
            for a, b in zip(cuts, cuts[1:]):
                mid = 0.5 * (a + b)
                total += float(np.real(f(mid))) * self(mid) * (b - a)
            return complex(total)
        if isinstance(f, TrigPolynomial):
            total = complex(f.a0) * sum(v * (b - a) for v, a, b
                                        in zip(self.values, lo,
                                               self.breakpoints))
            for k, coeff in f.terms:
                kf = float(k)
                w = 2j * np.pi * kf
                piece = sum(v * (np.exp(w * b) - np.exp(w * a))
                            for v, a, b in zip(self.values, lo,
                                               self.breakpoints))
                total += coeff * piece / w
            return complex(total)
        from .apfunc import _quad_complex
        total = 0j
        for v, a, b in zip(self.values, lo, self.breakpoints):
            if v == 0.0:
                continue
            val, _ = _quad_complex(f, a, b, tolerance)
            total += v * val
        return total


def _freq_fraction(k):
    """Exact rational content of a frequency (floats are exact dyadics)."""
    if isinstance(k, Fraction):
        return k
    if isinstance(k, (int, np.integer)):
        return Fraction(int(k))
    return Fraction(float(k))


def _integer_frequency(k):
    if isinstance(k, (int, np.integer)):
        return int(k)
    if isinstance(k, Fraction) and k.denominator == 1:
        return int(k)
    return None


def _divides_one(period):
    """True when a function with this period is also 1-periodic."""
    if isinstance(period, (int, Fraction)):
        L = Fraction(period)
        return L.numerator == 1
    Lf = float(period)
    m = round(1.0 / Lf)
    return m >= 1 and abs(m * Lf - 1.0) < 1e-12


def _need_store(orbit, why):
    if not isinstance(orbit, FractionalOrbit) or orbit.unreduced is None:
        raise ValueError(
            "%s needs the unreduced products; generate the orbit with "
            "keep_unreduced=True" % why)
    return orbit.unreduced


def _entries(orbit, n):
    if isinstance(orbit, FractionalOrbit):
        if float(orbit.scale) != 1.0:
            raise ValueError("orbit entries are reduced modulo %s, not 1; "
                             "resample or average via the unreduced store"
                             % (orbit.scale,))
        return orbit.entries[:n]
    arr = np.mod(np.asarray(orbit, dtype=float), 1.0)
    return np.where(arr >= 1.0, 0.0, arr)[:n]


def _raw_positions(orbit, n):
    if isinstance(orbit, FractionalOrbit):
        return None
    return np.asarray(orbit, dtype=float)[:n]


def _trig_values(f, orbit, n):
    """Pointwise f values along the orbit for a trigonometric sum.

    Integer frequencies read the fractional entries directly; all other
    frequencies k reduce the unreduced products modulo 1/k exactly.
    """
    raw = _raw_positions(orbit, n)
    if raw is not None:
        return np.asarray(TrigPolynomial(f.a0, f.terms)(raw), dtype=complex)
    out = np.full(n, complex(f.a0), dtype=complex)
    plain_scale = float(orbit.scale) == 1.0
    ent = None
    for k, a in f.terms:
        ki = _integer_frequency(k)
        if ki is not None and plain_scale:
            if ent is None:
                ent = orbit.entries[:n]
            out += a * np.exp((2j * np.pi * ki) * ent)
            continue
        store = _need_store(orbit, "frequency %r evaluation" % (k,))
        kq = _freq_fraction(k)
        modulus = 1 / abs(kq)
        ph = np.fromiter((store.frac_mod(i, modulus) for i in range(n)),
                         dtype=float, count=n)
        wave = np.exp(2j * np.pi * ph)
        if kq < 0:
            wave = np.conj(wave)
        out += a * wave
    return out


def _orbit_values(f, orbit, n):
    """f evaluated along the first n orbit positions, as a complex array."""
    if isinstance(f, TrigPolynomial):
        return _trig_values(f, orbit, n)
    if isinstance(f, BohrSeries):
        return _trig_values(TrigPolynomial(f.a0, f.terms), orbit, n)
    if isinstance(f, SingularPeriodic):
        raw = _raw_positions(orbit, n)
        pos = raw if raw is not None else _entries(orbit, n)
        return np.asarray(f(pos), dtype=complex)
    if isinstance(f, PeriodicFunction):
        raw = _raw_positions(orbit, n)
        if raw is not None:
            return np.asarray(f(raw), dtype=complex)
        if _divides_one(f.period):
            return np.asarray(f(_entries(orbit, n)), dtype=complex)
        store = _need_store(orbit, "period-%s evaluation" % (f.period,))
        L = _freq_fraction(f.period)
        Lf = float(L)
        ph = np.fromiter((store.frac_mod(i, L) for i in range(n)),
                         dtype=float, count=n)
        return np.asarray(f(ph * Lf), dtype=complex)
    if isinstance(f, StepanovFunction):
        return _stepanov_values(f, orbit, n)
    raise TypeError("unsupported function type %r" % type(f).__name__)


def _stepanov_values(f, orbit, n):
    raw = _raw_positions(orbit, n)
    if raw is not None:
        return np.asarray(f(raw), dtype=complex)
    if f.periodic_view is None and f.spikes is None and f.background is None:
        raise ValueError(
            "orbit averaging of a unit-window-integrable function needs a "
            "structured form (periodic view, spike decomposition, or "
            "background); a bare evaluator cannot be applied to huge "
            "products without destroying their fractional parts")
    out = np.zeros(n, dtype=complex)
    if f.periodic_view is not None:
        out += _orbit_values(f.periodic_view, orbit, n)
    if f.background is not None:
        out += _orbit_values(f.background, orbit, n)
    if f.spikes is not None:
        point_set, model = f.spikes
        store = _need_store(orbit, "spike distance evaluation")
        spike = np.zeros(n, dtype=float)
        for i in range(n):
            d = float(point_set.dist(store.fraction(i)))
            if d == 0.0:
                spike[i] = math.inf
            elif d < model.halfwidth:
                spike[i] = model.coeff * d ** -model.exponent
        out += spike
    return out


def birkhoff_average(f, orbit, n=None):
    """(1/N) sum_{k<N} f(x_k) along an orbit or raw position sequence.

    1-periodic functions read the fractional entries; trigonometric
    sums with non-integer frequencies, and spike decompositions, reduce
    the unreduced products exactly (the orbit must be generated with
    keep_unreduced=True).  Raw sequences are evaluated as given.

    Returns
    -------
    complex
    """
    total = len(orbit)
    n = total if n is None else int(n)
    if not 1 <= n <= total:
        raise ValueError("n must lie in [1, %d]" % total)
    return complex(np.mean(_orbit_values(f, orbit, n)))


def convergence_trace(f, orbit, schedule=DEFAULT_SCHEDULE):
    """Birkhoff averages at each checkpoint against the function mean.

    Returns
    -------
    AverageTrace
    """
    ns = [int(v) for v in schedule]
    if not ns:
        raise ValueError("schedule must be non-empty")
    if any(b <= a for a, b in zip(ns, ns[1:])) or ns[0] < 1:
        raise ValueError("schedule must be strictly increasing and positive")
    if ns[-1] > len(orbit):
        raise ValueError("schedule exceeds orbit length %d" % len(orbit))
    vals = _orbit_values(f, orbit, ns[-1])
    sums = np.cumsum(vals)
    target = function_mean(f)
    target = complex(getattr(target, "value", target))
    checkpoints = tuple((n, complex(sums[n - 1] / n)) for n in ns)
    errors = tuple(abs(s - target) for _, s in checkpoints)
    return AverageTrace(checkpoints, target, errors)


def sobol_criterion(f, orbit, z, epsilon=None, schedule=DEFAULT_SCHEDULE):
    """Product of orbit discrepancy and truncated variation per checkpoint.

    Variation windows shrink at rate N**-(1+epsilon); the product bounds
    the averaging error of the singular part, so a decreasing trace
    certifies convergence.  epsilon defaults to min(0.1, eta) with
    eta = (1/2 - exponent)/2 and must keep eta - epsilon/2 positive.

    Returns
    -------
    SobolReport
    """
    if not isinstance(f, SingularPeriodic):
        raise TypeError("the product criterion needs a singular periodic "
                        "function")
    term = f.term_at(z)
    eta = (0.5 - term.exponent) / 2.0
    if epsilon is None:
        epsilon = min(0.1, eta)
    epsilon = float(epsilon)
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if not eta - epsilon / 2.0 > 0:
        raise ValueError(
            "epsilon %.6g too large: need eta - epsilon/2 > 0 with eta %.6g"
            % (epsilon, eta))
    ns = [int(v) for v in schedule]
    if any(b <= a for a, b in zip(ns, ns[1:])) or not ns or ns[0] < 2:
        raise ValueError("schedule must be strictly increasing, from N >= 2")
    ent = _entries(orbit, len(orbit))
    if ns[-1] > len(ent):
        raise ValueError("schedule exceeds orbit length %d" % len(ent))
    rows = []
    for n in ns:
        disc = extreme_discrepancy(ent[:n])
        vari = truncated_variation(f, z, 1.0 + epsilon, n)
        rows.append((n, disc, vari, disc * vari))
    decreasing = (len(rows) >= 3
                  and rows[-1][3] < rows[-2][3]
                  and rows[-1][3] < rows[-3][3])
    return SobolReport(tuple(rows), decreasing, eta, epsilon)


def _is_golden(multiplier):
    ref = golden_ratio()
    return (isinstance(multiplier, QuadraticMultiplier)
            and multiplier.a == ref.a and multiplier.b == ref.b
            and multiplier.d == ref.d)


def _sample_stats(values):
    arr = np.asarray([float(np.real(v)) for v in values], dtype=float)
    q1, med, q3 = np.percentile(arr, [25.0, 50.0, 75.0])
    return {"median": float(med), "iqr": float(q3 - q1),
            "count": int(arr.size)}


def renyi_parry_compare(f, multiplier, x_samples, count, mode="certified"):
    """Exponential-orbit versus beta-transformation averaging statistics.

    For each sample x, averages f along <alpha^n x> and along the
    beta-transformation orbit started at the fractional part of x, then
    summarizes both against the Lebesgue mean and the integral of f
    against the built-in invariant density.

    Returns
    -------
    dict
        lebesgue_mean, density_integral, exp_orbit_avg and
        beta_orbit_avg sample statistics (median, iqr, count), and the
        per-sample averages.
    """
    if not isinstance(multiplier, Multiplier):
        raise TypeError("multiplier must be a Multiplier")
    if not _is_golden(multiplier):
        raise ValueError("no built-in invariant density for %s; built-in: "
                         "the golden ratio" % multiplier.spec_string())
    density = RenyiParryDensity.golden()
    lebesgue = function_mean(f)
    lebesgue = complex(getattr(lebesgue, "value", lebesgue))
    density_integral = density.integrate_against(f)
    exp_avgs = []
    beta_avgs = []
    for x in x_samples:
        sp = SeedPoint.exact(x)
        orbit = generate_orbit(multiplier, sp, count)
        exp_avgs.append(birkhoff_average(f, orbit))
        frac_seed = sp.fraction() % 1
        if frac_seed == 0:
            raise ValueError("sample %s reduces to 0 mod 1; the beta orbit "
                             "would be trivial" % sp.fraction())
        bo = beta_orbit(multiplier, SeedPoint.exact(frac_seed), count,
                        mode=mode)
        beta_avgs.append(birkhoff_average(f, bo))
    return {
        "lebesgue_mean": lebesgue,
        "density_integral": density_integral,
        "exp_orbit_avg": _sample_stats(exp_avgs),
        "beta_orbit_avg": _sample_stats(beta_avgs),
        "exp_orbit_values": [complex(v) for v in exp_avgs],
        "beta_orbit_values": [complex(v) for v in beta_avgs],
    }

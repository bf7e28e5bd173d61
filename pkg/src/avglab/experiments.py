"""Configuration-driven experiment registry.

Each experiment binds the library modules into one reproducible run:
sample seeds, walk orbits, evaluate the statistic, and emit a trace CSV
plus a summary JSON with a pass/fail predicate.  Runs are fully
determined by the config mapping; the sampling RNG is philox4x64 keyed
by (seed, x_index), so any thread count produces the same rows and the
canonical (x_index, N) sort makes the bytes identical.

Config files are TOML.  parse_config / serialize_config round-trip the
mapping; validation errors name the offending key path.
"""

from __future__ import annotations

import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - interpreter-dependent import
    import tomli as tomllib

from .apfunc import (
    BohrSeries,
    PeriodicFunction,
    SingularTerm,
    StepanovFunction,
    TrigPolynomial,
    frac_power,
    mean as function_mean,
    truncate_bohr,
)
from .averaging import (
    RenyiParryDensity,
    birkhoff_average,
    renyi_parry_compare,
    sobol_criterion,
)
from .diophantine import (
    BeattySet,
    FiniteSet,
    Lattice,
    UnionSet,
    cantelli_budget,
    dio_scan,
)
from .equidist import (
    digit_block_frequencies,
    star_discrepancy,
    ud_bound_check,
    weyl_sum,
)
from .orbits import (
    Multiplier,
    QuadraticMultiplier,
    RationalMultiplier,
    SeedPoint,
    beta_orbit,
    generate_orbit,
)

__all__ = [
    "ConfigError",
    "RunResult",
    "EXPERIMENTS",
    "TRACE_HEADER",
    "parse_config",
    "serialize_config",
    "run_experiment",
    "write_trace",
    "write_summary",
]

TRACE_HEADER = "experiment,alpha,x_index,N,stat,re,im,target_re,target_im,abs_err"


class ConfigError(ValueError):
    """Invalid config value; the message starts with the dotted key path."""

    def __init__(self, path, problem):
        self.path = path
        super().__init__(f"{path}: {problem}")


def parse_config(text: str) -> dict:
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError("(file)", f"not valid TOML: {e}") from e


def _toml_scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        r = repr(v)
        return r if ("." in r or "e" in r or "n" in r) else r + ".0"
    if isinstance(v, str):
        return json.dumps(v)
    raise TypeError(f"cannot serialize {type(v).__name__} as TOML scalar")


def _toml_value(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    if isinstance(v, dict):
        inner = ", ".join(f"{k} = {_toml_value(x)}" for k, x in v.items())
        return "{" + inner + "}"
    return _toml_scalar(v)


def serialize_config(cfg: dict) -> str:
    """Canonical TOML text; parse(serialize(parse(t))) == parse(t)."""
    lines = []
    tables = []
    for key, val in cfg.items():
        if isinstance(val, dict):
            tables.append((key, val))
        else:
            lines.append(f"{key} = {_toml_value(val)}")
    for name, table in tables:
        lines.append("")
        lines.append(f"[{name}]")
        for key, val in table.items():
            lines.append(f"{key} = {_toml_value(val)}")
    return "\n".join(lines) + "\n"


def _fetch(cfg, path, default=None, required=False):
    node = cfg
    for part in path.split("."):
        if not isinstance(node, dict) or part not in node:
            if required:
                raise ConfigError(path, "missing required key")
            return default
        node = node[part]
    return node


def _expect_int(cfg, path, default=None, minimum=None, required=False):
    v = _fetch(cfg, path, default, required)
    if v is None:
        return None
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(path, f"expected an integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise ConfigError(path, f"must be >= {minimum}, got {v}")
    return v


def _expect_float(cfg, path, default=None, positive=False, required=False):
    v = _fetch(cfg, path, default, required)
    if v is None:
        return None
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(path, f"expected a number, got {v!r}")
    v = float(v)
    if positive and not v > 0:
        raise ConfigError(path, f"must be positive, got {v}")
    return v


def _expect_str(cfg, path, default=None, choices=None, required=False):
    v = _fetch(cfg, path, default, required)
    if v is None:
        return None
    if not isinstance(v, str):
        raise ConfigError(path, f"expected a string, got {v!r}")
    if choices is not None and v not in choices:
        raise ConfigError(path, f"must be one of {sorted(choices)}, got {v!r}")
    return v


def _expect_list(cfg, path, default=None, required=False):
    v = _fetch(cfg, path, default, required)
    if v is None:
        return None
    if not isinstance(v, list):
        raise ConfigError(path, f"expected an array, got {v!r}")
    return v


def _fraction(cfg, path, default=None, required=False):
    v = _fetch(cfg, path, default, required)
    if v is None:
        return None
    try:
        if isinstance(v, bool):
            raise ValueError("booleans are not numbers")
        return Fraction(v) if not isinstance(v, str) else Fraction(v)
    except (ValueError, ZeroDivisionError, TypeError) as e:
        raise ConfigError(path, f"not a rational number: {e}") from e


def _multiplier(cfg, path="multiplier.spec") -> Multiplier:
    spec = _expect_str(cfg, path, required=True)
    try:
        return Multiplier.parse(spec)
    except ValueError as e:
        raise ConfigError(path, str(e)) from e


def _sampling(cfg, default_count, default_bits=53):
    interval = _expect_list(cfg, "sampling.interval", [1.0, 2.0])
    if (
        len(interval) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                   for v in interval)
        or not float(interval[0]) < float(interval[1])
    ):
        raise ConfigError("sampling.interval", f"expected [lo, hi] with lo < hi, got {interval!r}")
    return {
        "interval": (float(interval[0]), float(interval[1])),
        "count": _expect_int(cfg, "sampling.count", default_count, minimum=1),
        "seed": _expect_int(cfg, "sampling.seed", 7, minimum=0),
        "bits": _expect_int(cfg, "sampling.bits", default_bits, minimum=8),
    }


def _schedule(cfg, default, minimum_len=1):
    raw = _expect_list(cfg, "schedule.checkpoints", default)
    if len(raw) < minimum_len:
        raise ConfigError("schedule.checkpoints", f"need at least {minimum_len} checkpoints")
    out = []
    for i, v in enumerate(raw):
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise ConfigError(f"schedule.checkpoints[{i}]", f"expected a positive integer, got {v!r}")
        out.append(v)
    if any(b <= a for a, b in zip(out, out[1:])):
        raise ConfigError("schedule.checkpoints", "must be strictly increasing")
    return tuple(out)


def _dyadic_guard(multiplier, sampling, deepest):
    """Reject seed widths an even integer multiplier would truncate.

    A sampled seed is a dyadic rational; multiplying by an integer with
    2-adic valuation v shifts v of its bits out per step, so the orbit
    collapses to 0 after bits/v steps unless bits covers the deepest
    checkpoint.
    """
    if not (isinstance(multiplier, RationalMultiplier) and multiplier.q == 1):
        return
    v = 0
    p = abs(multiplier.p)
    while p % 2 == 0:
        p //= 2
        v += 1
    if v == 0:
        return
    needed = deepest * v + 16
    if sampling["bits"] < needed:
        raise ConfigError(
            "sampling.bits",
            f"multiplier {multiplier.spec_string()} truncates dyadic seeds; "
            f"depth {deepest} needs at least {needed} bits",
        )


def _complex_pair(rec, path):
    if (
        not isinstance(rec, list)
        or len(rec) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in rec)
    ):
        raise ConfigError(path, f"expected [re, im], got {rec!r}")
    return complex(float(rec[0]), float(rec[1]))


def _build_trigpoly(rec, path):
    if not isinstance(rec, dict):
        raise ConfigError(path, "expected a table")
    a0 = _complex_pair(rec.get("a0", [0.0, 0.0]), f"{path}.a0")
    terms = []
    raw_terms = rec.get("terms", [])
    if not isinstance(raw_terms, list):
        raise ConfigError(f"{path}.terms", "expected an array of tables")
    for i, t in enumerate(raw_terms):
        tpath = f"{path}.terms[{i}]"
        if not isinstance(t, dict) or "k" not in t:
            raise ConfigError(tpath, "expected a table with keys k, re, im")
        k = t["k"]
        if isinstance(k, bool) or not isinstance(k, (int, float, str)):
            raise ConfigError(f"{tpath}.k", f"expected a frequency, got {k!r}")
        if isinstance(k, str):
            try:
                k = Fraction(k)
            except ValueError as e:
                raise ConfigError(f"{tpath}.k", str(e)) from e
        amp = complex(float(t.get("re", 0.0)), float(t.get("im", 0.0)))
        terms.append((k, amp))
    try:
        return TrigPolynomial(a0, terms)
    except ValueError as e:
        raise ConfigError(path, str(e)) from e


def _build_point_set(rec, path):
    if not isinstance(rec, dict):
        raise ConfigError(path, "expected a table")
    kind = rec.get("type")
    if kind == "lattice":
        return Lattice(
            _fraction(rec, "offset", Fraction(0)),
            _fraction(rec, "spacing", Fraction(1)),
        )
    if kind == "finite":
        pts = _expect_list(rec, "points", required=True)
        return FiniteSet([_fraction({"p": p}, "p") for p in pts])
    if kind == "beatty":
        slope = _expect_str(rec, "slope", required=True)
        try:
            parsed = Multiplier.parse(slope)
            return BeattySet(
                parsed,
                _fraction(rec, "scale", Fraction(1)),
                _fraction(rec, "offset", Fraction(0)),
            )
        except (ValueError, TypeError) as e:
            raise ConfigError(f"{path}.slope", str(e)) from e
    if kind == "union":
        parts = _expect_list(rec, "parts", required=True)
        return UnionSet([_build_point_set(p, f"{path}.parts[{i}]")
                         for i, p in enumerate(parts)])
    raise ConfigError(f"{path}.type", f"unknown point-set type {kind!r}")


@dataclass
class RunResult:
    """Outcome of one experiment run."""

    rows: list
    summary: dict
    passed: bool


def _row(exp, alpha, x_index, n, stat, value, target, abs_err):
    value = complex(value)
    target = complex(target)
    return (exp, alpha, int(x_index), int(n), stat,
            value.real, value.imag, target.real, target.imag, float(abs_err))


def _fmt(v: float) -> str:
    return format(v, ".17g")


def write_trace(rows, fh):
    fh.write(TRACE_HEADER + "\n")
    for exp, alpha, xi, n, stat, re, im, tre, tim, err in rows:
        fh.write(f"{exp},{alpha},{xi},{n},{stat},{_fmt(re)},{_fmt(im)},"
                 f"{_fmt(tre)},{_fmt(tim)},{_fmt(err)}\n")


def write_summary(summary, fh):
    fh.write(json.dumps(summary, sort_keys=True, indent=2))
    fh.write("\n")


def _seed_point(params, index):
    s = params["sampling"]
    return SeedPoint.sampled(s["seed"], index, interval=s["interval"], bits=s["bits"])


def _fraction_ok(flags):
    flags = list(flags)
    return sum(flags) / len(flags) if flags else 0.0


def _median(values):
    return float(np.median(np.asarray(values, dtype=float)))


def _trig_lipschitz(f: TrigPolynomial) -> float:
    return 2.0 * math.pi * sum(abs(float(k)) * abs(a) for k, a in f.terms)


def _run_samples(worker, count, threads):
    if threads <= 1:
        results = [worker(i) for i in range(count)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(worker, range(count)))
    rows = []
    records = []
    for sample_rows, record in results:
        rows.extend(sample_rows)
        records.append(record)
    rows.sort(key=lambda r: (r[2], r[3]))  # canonical (x_index, N), stable
    return rows, records


# --- weyl-ud -----------------------------------------------------------------

def _weyl_ud_validate(cfg):
    p = {
        "multiplier": _multiplier(cfg),
        "sampling": _sampling(cfg, 100),
        "checkpoints": _schedule(cfg, [100, 1000, 10000]),
        "weyl_range": _expect_int(cfg, "thresholds.weyl_range", 5, minimum=1),
        "median_star": _expect_float(cfg, "thresholds.median_star", 0.02, positive=True),
        "weyl_abs": _expect_float(cfg, "thresholds.weyl_abs", 0.05, positive=True),
        "ok_fraction": _expect_float(cfg, "thresholds.ok_fraction", 0.9, positive=True),
        "envelope_epsilon": _expect_float(cfg, "thresholds.envelope_epsilon", 0.1, positive=True),
    }
    _dyadic_guard(p["multiplier"], p["sampling"], p["checkpoints"][-1])
    return p


def _weyl_ud_sample(params, budget_mb, i):
    m = params["multiplier"]
    alpha = m.spec_string()
    n_max = params["checkpoints"][-1]
    orbit = generate_orbit(m, _seed_point(params, i), n_max, budget_mb=budget_mb)
    vals = orbit.values()
    err = orbit.guaranteed_abs_error
    rows = []
    trace = []
    for n in params["checkpoints"]:
        star = star_discrepancy(vals[:n])
        trace.append((n, star))
        rows.append(_row("weyl-ud", alpha, i, n, "star", star, 0.0, err))
    kmax = params["weyl_range"]
    max_weyl = 0.0
    for k in [k for a in range(1, kmax + 1) for k in (a, -a)]:
        w = weyl_sum(vals, k)
        max_weyl = max(max_weyl, abs(w))
        rows.append(_row("weyl-ud", alpha, i, n_max, f"weyl_{k}", w, 0.0,
                         2.0 * math.pi * abs(k) * err))
    ud = ud_bound_check(trace, params["envelope_epsilon"])
    rows.append(_row("weyl-ud", alpha, i, n_max, "c_hat", ud["c_hat"], 0.0, math.nan))
    record = {"star": trace[-1][1], "max_weyl": max_weyl, "c_hat": ud["c_hat"]}
    return rows, record


def _weyl_ud_summary(params, records):
    stars = [r["star"] for r in records]
    weyl_ok = [r["max_weyl"] <= params["weyl_abs"] for r in records]
    med = _median(stars)
    frac = _fraction_ok(weyl_ok)
    passed = med <= params["median_star"] and frac >= params["ok_fraction"]
    return {
        "median_star": med,
        "weyl_ok_fraction": frac,
        "max_weyl_median": _median([r["max_weyl"] for r in records]),
        "c_hat_median": _median([r["c_hat"] for r in records]),
        "c_hat_max": max(r["c_hat"] for r in records),
        "thresholds": {
            "median_star": params["median_star"],
            "weyl_abs": params["weyl_abs"],
            "ok_fraction": params["ok_fraction"],
            "envelope_epsilon": params["envelope_epsilon"],
        },
    }, passed


# --- discrepancy-bound -------------------------------------------------------

def _disc_bound_validate(cfg):
    p = {
        "multiplier": _multiplier(cfg),
        "sampling": _sampling(cfg, 50),
        "checkpoints": _schedule(cfg, [300, 1000, 3000, 10000], minimum_len=2),
        "envelope_epsilon": _expect_float(cfg, "thresholds.envelope_epsilon", 0.1, positive=True),
        "ok_fraction": _expect_float(cfg, "thresholds.ok_fraction", 0.9, positive=True),
    }
    _dyadic_guard(p["multiplier"], p["sampling"], p["checkpoints"][-1])
    return p


def _disc_bound_sample(params, budget_mb, i):
    m = params["multiplier"]
    alpha = m.spec_string()
    n_max = params["checkpoints"][-1]
    orbit = generate_orbit(m, _seed_point(params, i), n_max, budget_mb=budget_mb)
    vals = orbit.values()
    err = orbit.guaranteed_abs_error
    rows = []
    trace = []
    for n in params["checkpoints"]:
        star = star_discrepancy(vals[:n])
        trace.append((n, star))
        rows.append(_row("discrepancy-bound", alpha, i, n, "star", star, 0.0, err))
    ud = ud_bound_check(trace, params["envelope_epsilon"])
    for (n, _), ratio in zip(trace, ud["ratios"]):
        rows.append(_row("discrepancy-bound", alpha, i, n, "envelope_ratio",
                         ratio, 0.0, math.nan))
    return rows, {"c_hat": ud["c_hat"], "passed": ud["passed"]}


def _disc_bound_summary(params, records):
    frac = _fraction_ok([r["passed"] for r in records])
    c_hats = [r["c_hat"] for r in records]
    passed = frac >= params["ok_fraction"]
    return {
        "envelope_ok_fraction": frac,
        "c_hat_median": _median(c_hats),
        "c_hat_max": max(c_hats),
        "thresholds": {"ok_fraction": params["ok_fraction"],
                       "envelope_epsilon": params["envelope_epsilon"]},
    }, passed


# --- periodic-average --------------------------------------------------------

def _periodic_avg_validate(cfg):
    rec = _fetch(cfg, "function", {"type": "trigpoly", "a0": [2.0, 0.0],
                                   "terms": [{"k": 1, "re": 3.0, "im": 0.0}]})
    kind = rec.get("type") if isinstance(rec, dict) else None
    if kind != "trigpoly":
        raise ConfigError("function.type", f"expected 'trigpoly', got {kind!r}")
    f = _build_trigpoly(rec, "function")
    p = {
        "multiplier": _multiplier(cfg),
        "sampling": _sampling(cfg, 100),
        "checkpoints": _schedule(cfg, [100, 1000, 10000]),
        "function": f,
        "target": complex(f.a0),
        "abs_tol": _expect_float(cfg, "thresholds.abs_tol", 0.05, positive=True),
        "ok_fraction": _expect_float(cfg, "thresholds.ok_fraction", 0.9, positive=True),
    }
    _dyadic_guard(p["multiplier"], p["sampling"], p["checkpoints"][-1])
    return p


def _periodic_avg_sample(params, budget_mb, i):
    m = params["multiplier"]
    alpha = m.spec_string()
    f = params["function"]
    target = params["target"]
    n_max = params["checkpoints"][-1]
    orbit = generate_orbit(m, _seed_point(params, i), n_max, budget_mb=budget_mb)
    lip = _trig_lipschitz(f)
    rows = []
    final = None
    for n in params["checkpoints"]:
        s = birkhoff_average(f, orbit, n=n)
        final = s
        rows.append(_row("periodic-average", alpha, i, n, "birkhoff", s, target,
                         lip * orbit.guaranteed_abs_error))
    return rows, {"abs_err": abs(final - target)}


def _periodic_avg_summary(params, records):
    ok = [r["abs_err"] <= params["abs_tol"] for r in records]
    frac = _fraction_ok(ok)
    passed = frac >= params["ok_fraction"]
    return {
        "ok_fraction": frac,
        "median_abs_err": _median([r["abs_err"] for r in records]),
        "target": [params["target"].real, params["target"].imag],
        "thresholds": {"abs_tol": params["abs_tol"],
                       "ok_fraction": params["ok_fraction"]},
    }, passed


# --- sobol-singular ----------------------------------------------------------

def _sobol_validate(cfg):
    rec = _fetch(cfg, "function", {"type": "frac-power", "exponent": 0.25})
    kind = rec.get("type") if isinstance(rec, dict) else None
    if kind != "frac-power":
        raise ConfigError("function.type", f"expected 'frac-power', got {kind!r}")
    exponent = _expect_float(rec, "exponent", 0.25, positive=True)
    if not exponent < 0.5:
        raise ConfigError("function.exponent", "must lie in (0, 1/2)")
    try:
        f = frac_power(exponent)
    except ValueError as e:
        raise ConfigError("function", str(e)) from e
    target = function_mean(f)
    p = {
        "multiplier": _multiplier(cfg),
        "sampling": _sampling(cfg, 50, default_bits=100064),
        "checkpoints": _schedule(cfg, [1000, 10000, 100000], minimum_len=3),
        "function": f,
        "exponent": exponent,
        "target": complex(getattr(target, "value", target)),
        "abs_tol": _expect_float(cfg, "thresholds.abs_tol", 0.05, positive=True),
        "ok_fraction": _expect_float(cfg, "thresholds.ok_fraction", 0.9, positive=True),
    }
    _dyadic_guard(p["multiplier"], p["sampling"], p["checkpoints"][-1])
    return p


def _singular_birkhoff_err(f, entries, orbit_err):
    """First-order certified bound for a right-sided power singularity at 0.

    Each entry can sit anywhere within orbit_err of its true value, so the
    local slope is taken at the pessimistic end of that interval; entries
    within 2*orbit_err of the singularity give an unbounded term.
    """
    term = f.term_at(0.0)
    a, c, hw = term.exponent, abs(term.coeff), term.halfwidth
    d = np.minimum(np.asarray(entries), 1.0)  # distance to 0 from the right
    shifted = d - orbit_err
    if np.any(shifted <= 0):
        return math.inf
    slopes = np.where(d < hw + orbit_err, a * c * shifted ** (-a - 1.0), 0.0)
    tail_slope = a * c * hw ** (-a - 1.0)  # sup slope of the bounded tail
    return float(orbit_err * (np.mean(slopes) + tail_slope))


def _sobol_sample(params, budget_mb, i):
    m = params["multiplier"]
    alpha = m.spec_string()
    f = params["function"]
    target = params["target"]
    n_max = params["checkpoints"][-1]
    orbit = generate_orbit(m, _seed_point(params, i), n_max, budget_mb=budget_mb)
    entries = orbit.values()
    rows = []
    final = None
    for n in params["checkpoints"]:
        s = birkhoff_average(f, orbit, n=n)
        final = s
        err = _singular_birkhoff_err(f, entries[:n], orbit.guaranteed_abs_error)
        rows.append(_row("sobol-singular", alpha, i, n, "birkhoff", s, target, err))
    report = sobol_criterion(f, orbit, 0.0, schedule=params["checkpoints"])
    for n, disc, var, prod in report.rows:
        rows.append(_row("sobol-singular", alpha, i, n, "extreme_discrepancy",
                         disc, 0.0, math.nan))
        rows.append(_row("sobol-singular", alpha, i, n, "truncated_variation",
                         var, 0.0, math.nan))
        rows.append(_row("sobol-singular", alpha, i, n, "sobol_product",
                         prod, 0.0, math.nan))
    record = {"abs_err": abs(final - target),
              "decreasing_tail": report.decreasing_tail}
    return rows, record


def _sobol_summary(params, records):
    ok = [r["abs_err"] <= params["abs_tol"] for r in records]
    dec = [r["decreasing_tail"] for r in records]
    frac_ok = _fraction_ok(ok)
    frac_dec = _fraction_ok(dec)
    passed = frac_ok >= params["ok_fraction"] and frac_dec >= params["ok_fraction"]
    return {
        "ok_fraction": frac_ok,
        "decreasing_fraction": frac_dec,
        "median_abs_err": _median([r["abs_err"] for r in records]),
        "target": [params["target"].real, params["target"].imag],
        "thresholds": {"abs_tol": params["abs_tol"],
                       "ok_fraction": params["ok_fraction"]},
    }, passed


# --- bohr-average ------------------------------------------------------------

def _bohr_validate(cfg):
    rec = _fetch(cfg, "function", {
        "type": "bohr-geometric",
        "frequencies": [1.0, 1.4142135623730951, 1.618033988749895],
        "first": 1.0, "ratio": 0.5, "a0": [1.0, 0.0],
    })
    kind = rec.get("type") if isinstance(rec, dict) else None
    if kind != "bohr-geometric":
        raise ConfigError("function.type", f"expected 'bohr-geometric', got {kind!r}")
    freqs = _expect_list(rec, "frequencies", required=True)
    first = _expect_float(rec, "first", 1.0, positive=True)
    ratio = _expect_float(rec, "ratio", 0.5, positive=True)
    if not ratio < 1:
        raise ConfigError("function.ratio", "must lie in (0, 1)")
    a0 = _complex_pair(rec.get("a0", [0.0, 0.0]), "function.a0")
    try:
        series = BohrSeries.geometric(freqs, first=first, ratio=ratio, a0=a0)
    except ValueError as e:
        raise ConfigError("function", str(e)) from e
    m_values = _expect_list(cfg, "thresholds.m_values", [0, 1, 2, 3])
    for i, mv in enumerate(m_values):
        if isinstance(mv, bool) or not isinstance(mv, int) or mv < 0:
            raise ConfigError(f"thresholds.m_values[{i}]", f"expected an index >= 0, got {mv!r}")
    if max(m_values) > len(series.terms):
        raise ConfigError("thresholds.m_values",
                          f"indices exceed the {len(series.terms)} series terms")
    cap = _expect_int(cfg, "thresholds.eval_truncation", len(series.terms),
                      minimum=max(m_values))
    if cap > len(series.terms):
        raise ConfigError("thresholds.eval_truncation",
                          f"exceeds the {len(series.terms)} series terms")
    p = {
        "multiplier": _multiplier(cfg),
        "sampling": _sampling(cfg, 20),
        "checkpoints": _schedule(cfg, [100, 1000, 10000]),
        "series": series,
        "m_values": [int(v) for v in m_values],
        "cap": cap,
        "slack": _expect_float(cfg, "thresholds.slack", 1e-9, positive=True),
    }
    _dyadic_guard(p["multiplier"], p["sampling"], p["checkpoints"][-1])
    return p


def _bohr_sample(params, budget_mb, i):
    m = params["multiplier"]
    alpha = m.spec_string()
    series = params["series"]
    g_full, tail_full = truncate_bohr(series, params["cap"])
    n_max = params["checkpoints"][-1]
    orbit = generate_orbit(m, _seed_point(params, i), n_max,
                           keep_unreduced=True, budget_mb=budget_mb)
    err = orbit.guaranteed_abs_error
    a0 = complex(series.a0)
    rows = []
    max_excess = -math.inf
    for n in params["checkpoints"]:
        s_full = birkhoff_average(g_full, orbit, n=n)
        rows.append(_row("bohr-average", alpha, i, n, "birkhoff_full", s_full,
                         a0, _trig_lipschitz(g_full) * err))
        for mv in params["m_values"]:
            g_m, tail_m = truncate_bohr(series, mv)
            s_m = birkhoff_average(g_m, orbit, n=n)
            gap = abs(s_full - s_m)
            bound = tail_m + tail_full
            max_excess = max(max_excess, gap - bound)
            rows.append(_row("bohr-average", alpha, i, n, f"birkhoff_m{mv}",
                             s_m, a0, _trig_lipschitz(g_m) * err))
            rows.append(_row("bohr-average", alpha, i, n, f"sandwich_gap_m{mv}",
                             gap, tail_m, math.nan))
    mean_ok = all(
        abs(complex(function_mean(truncate_bohr(series, mv)[0])) - a0)
        <= truncate_bohr(series, mv)[1]
        for mv in params["m_values"]
    )
    return rows, {"max_excess": max_excess, "mean_ok": mean_ok}


def _bohr_summary(params, records):
    worst = max(r["max_excess"] for r in records)
    sandwich_ok = worst <= params["slack"]
    means_ok = all(r["mean_ok"] for r in records)
    passed = sandwich_ok and means_ok
    return {
        "max_sandwich_excess": worst,
        "sandwich_ok": sandwich_ok,
        "means_ok": means_ok,
        "thresholds": {"slack": params["slack"]},
    }, passed


# --- stepanov-average --------------------------------------------------------

def _stepanov_validate(cfg):
    rec = _fetch(cfg, "function", {
        "type": "stepanov-spikes",
        "background": {"a0": [0.7, 0.0], "terms": [{"k": 1, "re": 0.2, "im": 0.0}]},
        "slope": "sqrt(2)", "scale": "1", "offset": "0",
        "exponent": 0.25, "coeff": 0.1, "halfwidth": 0.25, "side": "both",
    })
    kind = rec.get("type") if isinstance(rec, dict) else None
    if kind != "stepanov-spikes":
        raise ConfigError("function.type", f"expected 'stepanov-spikes', got {kind!r}")
    background = _build_trigpoly(rec.get("background", {}), "function.background")
    slope_spec = _expect_str(rec, "slope", required=True)
    try:
        slope = Multiplier.parse(slope_spec)
        if not isinstance(slope, QuadraticMultiplier):
            raise TypeError("slope must be a quadratic irrational")
        scale = _fraction(rec, "scale", Fraction(1))
        offset = _fraction(rec, "offset", Fraction(0))
        point_set = BeattySet(slope, scale, offset)
    except (ValueError, TypeError) as e:
        raise ConfigError("function.slope", str(e)) from e
    exponent = _expect_float(rec, "exponent", 0.25, positive=True)
    coeff = _expect_float(rec, "coeff", 0.1)
    halfwidth = _expect_float(rec, "halfwidth", 0.25, positive=True)
    side = _expect_str(rec, "side", "both", choices={"both", "left", "right"})
    try:
        model = SingularTerm(0.0, exponent, coeff, halfwidth, side)
    except ValueError as e:
        raise ConfigError("function", str(e)) from e
    f = StepanovFunction(spikes=(point_set, model), background=background,
                         label="beatty spikes")
    # long-run mean: background a0 plus spike density 1/(scale*slope) times
    # the mass of one spike
    sides = 2.0 if side == "both" else 1.0
    mass = sides * coeff * halfwidth ** (1.0 - exponent) / (1.0 - exponent)
    density = 1.0 / (float(scale) * slope.as_float())
    target = complex(background.a0) + density * mass
    p = {
        "multiplier": _multiplier(cfg),
        "sampling": _sampling(cfg, 20),
        "checkpoints": _schedule(cfg, [100, 1000, 10000]),
        "function": f,
        "target": target,
        "abs_tol": _expect_float(cfg, "thresholds.abs_tol", 0.05, positive=True),
        "ok_fraction": _expect_float(cfg, "thresholds.ok_fraction", 0.9, positive=True),
    }
    _dyadic_guard(p["multiplier"], p["sampling"], p["checkpoints"][-1])
    return p


def _stepanov_sample(params, budget_mb, i):
    m = params["multiplier"]
    alpha = m.spec_string()
    f = params["function"]
    target = params["target"]
    n_max = params["checkpoints"][-1]
    orbit = generate_orbit(m, _seed_point(params, i), n_max,
                           keep_unreduced=True, budget_mb=budget_mb)
    rows = []
    final = None
    for n in params["checkpoints"]:
        s = birkhoff_average(f, orbit, n=n)
        final = s
        rows.append(_row("stepanov-average", alpha, i, n, "birkhoff", s,
                         target, math.nan))
    return rows, {"abs_err": abs(final - target)}


def _stepanov_summary(params, records):
    ok = [r["abs_err"] <= params["abs_tol"] for r in records]
    frac = _fraction_ok(ok)
    passed = frac >= params["ok_fraction"]
    return {
        "ok_fraction": frac,
        "median_abs_err": _median([r["abs_err"] for r in records]),
        "target": [params["target"].real, params["target"].imag],
        "thresholds": {"abs_tol": params["abs_tol"],
                       "ok_fraction": params["ok_fraction"]},
    }, passed


# --- dio-scan ----------------------------------------------------------------

def _dio_validate(cfg):
    rec = _fetch(cfg, "point_set", {"type": "lattice", "offset": "0", "spacing": "1"})
    y_set = _build_point_set(rec, "point_set")
    checkpoints = _schedule(cfg, [10000])
    p = {
        "multiplier": _multiplier(cfg),
        "sampling": _sampling(cfg, 200),
        "depth": checkpoints[-1],
        "y_set": y_set,
        "epsilon": _expect_float(cfg, "thresholds.epsilon", 0.5, positive=True),
        "finite_fraction": _expect_float(cfg, "thresholds.finite_fraction", 0.95, positive=True),
        "early_fraction": _expect_float(cfg, "thresholds.early_fraction", 0.95, positive=True),
        "early_cutoff": _expect_float(cfg, "thresholds.early_cutoff", 1.0 / 3.0, positive=True),
    }
    _dyadic_guard(p["multiplier"], p["sampling"], p["depth"])
    return p


def _dio_sample(params, budget_mb, i):
    m = params["multiplier"]
    alpha = m.spec_string()
    n = params["depth"]
    r = dio_scan(m, _seed_point(params, i), params["y_set"],
                 params["epsilon"], n, budget_mb=budget_mb)
    suspect = 1.0 if r["verdict"] == "suspect-exceptional" else 0.0
    max_v = max(r["violations"], default=0)
    rows = [
        _row("dio-scan", alpha, i, n, "violation_count", len(r["violations"]), 0.0, 0.0),
        _row("dio-scan", alpha, i, n, "max_violation", max_v, 0.0, 0.0),
        _row("dio-scan", alpha, i, n, "hit_count", len(r["hits"]), 0.0, 0.0),
        _row("dio-scan", alpha, i, n, "suspect", suspect, 0.0, 0.0),
    ]
    return rows, {"verdict": r["verdict"], "max_violation": max_v,
                  "budget": r["budget"]}


def _dio_summary(params, records):
    n = params["depth"]
    finite = [r["verdict"] == "finite-violations" for r in records]
    early = [r["max_violation"] <= params["early_cutoff"] * n for r in records]
    finite_frac = _fraction_ok(finite)
    early_frac = _fraction_ok(early)
    budget = records[0]["budget"]
    count = len(records)
    suspect_frac = 1.0 - finite_frac
    cap = min(1.0, budget)
    sigma = math.sqrt(cap * (1.0 - cap) / count) if cap < 1.0 else 0.0
    passed = (finite_frac >= params["finite_fraction"]
              and early_frac >= params["early_fraction"])
    return {
        "finite_fraction": finite_frac,
        "early_fraction": early_frac,
        "suspect_fraction": suspect_frac,
        "cantelli_budget": budget,
        "cantelli_consistent": suspect_frac <= cap + 3.0 * sigma,
        "thresholds": {"finite_fraction": params["finite_fraction"],
                       "early_fraction": params["early_fraction"],
                       "early_cutoff": params["early_cutoff"]},
    }, passed


# --- renyi-parry -------------------------------------------------------------

_INV_TAU = (math.sqrt(5.0) - 1.0) / 2.0


def _renyi_validate(cfg):
    rec = _fetch(cfg, "function", {"type": "step",
                                   "breaks": [_INV_TAU, 1.0],
                                   "values": [1.0, 0.0]})
    kind = rec.get("type") if isinstance(rec, dict) else None
    if kind != "step":
        raise ConfigError("function.type", f"expected 'step', got {kind!r}")
    breaks = _expect_list(rec, "breaks", required=True)
    values = _expect_list(rec, "values", required=True)
    try:
        f = PeriodicFunction.step([float(b) for b in breaks],
                                  [float(v) for v in values])
    except (ValueError, TypeError) as e:
        raise ConfigError("function", str(e)) from e
    return {
        "multiplier": _multiplier(cfg),
        "sampling": _sampling(cfg, 50),
        "depth": _schedule(cfg, [10000])[-1],
        "function": f,
        "mode": _expect_str(cfg, "thresholds.mode", "certified",
                            choices={"certified", "fast"}),
        "exp_tol": _expect_float(cfg, "thresholds.exp_tol", 0.02, positive=True),
        "beta_tol": _expect_float(cfg, "thresholds.beta_tol", 0.03, positive=True),
        "min_gap": _expect_float(cfg, "thresholds.min_gap", 0.08, positive=True),
        "histogram_bins": _expect_int(cfg, "thresholds.histogram_bins", 50, minimum=4),
    }


def _renyi_run(params, budget_mb, threads):
    m = params["multiplier"]
    alpha = m.spec_string()
    f = params["function"]
    count = params["sampling"]["count"]
    depth = params["depth"]
    seeds = [_seed_point(params, i) for i in range(count)]
    rp = renyi_parry_compare(f, m, seeds, depth, mode=params["mode"])
    lebesgue = rp["lebesgue_mean"].real
    density_integral = float(rp["density_integral"].real
                             if isinstance(rp["density_integral"], complex)
                             else rp["density_integral"])
    rows = []
    for i, (ev, bv) in enumerate(zip(rp["exp_orbit_values"],
                                     rp["beta_orbit_values"])):
        rows.append(_row("renyi-parry", alpha, i, depth, "exp_avg", ev,
                         lebesgue, math.nan))
        rows.append(_row("renyi-parry", alpha, i, depth, "beta_avg", bv,
                         density_integral, math.nan))
    rows.sort(key=lambda r: (r[2], r[3]))
    # histogram of one representative certified beta orbit for the
    # density overlay
    first_frac = seeds[0].fraction() % 1
    bo = beta_orbit(m, SeedPoint.exact(first_frac), depth, mode=params["mode"],
                    budget_mb=budget_mb)
    counts, edges = np.histogram(bo.values(), bins=params["histogram_bins"],
                                 range=(0.0, 1.0), density=True)
    density = RenyiParryDensity.golden()
    exp_med = rp["exp_orbit_avg"]["median"]
    beta_med = rp["beta_orbit_avg"]["median"]
    gap = abs(beta_med - exp_med)
    passed = (abs(exp_med - lebesgue) <= params["exp_tol"]
              and abs(beta_med - density_integral) <= params["beta_tol"]
              and gap >= params["min_gap"])
    summary = {
        "lebesgue_mean": lebesgue,
        "density_integral": density_integral,
        "exp_median": exp_med,
        "beta_median": beta_med,
        "median_gap": gap,
        "exp_iqr": rp["exp_orbit_avg"]["iqr"],
        "beta_iqr": rp["beta_orbit_avg"]["iqr"],
        "density": {"breaks": [float(b) for b in density.breakpoints],
                    "values": [float(v) for v in density.values]},
        "beta_histogram": {"edges": edges.tolist(), "density": counts.tolist()},
        "thresholds": {"exp_tol": params["exp_tol"],
                       "beta_tol": params["beta_tol"],
                       "min_gap": params["min_gap"]},
    }
    return rows, summary, passed


# --- normality ---------------------------------------------------------------

def _normality_validate(cfg):
    m = _multiplier(cfg)
    if not (isinstance(m, RationalMultiplier) and m.q == 1 and m.p >= 2):
        raise ConfigError("multiplier.spec",
                          "normality needs an integer base >= 2")
    base = m.p
    digits = _expect_int(cfg, "thresholds.digits", 100000, minimum=10)
    block_max = _expect_int(cfg, "thresholds.block_max", 2, minimum=1)
    sampling = _sampling(cfg, 20, default_bits=100064)
    needed = int(digits * math.log2(base)) + 16
    if sampling["bits"] < needed:
        raise ConfigError(
            "sampling.bits",
            f"{digits} base-{base} digits need at least {needed} sampled bits",
        )
    return {
        "multiplier": m,
        "sampling": sampling,
        "base": base,
        "digits": digits,
        "block_max": block_max,
        "abs_tol": _expect_float(cfg, "thresholds.abs_tol", 0.02, positive=True),
        "ok_fraction": _expect_float(cfg, "thresholds.ok_fraction", 0.9, positive=True),
    }


def _normality_sample(params, budget_mb, i):
    sp = _seed_point(params, i)
    base = params["base"]
    alpha = params["multiplier"].spec_string()
    rows = []
    worst = 0.0
    for block_len in range(1, params["block_max"] + 1):
        bf = digit_block_frequencies(sp, base, block_len, params["digits"])
        target = base ** -block_len
        for key, freq in sorted(bf.as_dict().items()):
            rows.append(_row("normality", alpha, i, params["digits"],
                             f"freq_L{block_len}_{key}", freq, target, 0.0))
        worst = max(worst, bf.max_abs_deviation())
    return rows, {"max_deviation": worst}


def _normality_summary(params, records):
    ok = [r["max_deviation"] <= params["abs_tol"] for r in records]
    frac = _fraction_ok(ok)
    passed = frac >= params["ok_fraction"]
    return {
        "ok_fraction": frac,
        "median_max_deviation": _median([r["max_deviation"] for r in records]),
        "thresholds": {"abs_tol": params["abs_tol"],
                       "ok_fraction": params["ok_fraction"]},
    }, passed


# --- registry ----------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentDef:
    id: str
    statement: str
    validate: object
    sample: object = None  # worker(params, budget_mb, index) -> (rows, record)
    summarize: object = None
    whole_run: object = None  # overrides the per-sample map when set


EXPERIMENTS = {
    e.id: e
    for e in [
        ExperimentDef(
            "weyl-ud",
            "for almost every seed the orbit <alpha^n x> equidistributes: "
            "small star discrepancy and vanishing Weyl sums",
            _weyl_ud_validate, _weyl_ud_sample, _weyl_ud_summary,
        ),
        ExperimentDef(
            "discrepancy-bound",
            "star discrepancy of <alpha^n x> decays like 1/sqrt(N) up to a "
            "polylog factor along checkpoints",
            _disc_bound_validate, _disc_bound_sample, _disc_bound_summary,
        ),
        ExperimentDef(
            "periodic-average",
            "Birkhoff averages of a trigonometric polynomial along "
            "<alpha^n x> converge to its mean coefficient",
            _periodic_avg_validate, _periodic_avg_sample, _periodic_avg_summary,
        ),
        ExperimentDef(
            "sobol-singular",
            "averages of an integrable power singularity converge to its "
            "integral once discrepancy times truncated variation shrinks",
            _sobol_validate, _sobol_sample, _sobol_summary,
        ),
        ExperimentDef(
            "bohr-average",
            "trigonometric truncations sandwich the Birkhoff average of a "
            "Bohr almost periodic series within the coefficient tail",
            _bohr_validate, _bohr_sample, _bohr_summary,
        ),
        ExperimentDef(
            "stepanov-average",
            "Birkhoff averages of a Stepanov function with power spikes on "
            "a Beatty set converge to its long-run mean",
            _stepanov_validate, _stepanov_sample, _stepanov_summary,
        ),
        ExperimentDef(
            "dio-scan",
            "orbit points of a typical seed stay n^-(1+eps) away from a "
            "uniformly discrete set at all late n",
            _dio_validate, _dio_sample, _dio_summary,
        ),
        ExperimentDef(
            "renyi-parry",
            "beta-transformation orbit statistics follow the invariant "
            "density rather than the Lebesgue average",
            _renyi_validate, whole_run=_renyi_run,
        ),
        ExperimentDef(
            "normality",
            "orbit digits of a typical seed are normal: block frequencies "
            "approach the uniform value",
            _normality_validate, _normality_sample, _normality_summary,
        ),
    ]
}


def run_experiment(cfg: dict, *, seed=None, threads=None,
                   budget_mb=None) -> RunResult:
    """Validate the config, run every sample, and build the summary.

    seed and threads override sampling.seed and run.threads; budget_mb
    caps orbit memory.  Rows come back in canonical (x_index, N) order.
    """
    exp_id = _expect_str(cfg, "experiment", required=True,
                         choices=set(EXPERIMENTS))
    exp = EXPERIMENTS[exp_id]
    if seed is not None:
        cfg = dict(cfg)
        cfg["sampling"] = dict(cfg.get("sampling", {}))
        cfg["sampling"]["seed"] = int(seed)
    params = exp.validate(cfg)
    if threads is None:
        threads = _expect_int(cfg, "run.threads", 1, minimum=1)
    if exp.whole_run is not None:
        rows, summary, passed = exp.whole_run(params, budget_mb, threads)
    else:
        def worker(i):
            return exp.sample(params, budget_mb, i)

        rows, records = _run_samples(worker, params["sampling"]["count"], threads)
        summary, passed = exp.summarize(params, records)
    summary = dict(summary)
    summary["experiment"] = exp_id
    summary["statement"] = exp.statement
    summary["passed"] = bool(passed)
    if "multiplier" in params:
        summary["alpha"] = params["multiplier"].spec_string()
    summary["count"] = params["sampling"]["count"]
    summary["seed"] = params["sampling"]["seed"]
    return RunResult(rows=rows, summary=summary, passed=bool(passed))

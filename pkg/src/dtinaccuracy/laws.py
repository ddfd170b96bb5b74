"""Numerical verifiers for bounds, identities and characterizations of H^w.

Each verifier evaluates both sides of a relation independently on one or more
truncation windows and returns a :class:`LawReport` holding the per-window
residuals.  Equalities pass when every |residual| is within tolerance; bounds
are oriented so that a residual >= 0 means the inequality holds, and pass
when every residual is >= -BOUND_SLACK.  A violated hypothesis (say, a GFR
that is not monotone on the probed range) yields ``inconclusive``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .distributions import (
    Distribution,
    ModelPair,
    MonotoneMap,
    TruncationWindow,
    density_trend,
    make_phrm,
    make_prhrm,
    prob_mass,
    transformed,
)
from .exceptions import DomainError, ParameterError
from .measures import (
    conditional_expectation,
    conditional_power_moment,
    gcm,
    gfr,
    inaccuracy_functional,
    interval_inaccuracy,
    length_biased_cdf,
    weighted_inaccuracy,
    weighted_interval_inaccuracy,
    weighted_log_moment,
    weighted_past_inaccuracy,
    weighted_residual_inaccuracy,
)
from .quadrature import QuadratureConfig, integrate

__all__ = [
    "LawReport",
    "EQ_TOL",
    "BOUND_SLACK",
    "window_grid",
    "check_bound_prop21",
    "check_bound_thm21",
    "check_bound_thm22",
    "check_past_bound",
    "thm22_upper_bound",
    "past_bound_expression",
    "past_bound_reduction",
    "characterization_residual",
    "uniqueness_probe",
    "transform_identity",
    "check_decomposition",
    "check_alternative_forms",
    "check_derivative_relations",
    "check_limits",
    "hw_partials",
]

EQ_TOL = 1e-6
BOUND_SLACK = 1e-8
#: tight settings for quantities that get differentiated numerically
FINE = QuadratureConfig(abs_tol=1e-13, rel_tol=1e-12)


@dataclass
class LawReport:
    law_id: str
    params: dict
    windows: list
    residuals: list
    tolerance: float
    verdict: str
    reason: str | None = None
    kind: str = "equality"
    extras: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    @property
    def max_abs_residual(self) -> float:
        return max((abs(r) for r in self.residuals), default=0.0)

    def to_dict(self) -> dict:
        return {
            "law_id": self.law_id,
            "params": self.params,
            "windows": [list(w) for w in self.windows],
            "residuals": list(self.residuals),
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "reason": self.reason,
        }


def _as_window(w):
    return w if isinstance(w, TruncationWindow) else TruncationWindow(*w)


def _map(fn, items, jobs=1):
    items = list(items)
    if jobs is None or jobs <= 1 or len(items) < 2:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def _equality(law_id, params, windows, residuals, errors, reason=None, **extras):
    tol = max(EQ_TOL, 10.0 * float(sum(errors)))
    ok = all(math.isfinite(r) and abs(r) <= tol for r in residuals)
    return LawReport(law_id, params, windows, residuals, tol, "pass" if ok else "fail", reason, "equality", extras)


def _bound(law_id, params, windows, residuals, reason=None, **extras):
    ok = all(math.isfinite(r) and r >= -BOUND_SLACK for r in residuals)
    return LawReport(
        law_id, params, windows, residuals, BOUND_SLACK, "pass" if ok else "fail", reason, "bound", extras
    )


def _inconclusive(law_id, params, windows, reason, kind="bound"):
    tol = BOUND_SLACK if kind == "bound" else EQ_TOL
    return LawReport(law_id, params, [tuple(w) for w in windows], [], tol, "inconclusive", reason, kind)


def _tuples(ws):
    return [(w.t1, w.t2) for w in ws]


def window_grid(dist: Distribution, n: int = 10, seed: int = 42, min_gap: float = 0.05, q_range=(0.02, 0.98)):
    """Reproducible windows from stratified (F(t1), F(t2)) quantile pairs of ``dist``."""
    rng = np.random.default_rng(seed)
    qlo, qhi = q_range
    if not qhi - qlo > min_gap:
        raise ParameterError("quantile range narrower than the minimum gap")
    out = []
    for i in range(n):
        q1 = qlo + (i + rng.uniform()) / n * (qhi - qlo - min_gap)
        q2 = rng.uniform(q1 + min_gap, qhi)
        out.append(TruncationWindow(float(dist.ppf(q1)), float(dist.ppf(q2))))
    return out


def _gap(dist, x, t, upper=True):
    """Vectorised G(t) - G(x) (upper=True) or G(x) - G(t), differenced in the accurate tail."""
    x = np.asarray(x, dtype=float)
    if dist.cdf(t) < 0.5:
        d = dist.cdf(t) - dist.cdf(x)
    else:
        d = dist.sf(x) - dist.sf(t)
    return d if upper else -d


def _trend(values) -> str | None:
    d = np.diff(np.asarray(values, dtype=float))
    scale = max(float(np.max(np.abs(values))), 1e-300)
    tol = 1e-12 * scale
    if np.all(np.abs(d) <= tol):
        return "constant"
    if np.all(d < tol) and np.any(d < -tol):
        return "decreasing" if np.all(d <= tol) else None
    if np.all(d > -tol):
        return "increasing"
    return None


# --------------------------------------------------------------------------
# bounds
# --------------------------------------------------------------------------


def check_bound_prop21(pair: ModelPair, grid: Sequence, cfg=None, jobs=1) -> LawReport:
    """-m ln h1^Y <= H^w <= -m ln h2^Y for decreasing g, reversed for increasing g."""
    grid = [_as_window(w) for w in grid]
    Y = pair.assigned
    params = {"pair": pair.to_spec()}
    trend = Y.pdf_trend
    if trend is None:
        lo = max(min(w.t1 for w in grid), Y.support[0])
        hi = min(max(w.t2 for w in grid), Y.support[1])
        trend = density_trend(Y, lo + 1e-9 * (hi - lo), hi - 1e-9 * (hi - lo))
    params["g_trend"] = trend
    if trend is None:
        return _inconclusive("prop21", params, _tuples(grid), "assigned density is not monotone on the probed range")

    def one(w):
        hw = weighted_interval_inaccuracy(pair, w, cfg=cfg).value
        m = gcm(pair.actual, w, cfg)
        h1, h2 = gfr(Y, w)
        a, b = -m * math.log(h1), -m * math.log(h2)
        lower, upper = (b, a) if trend == "increasing" else (a, b)
        return min(hw - lower, upper - hw)

    return _bound("prop21", params, _tuples(grid), _map(one, grid, jobs))


def _rhs_correction(pair, w, upper, cfg):
    """E[X ln(gap(x)/dG) | window] with gap = G(t2)-G(x) (upper) or G(x)-G(t1)."""
    Y = pair.assigned
    dG = prob_mass(Y, w.t1, w.t2)
    t = w.t2 if upper else w.t1

    def kernel(x):
        with np.errstate(divide="ignore"):
            return x * np.log(_gap(Y, x, t, upper=upper) / dG)

    return conditional_expectation(pair.actual, w, kernel, cfg)


def _probe(values_fn, lo, hi, n=200):
    xs = np.linspace(lo, hi, n)
    return _trend([values_fn(x) for x in xs])


def check_bound_thm21(pair: ModelPair, t2: float, t1_grid: Sequence[float], cfg=None, jobs=1) -> LawReport:
    """Lower bound (h1^Y decreasing in t1) or upper bound with correction (h1^Y increasing)."""
    t1s = [float(t) for t in t1_grid]
    Y = pair.assigned
    params = {"pair": pair.to_spec(), "t2": t2}
    windows = [TruncationWindow(t, t2) for t in t1s]
    lo, hi = min(t1s), max(t1s)
    if hi == lo:
        # a single point carries no trend: probe a short stretch towards t2
        hi = lo + 0.05 * (t2 - lo)
    trend = _probe(lambda s: gfr(Y, (s, t2))[0], lo, hi)
    params["h1_trend"] = trend
    if trend not in ("increasing", "decreasing", "constant"):
        return _inconclusive("thm21", params, _tuples(windows), "h1^Y is not monotone in t1 on the probed range")

    def one(w):
        hw = weighted_interval_inaccuracy(pair, w, cfg=cfg).value
        m = gcm(pair.actual, w, cfg)
        h1 = gfr(Y, w)[0]
        if trend == "decreasing":
            return hw + m * math.log(h1)
        corr = _rhs_correction(pair, w, True, cfg).value
        return (-m * math.log(h1) - corr) - hw

    params["part"] = "i" if trend == "decreasing" else "ii"
    return _bound("thm21", params, _tuples(windows), _map(one, windows, jobs))


def thm22_upper_bound(pair: ModelPair, w, cfg=None) -> float:
    """-m ln h2^Y - E[X ln((G(X)-G(t1))/(G(t2)-G(t1))) | window]."""
    w = _as_window(w)
    m = gcm(pair.actual, w, cfg)
    h2 = gfr(pair.assigned, w)[1]
    return -m * math.log(h2) - _rhs_correction(pair, w, False, cfg).value


def check_bound_thm22(pair: ModelPair, t1: float, t2_grid: Sequence[float], cfg=None, jobs=1) -> LawReport:
    """Upper bound when h2^Y decreases in t2; the lower bound -m ln h2^Y when it increases."""
    t2s = [float(t) for t in t2_grid]
    Y = pair.assigned
    params = {"pair": pair.to_spec(), "t1": t1}
    windows = [TruncationWindow(t1, t) for t in t2s]
    lo, hi = min(t2s), max(t2s)
    if hi == lo:
        lo = hi - 0.05 * (hi - t1)
    trend = _probe(lambda s: gfr(Y, (t1, s))[1], lo, hi)
    params["h2_trend"] = trend
    if trend not in ("increasing", "decreasing", "constant"):
        return _inconclusive("thm22", params, _tuples(windows), "h2^Y is not monotone in t2 on the probed range")

    def one(w):
        hw = weighted_interval_inaccuracy(pair, w, cfg=cfg).value
        if trend == "increasing":
            m = gcm(pair.actual, w, cfg)
            return hw + m * math.log(gfr(Y, w)[1])
        return thm22_upper_bound(pair, w, cfg) - hw

    params["branch"] = "lower" if trend == "increasing" else "upper"
    return _bound("thm22", params, _tuples(windows), _map(one, windows, jobs))


def past_bound_expression(pair: ModelPair, t: float, cfg=None) -> float:
    """-tau(t)[ln phi_G(t) + 1] + (G(t)/F(t)) int_0^t x f(x)/G(x) dx.

    tau is the past mean E(X | X < t) and phi_G the reversed hazard of Y.
    """
    X, Y = pair.actual, pair.assigned
    lo = X.support[0]
    Ft, Gt = X.cdf(t), Y.cdf(t)
    tau = integrate(lambda x: x * X._pdf(x), lo, t, cfg).value / Ft
    phi = Y.rev_hazard(t)
    ratio = integrate(lambda x: x * X._pdf(x) / Y._cdf(x), lo, t, cfg).value
    return -tau * (math.log(phi) + 1.0) + Gt / Ft * ratio


def past_bound_reduction(pair: ModelPair, t: float, cfg=None) -> float:
    """Two-sided upper bound at t1 = 0, written with past quantities only."""
    X, Y = pair.actual, pair.assigned
    lo = X.support[0]
    Ft, Gt = X.cdf(t), Y.cdf(t)
    tau = integrate(lambda x: x * X._pdf(x), lo, t, cfg).value / Ft
    corr = integrate(lambda x: x * X._pdf(x) * np.log(Y._cdf(x) / Gt), lo, t, cfg).value / Ft
    return -tau * math.log(Y.rev_hazard(t)) - corr


def check_past_bound(pair: ModelPair, t2_grid: Sequence[float], cfg=None, jobs=1) -> LawReport:
    """Past-inaccuracy upper bounds at t1 = lower support end.

    Residual per t is min(thm22_bound - past, past-mean bound - past), where the
    latter relaxes the log term with -ln u <= 1/u - 1.
    """
    X, Y = pair.actual, pair.assigned
    t2s = [float(t) for t in t2_grid]
    lo = min(X.support[0], Y.support[0])
    params = {"pair": pair.to_spec()}
    trend = _probe(lambda s: float(Y.rev_hazard(s)), min(t2s), max(t2s))
    params["rev_hazard_trend"] = trend
    windows = [(lo, t) for t in t2s]
    if trend not in ("decreasing", "constant"):
        return _inconclusive("thm22", params, windows, "reversed hazard of Y is not decreasing on the probed range")

    def one(t):
        past = weighted_past_inaccuracy(pair, t, cfg=cfg).value
        thm = thm22_upper_bound(pair, (lo, t), cfg)
        return min(thm - past, past_bound_expression(pair, t, cfg) - past)

    return _bound("thm22", params, windows, _map(one, t2s, jobs))


# --------------------------------------------------------------------------
# characterizations
# --------------------------------------------------------------------------

_FAMILY_MODEL = {"uniform": "PRHRM", "power": "PRHRM", "weibull": "PHRM", "pareto1": "PHRM", "pareto2": "PHRM"}
_FAMILY_ALIASES = {"exponential": "weibull", "rayleigh": "weibull"}
_FAMILY_PARAMS = {
    "uniform": ("alpha",),
    "power": ("c",),
    "weibull": ("lam", "p"),
    "pareto1": ("alpha", "beta"),
    "pareto2": ("mu", "beta", "alpha"),
}


def _region(family, p, w):
    """Raise ParameterError when a window leaves the characterization's parameter region."""
    t1, t2 = w.t1, w.t2
    if family == "uniform":
        if not p["alpha"] < t1:
            raise ParameterError(f"uniform characterization needs alpha < t1 (alpha={p['alpha']}, t1={t1})")
        if "beta" in p and not t2 < p["beta"]:
            raise ParameterError(f"uniform characterization needs t2 < beta (t2={t2}, beta={p['beta']})")
    elif family == "power":
        if not t1 > 0:
            raise ParameterError(f"power characterization needs 0 < t1, got {t1}")
        if "b" in p and not t2 < p["b"]:
            raise ParameterError(f"power characterization needs t2 < b (t2={t2}, b={p['b']})")
    elif family == "weibull":
        if not t1 > 0:
            raise ParameterError(f"Weibull characterization needs t1 > 0, got {t1}")
    elif family == "pareto1":
        if not p["beta"] < t1:
            raise ParameterError(f"Pareto-I characterization needs beta < t1 (beta={p['beta']}, t1={t1})")
    elif family == "pareto2":
        if not p["mu"] < t1:
            raise ParameterError(f"Pareto-II characterization needs mu < t1 (mu={p['mu']}, t1={t1})")


def _char_rhs(family, p, X, w, t, theta, cfg):
    m = gcm(X, w, cfg)
    if family == "uniform":
        a = p["alpha"]
        return (1.0 - theta) * (weighted_log_moment(X, w, a, cfg) - m * math.log(t - a))
    if family == "power":
        return (1.0 - p["c"] * theta) * (weighted_log_moment(X, w, 0.0, cfg) - m * math.log(t))
    if family == "weibull":
        lam, q = p["lam"], p["p"]
        return (1.0 - q) * (weighted_log_moment(X, w, 0.0, cfg) - m * math.log(t)) + lam * theta * (
            conditional_power_moment(X, w, q + 1.0, cfg) - t**q * m
        )
    if family == "pareto1":
        return (p["alpha"] * theta + 1.0) * (weighted_log_moment(X, w, 0.0, cfg) - m * math.log(t))
    if family == "pareto2":
        s = p["mu"] - p["beta"]
        return (p["alpha"] * theta + 1.0) * (weighted_log_moment(X, w, s, cfg) - m * math.log(t - s))
    raise ParameterError(f"unknown family {family!r}")


def characterization_residual(
    family: str,
    model: str,
    endpoint: str,
    X: Distribution,
    theta: float,
    grid: Sequence,
    params: dict | None = None,
    cfg=None,
    jobs=1,
) -> LawReport:
    """Residual of H^w + m ln h_i^Y = (family-specific right-hand side) on each window.

    ``X`` generates Y through ``model`` ("PHRM" or "PRHRM"); the right-hand side
    uses the family parameters in ``params`` (taken from ``X`` when omitted and X
    belongs to ``family``), so an out-of-family X with explicit params is a
    negative control.
    """
    family = _FAMILY_ALIASES.get(family, family)
    if family not in _FAMILY_MODEL:
        raise ParameterError(f"unknown family {family!r}; expected one of {sorted(_FAMILY_MODEL)}")
    model = model.upper()
    if model not in ("PHRM", "PRHRM"):
        raise ParameterError(f"model must be PHRM or PRHRM, got {model!r}")
    if endpoint not in ("h1", "h2"):
        raise ParameterError(f"endpoint must be 'h1' or 'h2', got {endpoint!r}")
    if params is None:
        if X.name != family:
            raise ParameterError(f"X is {X.name}, not {family}: pass the family parameters explicitly")
        params = dict(X.params)
    missing = [k for k in _FAMILY_PARAMS[family] if k not in params]
    if missing:
        raise ParameterError(f"{family} characterization needs parameters {missing}")
    grid = [_as_window(w) for w in grid]
    for w in grid:
        _region(family, params, w)
    Y = make_prhrm(X, theta) if model == "PRHRM" else make_phrm(X, theta)
    pair = ModelPair(X, Y)
    errs = []

    def one(w):
        mv = weighted_interval_inaccuracy(pair, w, cfg=cfg)
        errs.append(mv.error_estimate)
        h = gfr(Y, w)[0 if endpoint == "h1" else 1]
        t = w.t1 if endpoint == "h1" else w.t2
        lhs = mv.value + gcm(X, w, cfg) * math.log(h)
        return lhs - _char_rhs(family, params, X, w, t, theta, cfg)

    residuals = _map(one, grid, jobs)
    rep_params = {
        "family": family,
        "model": model,
        "endpoint": endpoint,
        "X": X.to_spec(),
        "theta": theta,
        "family_params": dict(params),
        "in_family_model": _FAMILY_MODEL[family] == model,
    }
    return _equality(f"{family}_{model.lower()}", rep_params, _tuples(grid), residuals, errs)


# --------------------------------------------------------------------------
# uniqueness probe
# --------------------------------------------------------------------------


def _five_point(fn, x, h):
    return (-fn(x + 2 * h) + 8 * fn(x + h) - 8 * fn(x - h) + fn(x - 2 * h)) / (12 * h)


def hw_partials(pair: ModelPair, w, rel_step=1e-3, cfg=FINE) -> tuple[float, float]:
    """Numerical (dH^w/dt1, dH^w/dt2) by five-point central differences."""
    w = _as_window(w)
    lower = max(pair.actual.support[0], pair.assigned.support[0])
    h = min(rel_step * (w.t2 - w.t1), 0.25 * (w.t1 - lower))
    d1 = _five_point(lambda s: weighted_interval_inaccuracy(pair, (s, w.t2), method="quadrature", cfg=cfg).value, w.t1, h)
    d2 = _five_point(lambda s: weighted_interval_inaccuracy(pair, (w.t1, s), method="quadrature", cfg=cfg).value, w.t2, h)
    return d1, d2


def _bracketed_root(fn, x_start):
    lo, hi = 1e-12, max(x_start, 1e-6)
    for _ in range(200):
        if fn(hi) > 0:
            break
        hi *= 2.0
    else:
        raise ArithmeticError("could not bracket the root")
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        if fn(mid) > 0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-12 * hi:
            break
    return 0.5 * (lo + hi)


def uniqueness_probe(pair: ModelPair, w, cfg=FINE) -> LawReport:
    """Recover h1^X and h2^X as the unique positive roots of eta and zeta.

    With local proportionality constants theta_i = h_i^Y / h_i^X the partial
    derivatives of H^w read

        dH^w/dt1 =  x [H^w + t1 ln theta_1 + t1 ln x - theta_1 m]   at x = h1^X
        dH^w/dt2 = -y [H^w + t2 ln theta_2 + t2 ln y - theta_2 m]   at y = h2^X

    so eta(x) = x[...] - dH^w/dt1 and zeta(y) = y[...] + dH^w/dt2 are convex
    (second derivative t_i / x) and negative near 0 whenever H^w increases in
    t1 and decreases in t2.  The numerically differentiated H^w is used on the
    derivative side; the roots are compared to direct GFR evaluation.
    """
    w = _as_window(w)
    X, Y = pair.actual, pair.assigned
    t1, t2 = w.t1, w.t2
    hx1, hx2 = gfr(X, w)
    hy1, hy2 = gfr(Y, w)
    th1, th2 = hy1 / hx1, hy2 / hx2
    hw = weighted_interval_inaccuracy(pair, w, method="quadrature", cfg=cfg).value
    m = gcm(X, w, cfg)
    d1, d2 = hw_partials(pair, w, cfg=cfg)
    params = {"pair": pair.to_spec(), "theta1": th1, "theta2": th2, "dHw_dt1": d1, "dHw_dt2": d2}
    if not (d1 > 0 and d2 < 0):
        return _inconclusive(
            "uniqueness", params, [(t1, t2)], "H^w is not increasing in t1 and decreasing in t2 at this window", "equality"
        )

    def eta(x):
        return x * (hw + t1 * math.log(th1) + t1 * math.log(x) - th1 * m) - d1

    def zeta(y):
        return y * (hw + t2 * math.log(th2) + t2 * math.log(y) - th2 * m) + d2

    problems = []
    residuals = []
    for name, fn, target in (("eta", eta, hx1), ("zeta", zeta, hx2)):
        if not fn(1e-12) < 0:
            problems.append(f"{name} not negative near 0")
        xs = np.linspace(0.02, 3.0, 52) * target
        vals = np.array([fn(x) for x in xs])
        dx = xs[1] - xs[0]
        second = (vals[2:] - 2 * vals[1:-1] + vals[:-2]) / dx**2
        if not np.all(second > 0):
            problems.append(f"{name} not convex")
        root = _bracketed_root(fn, target)
        residuals.append((root - target) / target)
    params["roots_target"] = [hx1, hx2]
    rep = _equality("uniqueness", params, [(t1, t2), (t1, t2)], residuals, [], reason="; ".join(problems) or None)
    rep.tolerance = 1e-4
    ok = not problems and all(abs(r) <= 1e-4 for r in residuals)
    rep.verdict = "pass" if ok else "fail"
    return rep


# --------------------------------------------------------------------------
# monotone transformations
# --------------------------------------------------------------------------


def transform_identity(pair: ModelPair, phi: MonotoneMap, w, cfg=None) -> LawReport:
    """H^w of (phi(X), phi(Y)) on (t1, t2) against the phi-weighted measure on the preimage.

    For an affine phi the composite scaling/shift formulas are checked too.
    """
    w = _as_window(w)
    X, Y = pair.actual, pair.assigned
    a, b = float(phi.inverse(w.t1)), float(phi.inverse(w.t2))
    if not phi.increasing:
        a, b = b, a
    pre = TruncationWindow(a, b)
    lo, hi = max(a, X.support[0]), min(b, X.support[1])
    xs = np.linspace(lo, hi, 202)[1:-1]
    d = np.asarray(phi.derivative(xs), dtype=float)
    if not (np.all(d > 0) if phi.increasing else np.all(d < 0)):
        raise ParameterError(f"{phi.name} is not strictly {'increasing' if phi.increasing else 'decreasing'} on the preimage window")

    tpair = ModelPair(transformed(X, phi), transformed(Y, phi))
    lhs = weighted_interval_inaccuracy(tpair, w, method="quadrature", cfg=cfg)
    hphi = inaccuracy_functional(pair, pre, phi.fn, cfg)
    jac = conditional_expectation(X, pre, lambda x: phi(x) * np.log(np.abs(phi.derivative(x))), cfg)
    residuals = [lhs.value - (hphi.value + jac.value)]
    errors = [lhs.error_estimate, hphi.error_estimate, jac.error_estimate]
    windows = [(w.t1, w.t2)]
    if phi.name == "affine":
        sa, sb = phi.params["a"], phi.params["b"]
        if sa > 0 and 0 <= sb < w.t1:
            u1, u2 = (w.t1 - sb) / sa, (w.t2 - sb) / sa
            hw = weighted_interval_inaccuracy(pair, (u1, u2), cfg=cfg)
            h = interval_inaccuracy(pair, (u1, u2), cfg=cfg)
            m = gcm(X, (u1, u2), cfg)
            scaled_hw = sa * hw.value + m * sa * math.log(sa)
            scaled_h = h.value + math.log(sa)
            residuals.append(lhs.value - (scaled_hw + sb * scaled_h))
            errors += [hw.error_estimate, h.error_estimate]
            windows.append((w.t1, w.t2))
    params = {"pair": pair.to_spec(), "phi": phi.to_spec(), "preimage": [a, b]}
    return _equality("transform", params, windows, residuals, errors)


# --------------------------------------------------------------------------
# decomposition, alternative forms, derivative relations, limits
# --------------------------------------------------------------------------


def _decomposition_rhs(pair, t1, t2, cfg):
    X, Y = pair.actual, pair.assigned
    EX = X.mean()
    F1, sF2 = X.cdf(t1), X.sf(t2)
    past = weighted_past_inaccuracy(pair, t1, cfg=cfg)
    resid = weighted_residual_inaccuracy(pair, t2, cfg=cfg)
    Fs1, Fs2 = length_biased_cdf(X, t1, cfg), length_biased_cdf(X, t2, cfg)
    total = F1 * past.value + sF2 * resid.value
    total -= EX * (Fs1 * math.log(Y.cdf(t1)) + (1.0 - Fs2) * math.log(Y.sf(t2)))
    errs = [past.error_estimate, resid.error_estimate]
    if t2 > t1:
        mid = weighted_interval_inaccuracy(pair, (t1, t2), cfg=cfg)
        total += prob_mass(X, t1, t2) * mid.value
        total -= EX * (Fs2 - Fs1) * math.log(prob_mass(Y, t1, t2))
        errs.append(mid.error_estimate)
    return total, errs


def check_decomposition(pair: ModelPair, t1: float, t2: float, cfg=None) -> LawReport:
    """Global H^w against past + interval + residual parts and the trivalent term.

    Also evaluates the two-term split at t = t1 and at t = t2.
    """
    X = pair.actual
    if not math.isfinite(X.mean()):
        raise DomainError(f"{X!r} has infinite mean")
    if not 0 < t1 <= t2:
        raise ParameterError(f"decomposition needs 0 < t1 <= t2, got ({t1}, {t2})")
    glob = weighted_inaccuracy(pair, cfg=cfg)
    residuals, errs, windows = [], [glob.error_estimate], []
    cuts = [(t1, t2), (t1, t1), (t2, t2)] if t2 > t1 else [(t1, t1)]
    for a, b in cuts:
        rhs, e = _decomposition_rhs(pair, a, b, cfg)
        residuals.append(glob.value - rhs)
        errs += e
        windows.append((a, b))
    return _equality("decomposition", {"pair": pair.to_spec(), "t1": t1, "t2": t2}, windows, residuals, errs)


def _outer(fn, a, b, cfg):
    """int_a^b fn(s) ds for a scalar-valued fn, evaluated node by node."""
    return integrate(lambda s: np.array([fn(float(v)) for v in s]), a, b, cfg)


def check_alternative_forms(pair: ModelPair, grid: Sequence, cfg=None, jobs=1) -> LawReport:
    """H^w(t1,t2) = t1 H(t1,t2) + int_{t1}^{t2} H(x,t2) dx  and  = t2 H(t1,t2) - int_{t1}^{t2} H(t1,y) dy.

    The inner H is the interval inaccuracy of the sub-window; the last 1e-9
    of the window length, where the sub-window degenerates, is integrated with
    the small-window expansion H(s, s + e) = ln e.
    """
    grid = [_as_window(w) for w in grid]
    outer_cfg = QuadratureConfig(abs_tol=1e-9, rel_tol=1e-9)
    errs = []

    def one(w):
        t1, t2 = w.t1, w.t2
        d = 1e-9 * (t2 - t1)
        tail = d * math.log(d) - d
        hw = weighted_interval_inaccuracy(pair, w, method="quadrature", cfg=cfg)
        h = interval_inaccuracy(pair, w, method="quadrature", cfg=cfg).value
        up = _outer(lambda x: interval_inaccuracy(pair, (x, t2), method="quadrature", cfg=cfg).value, t1, t2 - d, outer_cfg)
        down = _outer(lambda y: interval_inaccuracy(pair, (t1, y), method="quadrature", cfg=cfg).value, t1 + d, t2, outer_cfg)
        errs.extend([hw.error_estimate, up.error_estimate, down.error_estimate])
        r1 = hw.value - (t1 * h + up.value + tail)
        r2 = hw.value - (t2 * h - (down.value + tail))
        return r1, r2

    pairs = _map(one, grid, jobs)
    residuals = [r for rr in pairs for r in rr]
    windows = [(w.t1, w.t2) for w in grid for _ in range(2)]
    rep = _equality("altforms", {"pair": pair.to_spec()}, windows, residuals, [])
    return rep


def check_derivative_relations(pair: ModelPair, grid: Sequence, step=1e-5, jobs=1) -> LawReport:
    """dH^w/dt_i = t_i dH/dt_i, both sides by central differences; residuals are relative."""
    grid = [_as_window(w) for w in grid]

    def hw(a, b):
        return weighted_interval_inaccuracy(pair, (a, b), method="quadrature", cfg=FINE).value

    def h(a, b):
        return interval_inaccuracy(pair, (a, b), method="quadrature", cfg=FINE).value

    def one(w):
        t1, t2 = w.t1, w.t2
        out = []
        for i, t in ((1, t1), (2, t2)):
            shift = (lambda s: (s, t2)) if i == 1 else (lambda s: (t1, s))
            lhs = (hw(*shift(t + step)) - hw(*shift(t - step))) / (2 * step)
            rhs = t * (h(*shift(t + step)) - h(*shift(t - step))) / (2 * step)
            out.append((lhs - rhs) / max(abs(rhs), abs(lhs), 1e-300))
        return out

    pairs = _map(one, grid, jobs)
    residuals = [r for rr in pairs for r in rr]
    windows = [(w.t1, w.t2) for w in grid for _ in range(2)]
    rep = _equality("derivatives", {"pair": pair.to_spec(), "step": step}, windows, residuals, [])
    rep.tolerance = 1e-4
    rep.verdict = "pass" if all(abs(r) <= 1e-4 for r in residuals) else "fail"
    return rep


def _far_ends(pair, eps):
    X, Y = pair.actual, pair.assigned
    lo = min(X.support[0], Y.support[0])
    hi = max(X.support[1], Y.support[1])
    if math.isfinite(hi):
        span = hi - lo
        return lo + eps * span, hi - eps * span
    tail = max(float(X.isf(1e-20)), float(Y.isf(1e-20)))
    return lo + eps * max(1.0, abs(lo)), tail


def check_limits(pair: ModelPair, ts: Sequence[float], eps=1e-12, cfg=None, jobs=1) -> LawReport:
    """Interval measure on (lo+e, t), (t, hi-e), (lo+e, hi-e) against past, residual and global measures."""
    a, b = _far_ends(pair, eps)
    glob = weighted_inaccuracy(pair, cfg=cfg)
    full = weighted_interval_inaccuracy(pair, (a, b), cfg=cfg)
    residuals = [full.value - glob.value]
    windows = [(a, b)]
    errs = [glob.error_estimate, full.error_estimate]

    def one(t):
        p_int = weighted_interval_inaccuracy(pair, (a, t), cfg=cfg)
        p_lim = weighted_past_inaccuracy(pair, t, cfg=cfg)
        r_int = weighted_interval_inaccuracy(pair, (t, b), cfg=cfg)
        r_lim = weighted_residual_inaccuracy(pair, t, cfg=cfg)
        e = [p_int.error_estimate, p_lim.error_estimate, r_int.error_estimate, r_lim.error_estimate]
        return p_int.value - p_lim.value, r_int.value - r_lim.value, e

    for t, (rp, rr, e) in zip(ts, _map(one, ts, jobs)):
        residuals += [rp, rr]
        windows += [(a, t), (t, b)]
        errs += e
    rep = _equality("limits", {"pair": pair.to_spec(), "eps": eps}, windows, residuals, errs)
    tol = max(1e-7, 10.0 * sum(errs))
    rep.tolerance = tol
    rep.verdict = "pass" if all(abs(r) <= tol for r in residuals) else "fail"
    return rep

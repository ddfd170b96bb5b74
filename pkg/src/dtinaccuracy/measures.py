"""Inaccuracy and entropy functionals of (doubly) truncated lifetime pairs.

The central object is the weighted interval inaccuracy

    H^w(t1, t2) = -int_{t1}^{t2} x f(x)/[F(t2)-F(t1)] ln( g(x)/[G(t2)-G(t1)] ) dx

for an actual law X (f, F) and an assigned law Y (g, G).  Residual, past and
global measures are the one-sided / untruncated limits, and the unweighted
versions drop the factor x.  Values come from a closed-form table when one
is registered for the (family, family, functional) triple and from adaptive
quadrature otherwise; :func:`mc_estimate` is an independent sampling oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .distributions import Distribution, ModelPair, TruncationWindow, prob_mass
from .exceptions import DivergenceError, DomainError, ParameterError
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, integrate

__all__ = [
    "MeasureValue",
    "interval_inaccuracy",
    "weighted_interval_inaccuracy",
    "weighted_residual_inaccuracy",
    "weighted_past_inaccuracy",
    "weighted_inaccuracy",
    "inaccuracy_functional",
    "discrete_inaccuracy",
    "gfr",
    "gcm",
    "conditional_expectation",
    "weighted_log_moment",
    "geometric_vitality",
    "conditional_power_moment",
    "length_biased_cdf",
    "cdf_from_gfr",
    "mc_estimate",
    "MC_FUNCTIONALS",
    "MIN_WIDTH",
]

#: windows narrower than this are rejected instead of extrapolated
MIN_WIDTH = 1e-10
#: G-mass / F-mass ratio below which the log term is reported as divergent
UNDERFLOW_RATIO = 1e-300


@dataclass(frozen=True)
class MeasureValue:
    value: float
    method: str
    error_estimate: float = 0.0
    window: TruncationWindow | None = None
    converged: bool = True

    def __float__(self):
        return float(self.value)


def _as_window(w) -> TruncationWindow:
    return w if isinstance(w, TruncationWindow) else TruncationWindow(*w)


def _clip(dist: Distribution, t1: float, t2: float) -> tuple[float, float]:
    lo, hi = dist.support
    return max(t1, lo), min(t2, hi)


def _mass(dist, w, what="X"):
    if w.t2 - w.t1 < MIN_WIDTH:
        raise DomainError(f"degenerate window ({w.t1}, {w.t2}): width below {MIN_WIDTH}")
    m = prob_mass(dist, w.t1, w.t2)
    if not m > 0:
        raise DomainError(f"window ({w.t1}, {w.t2}) carries no {what}-mass: not in D")
    return m


def _pair_masses(pair: ModelPair, w: TruncationWindow) -> tuple[float, float]:
    dF = _mass(pair.actual, w, "X")
    dG = _mass(pair.assigned, w, "Y")
    a, b = _clip(pair.actual, w.t1, w.t2)
    lo, hi = pair.assigned.support
    if a < lo or b > hi:
        raise DivergenceError(
            f"assigned density vanishes on part of ({a}, {b}) where the actual density is positive"
        )
    if dG / dF < UNDERFLOW_RATIO:
        raise DivergenceError("G-mass of the window underflows relative to its F-mass")
    return dF, dG


def _density_limit(dist: Distribution, x: float) -> float:
    """f(x), using the one-sided limit when x sits on a finite support endpoint."""
    lo, hi = dist.support
    if lo < x < hi:
        return float(dist.pdf(x))
    if x == lo or x == hi:
        with np.errstate(all="ignore"):
            v = float(np.asarray(dist._pdf(np.array([x], dtype=float)))[0])
        return v if math.isfinite(v) else math.inf
    return 0.0


# --------------------------------------------------------------------------
# closed forms (regression anchors); each returns None when not applicable
# --------------------------------------------------------------------------


def _gcm_closed(dist, a, b):
    if dist.name == "uniform":
        return 0.5 * (a + b)
    if dist.name == "triangular_up":
        return 2.0 * (a * a + a * b + b * b) / (3.0 * (a + b))
    return None


def _uniform_assigned(weighted):
    # g/(G(t2)-G(t1)) is the reciprocal of the window length inside Y's support
    def closed(pair, w):
        a, b = _clip(pair.actual, w.t1, w.t2)
        ya, yb = _clip(pair.assigned, w.t1, w.t2)
        if a < ya or b > yb:
            return None
        log_len = math.log(yb - ya)
        if not weighted:
            return log_len
        m = _gcm_closed(pair.actual, a, b)
        return None if m is None else m * log_len

    return closed


def _triangular(weighted, up_first):
    def closed(pair, w):
        b = pair.actual.b
        if pair.assigned.b != b or w.t1 > 0 or w.t2 < b:
            return None
        lr = math.log(b / 2.0)
        if not weighted:
            return lr + 1.5
        if up_first:
            return b * (2.0 * lr / 3.0 + 11.0 / 9.0)
        return b * (lr / 3.0 + 5.0 / 18.0)

    return closed


_CLOSED_FORMS: dict[tuple[str, str, bool], Callable] = {
    ("triangular_up", "triangular_down", True): _triangular(True, True),
    ("triangular_up", "triangular_down", False): _triangular(False, True),
    ("triangular_down", "triangular_up", True): _triangular(True, False),
    ("triangular_down", "triangular_up", False): _triangular(False, False),
    ("uniform", "uniform", True): _uniform_assigned(True),
    ("uniform", "uniform", False): _uniform_assigned(False),
    ("triangular_up", "uniform", True): _uniform_assigned(True),
    ("triangular_up", "uniform", False): _uniform_assigned(False),
}


# --------------------------------------------------------------------------
# interval functionals
# --------------------------------------------------------------------------


def inaccuracy_functional(
    pair: ModelPair,
    w,
    weight: Callable | None = None,
    cfg: QuadratureConfig | None = None,
) -> MeasureValue:
    """-int phi(x) f/dF ln(g/dG) over the window by quadrature; ``weight=None`` means phi = 1.

    The general phi-weighted form is what the monotone-transformation identity
    is stated in terms of; the named measures below are thin wrappers.
    """
    w = _as_window(w)
    X, Y = pair.actual, pair.assigned
    dF, dG = _pair_masses(pair, w)
    a, b = _clip(X, w.t1, w.t2)
    log_dG = math.log(dG)

    def integrand(x):
        fx = X._pdf(x)
        with np.errstate(invalid="ignore"):
            val = fx * (Y._logpdf(x) - log_dG)
        val = np.where(fx > 0, val, 0.0)
        return val if weight is None else weight(x) * val

    res = integrate(integrand, a, b, cfg or DEFAULT_CONFIG, points=(w.t1, w.t2))
    return MeasureValue(-res.value / dF, "quadrature", res.error_estimate / dF, w, res.converged)


def _measure(pair, w, weighted, method, cfg):
    w = _as_window(w)
    if method not in ("auto", "closed_form", "quadrature"):
        raise ParameterError(f"unknown method {method!r}")
    if method != "quadrature":
        _pair_masses(pair, w)
        closed = _CLOSED_FORMS.get((pair.actual.name, pair.assigned.name, weighted))
        value = closed(pair, w) if closed else None
        if value is not None:
            return MeasureValue(value, "closed_form", 0.0, w)
        if method == "closed_form":
            raise ParameterError(
                f"no closed form registered for ({pair.actual.name}, {pair.assigned.name}) on this window"
            )
    return inaccuracy_functional(pair, w, (lambda x: x) if weighted else None, cfg)


def interval_inaccuracy(pair: ModelPair, w, *, method="auto", cfg=None) -> MeasureValue:
    """Interval inaccuracy H(t1, t2) of the doubly truncated pair; X = Y gives the interval entropy."""
    return _measure(pair, w, False, method, cfg)


def weighted_interval_inaccuracy(pair: ModelPair, w, *, method="auto", cfg=None) -> MeasureValue:
    """Weighted interval inaccuracy H^w(t1, t2)."""
    return _measure(pair, w, True, method, cfg)


def _upper_end(pair):
    return max(pair.actual.support[1], pair.assigned.support[1])


def _lower_end(pair):
    return min(pair.actual.support[0], pair.assigned.support[0])


def weighted_residual_inaccuracy(pair: ModelPair, t: float, *, method="auto", cfg=None) -> MeasureValue:
    """H^w(t) = H^w(t, inf): both laws conditioned on exceeding t."""
    if not (pair.actual.sf(t) > 0 and pair.assigned.sf(t) > 0):
        raise DomainError(f"t={t} is beyond the support: survival probability is zero")
    return weighted_interval_inaccuracy(pair, (t, _upper_end(pair)), method=method, cfg=cfg)


def weighted_past_inaccuracy(pair: ModelPair, t: float, *, method="auto", cfg=None) -> MeasureValue:
    """Past version: both laws conditioned on not exceeding t."""
    if not (pair.actual.cdf(t) > 0 and pair.assigned.cdf(t) > 0):
        raise DomainError(f"t={t} is at or below the support lower end")
    return weighted_interval_inaccuracy(pair, (_lower_end(pair), t), method=method, cfg=cfg)


def weighted_inaccuracy(pair: ModelPair, *, weighted=True, method="auto", cfg=None) -> MeasureValue:
    """Global (untruncated) inaccuracy; ``weighted=False`` gives the Kerridge/Nath measure.

    With ``assigned`` equal to ``actual`` these are the weighted and the
    ordinary differential entropy.
    """
    w = TruncationWindow(_lower_end(pair), _upper_end(pair))
    mv = _measure(pair, w, weighted, method, cfg)
    if not mv.converged:
        return MeasureValue(mv.value, mv.method, mv.error_estimate, w, False)
    return mv


def discrete_inaccuracy(p, q) -> float:
    """Kerridge inaccuracy -sum p_i ln q_i of two probability vectors."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape or p.ndim != 1:
        raise ParameterError("p and q must be 1-D vectors of the same length")
    for name, v in (("p", p), ("q", q)):
        if np.any(v < 0) or abs(v.sum() - 1.0) > 1e-9:
            raise ParameterError(f"{name} is not a probability vector")
    if np.any((q == 0) & (p > 0)):
        raise DivergenceError("q_i = 0 where p_i > 0")
    m = p > 0
    return float(-np.sum(p[m] * np.log(q[m])))


# --------------------------------------------------------------------------
# reliability functionals of a single law
# --------------------------------------------------------------------------


def gfr(dist: Distribution, w) -> tuple[float, float]:
    """General failure rates (h1, h2) = (f(t1), f(t2)) / (F(t2) - F(t1))."""
    w = _as_window(w)
    dF = prob_mass(dist, w.t1, w.t2)
    if not dF > 0:
        raise DomainError(f"F(t2) - F(t1) = 0 on ({w.t1}, {w.t2})")
    return _density_limit(dist, w.t1) / dF, _density_limit(dist, w.t2) / dF


def conditional_expectation(dist: Distribution, w, kernel: Callable, cfg=None) -> MeasureValue:
    """E[kernel(X) | t1 < X < t2] by quadrature."""
    w = _as_window(w)
    dF = _mass(dist, w)
    a, b = _clip(dist, w.t1, w.t2)

    def integrand(x):
        fx = dist._pdf(x)
        with np.errstate(invalid="ignore"):
            val = kernel(x) * fx
        return np.where(fx > 0, val, 0.0)

    res = integrate(integrand, a, b, cfg or DEFAULT_CONFIG, points=(w.t1, w.t2))
    return MeasureValue(res.value / dF, "quadrature", res.error_estimate / dF, w, res.converged)


def gcm(dist: Distribution, w, cfg=None) -> float:
    """General conditional mean m(t1, t2) = E(X | t1 < X < t2)."""
    w = _as_window(w)
    _mass(dist, w)
    a, b = _clip(dist, w.t1, w.t2)
    closed = _gcm_closed(dist, a, b)
    if closed is not None:
        return closed
    return conditional_expectation(dist, w, lambda x: x, cfg).value


def weighted_log_moment(dist: Distribution, w, shift: float = 0.0, cfg=None) -> float:
    """E[X ln(X - shift) | t1 < X < t2]; ``shift=0`` is the weighted geometric vitality."""
    w = _as_window(w)
    if not w.t1 >= shift:
        raise DomainError(f"t1={w.t1} must exceed shift={shift}")
    return conditional_expectation(dist, w, lambda x: x * np.log(x - shift), cfg).value


def geometric_vitality(dist: Distribution, w, cfg=None) -> float:
    """E(ln X | t1 < X < t2)."""
    w = _as_window(w)
    if not w.t1 >= 0:
        raise DomainError(f"geometric vitality needs t1 >= 0, got {w.t1}")
    return conditional_expectation(dist, w, np.log, cfg).value


def conditional_power_moment(dist: Distribution, w, exponent: float, cfg=None) -> float:
    """E(X^exponent | t1 < X < t2)."""
    return conditional_expectation(dist, w, lambda x: x**exponent, cfg).value


def length_biased_cdf(dist: Distribution, t: float, cfg=None) -> float:
    """F*(t) = E[X; X <= t] / E(X)."""
    mean = dist.mean()
    if not math.isfinite(mean):
        raise DomainError(f"{dist!r} has infinite mean")
    if not mean > 0:
        raise DomainError(f"{dist!r} has non-positive mean")
    lo, hi = dist.support
    if t <= lo:
        return 0.0
    if t >= hi:
        return 1.0
    cfg = cfg or DEFAULT_CONFIG
    xf = lambda x: x * dist._pdf(x)  # noqa: E731
    if dist.cdf(t) <= 0.5:
        return integrate(xf, lo, t, cfg).value / mean
    return 1.0 - integrate(xf, t, hi, cfg).value / mean


def cdf_from_gfr(gfr_fn: Callable, w, x, endpoint: str = "h1", cfg=None) -> np.ndarray:
    """Conditional CDF P(X <= x | t1 < X < t2) rebuilt from GFR functions alone.

    ``gfr_fn(s1, s2)`` returns (h1, h2) for the sub-window (s1, s2).  Since
    d/ds ln[F(t2) - F(s)] = -h1(s, t2) and d/ds ln[F(s) - F(t1)] = h2(t1, s),

        P(X <= x | window) = 1 - exp(-int_{t1}^{x} h1(s, t2) ds)
                           = exp(-int_{x}^{t2} h2(t1, s) ds).
    """
    w = _as_window(w)
    if endpoint not in ("h1", "h2"):
        raise ParameterError(f"endpoint must be 'h1' or 'h2', got {endpoint!r}")
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any((xs < w.t1) | (xs > w.t2)):
        raise DomainError("reconstruction points must lie inside the window")
    cfg = cfg or DEFAULT_CONFIG
    out = np.empty_like(xs)
    for i, xi in enumerate(xs):
        if endpoint == "h1":
            if xi in (w.t1, w.t2):
                out[i] = 0.0 if xi == w.t1 else 1.0
                continue
            h = lambda s: np.array([gfr_fn(float(v), w.t2)[0] for v in s])  # noqa: E731
            out[i] = -math.expm1(-integrate(h, w.t1, xi, cfg).value)
        else:
            if xi in (w.t1, w.t2):
                out[i] = 0.0 if xi == w.t1 else 1.0
                continue
            h = lambda s: np.array([gfr_fn(w.t1, float(v))[1] for v in s])  # noqa: E731
            out[i] = math.exp(-integrate(h, xi, w.t2, cfg).value)
    return out if np.ndim(x) else float(out[0])


# --------------------------------------------------------------------------
# Monte Carlo oracle
# --------------------------------------------------------------------------


def _sample_window(dist: Distribution, w: TruncationWindow, n: int, rng) -> np.ndarray:
    """Inverse-transform draws of X conditioned on the window."""
    a, b = _clip(dist, w.t1, w.t2)
    if dist.cdf(a) < 0.5:
        u = rng.uniform(dist.cdf(a), dist.cdf(b), n)
        x = dist.ppf(u)
    else:
        v = rng.uniform(dist.sf(b), dist.sf(a), n)
        x = dist.isf(v)
    return np.clip(x, np.nextafter(a, math.inf), np.nextafter(b, -math.inf))


MC_FUNCTIONALS = (
    "interval_inaccuracy",
    "weighted_interval_inaccuracy",
    "gcm",
    "geometric_vitality",
    "weighted_log_moment",
    "conditional_power_moment",
)


def mc_estimate(
    pair: ModelPair,
    w,
    functional: str,
    n: int = 1_000_000,
    seed: int = 0,
    *,
    shift: float = 0.0,
    exponent: float = 2.0,
) -> MeasureValue:
    """Sample mean of the functional's kernel under X | window, with its standard error.

    Residual, past and global measures are obtained by passing the
    corresponding one-sided or full window.
    """
    w = _as_window(w)
    if functional not in MC_FUNCTIONALS:
        raise ParameterError(f"unknown functional {functional!r}; expected one of {MC_FUNCTIONALS}")
    if n < 100:
        raise ParameterError("Monte Carlo needs n >= 100")
    X, Y = pair.actual, pair.assigned
    if functional in ("interval_inaccuracy", "weighted_interval_inaccuracy"):
        _, dG = _pair_masses(pair, w)
    else:
        _mass(X, w)
    rng = np.random.default_rng(seed)
    x = _sample_window(X, w, n, rng)
    if functional == "interval_inaccuracy":
        k = -(Y._logpdf(x) - math.log(dG))
    elif functional == "weighted_interval_inaccuracy":
        k = -x * (Y._logpdf(x) - math.log(dG))
    elif functional == "gcm":
        k = x
    elif functional == "geometric_vitality":
        k = np.log(x)
    elif functional == "weighted_log_moment":
        k = x * np.log(x - shift)
    else:
        k = x**exponent
    return MeasureValue(float(k.mean()), "monte_carlo", float(k.std(ddof=1) / math.sqrt(n)), w)

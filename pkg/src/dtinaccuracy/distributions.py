"""Continuous lifetime laws, proportional (reversed) hazard models and truncation windows.

Every distribution is an immutable value exposing vectorised ``pdf``, ``cdf``,
``sf``, ``log_pdf``, ``pdf_derivative``, ``ppf`` and ``isf``.  Concrete
families implement the underscored kernels on the open support only; the
public methods take care of masking, clipping and scalar/array round-tripping.

Catalog families are addressable by name through :func:`make_distribution`::

    >>> d = make_distribution({"family": "weibull", "params": {"lam": 1.0, "p": 2.0}})
    >>> round(d.sf(1.0), 6)
    0.367879
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np
from scipy.special import gamma as gamma_fn

from .exceptions import DomainError, ParameterError

__all__ = [
    "Distribution",
    "Uniform",
    "TriangularUp",
    "TriangularDown",
    "Power",
    "Weibull",
    "Pareto1",
    "Pareto2",
    "Pareto3",
    "Pareto4",
    "Burr12",
    "ProportionalHazards",
    "ProportionalReversedHazards",
    "Transformed",
    "MonotoneMap",
    "ModelPair",
    "TruncationWindow",
    "WindowReport",
    "CATALOG",
    "exponential",
    "rayleigh",
    "make_phrm",
    "make_prhrm",
    "make_distribution",
    "transformed",
    "evaluate",
    "prob_mass",
    "validate_window",
    "density_trend",
]

SELECTORS = ("pdf", "cdf", "sf", "log_pdf", "hazard", "rev_hazard")


def _positive(**kw):
    for k, v in kw.items():
        if not (np.isfinite(v) and v > 0):
            raise ParameterError(f"{k} must be a finite positive number, got {v!r}")


def _out(x_in, arr):
    return float(arr) if np.ndim(x_in) == 0 else arr


class Distribution:
    """Base class; subclasses are frozen dataclasses holding their parameters."""

    name = "distribution"
    #: monotonicity of the density on its support, when known analytically
    pdf_trend: str | None = None

    # -- kernels, evaluated on the open support only ------------------------
    def _pdf(self, x):
        raise NotImplementedError

    def _cdf(self, x):
        raise NotImplementedError

    def _sf(self, x):
        return 1.0 - self._cdf(x)

    def _logpdf(self, x):
        with np.errstate(divide="ignore"):
            return np.log(self._pdf(x))

    def _logsf(self, x):
        with np.errstate(divide="ignore"):
            return np.log(self._sf(x))

    def _logcdf(self, x):
        with np.errstate(divide="ignore"):
            return np.log(self._cdf(x))

    # analytic derivative of the density, or None when unavailable
    _dpdf = None

    def _ppf(self, u):
        return _bisect_inverse(self._cdf, u, self.support)

    def _isf(self, v):
        return self._ppf(1.0 - v)

    # -- public surface -----------------------------------------------------
    @property
    def support(self) -> tuple[float, float]:
        raise NotImplementedError

    @property
    def params(self) -> dict:
        return {}

    def to_spec(self) -> dict:
        return {"family": self.name, "params": dict(self.params)}

    def _interior(self, x):
        lo, hi = self.support
        return (x > lo) & (x < hi)

    def pdf(self, x):
        xa = np.asarray(x, dtype=float)
        out = np.zeros(xa.shape)
        m = self._interior(xa)
        if np.any(m):
            out[m] = self._pdf(xa[m])
        return _out(x, out)

    def cdf(self, x):
        xa = np.asarray(x, dtype=float)
        lo, hi = self.support
        out = np.where(xa >= hi, 1.0, 0.0)
        m = self._interior(xa)
        if np.any(m):
            out[m] = np.clip(self._cdf(xa[m]), 0.0, 1.0)
        return _out(x, out)

    def sf(self, x):
        xa = np.asarray(x, dtype=float)
        lo, hi = self.support
        out = np.where(xa <= lo, 1.0, 0.0)
        m = self._interior(xa)
        if np.any(m):
            out[m] = np.clip(self._sf(xa[m]), 0.0, 1.0)
        return _out(x, out)

    def log_pdf(self, x):
        xa = np.asarray(x, dtype=float)
        if not np.all(self._interior(xa)):
            bad = xa[~self._interior(xa)].ravel()[0]
            raise DomainError(f"{self.name}: log_pdf undefined outside the open support, x={bad!r}")
        return _out(x, np.asarray(self._logpdf(xa), dtype=float))

    def pdf_derivative(self, x):
        """Analytic f'(x) when the family provides one, else a central difference."""
        xa = np.asarray(x, dtype=float)
        if self._dpdf is not None:
            out = np.zeros(xa.shape)
            m = self._interior(xa)
            if np.any(m):
                out[m] = self._dpdf(xa[m])
            return _out(x, out)
        h = 1e-6 * np.maximum(1.0, np.abs(xa))
        return _out(x, (self.pdf(xa + h) - self.pdf(xa - h)) / (2 * h))

    @property
    def has_analytic_derivative(self) -> bool:
        return self._dpdf is not None

    def hazard(self, x):
        s = np.asarray(self.sf(x))
        if np.any(s <= 0):
            raise DomainError(f"{self.name}: hazard undefined where the survival function is zero")
        return _out(x, np.asarray(self.pdf(x)) / s)

    def rev_hazard(self, x):
        c = np.asarray(self.cdf(x))
        if np.any(c <= 0):
            raise DomainError(f"{self.name}: reversed hazard undefined where the cdf is zero")
        return _out(x, np.asarray(self.pdf(x)) / c)

    def ppf(self, u):
        ua = np.asarray(u, dtype=float)
        if np.any((ua < 0) | (ua > 1)):
            raise DomainError("ppf argument must lie in [0, 1]")
        lo, hi = self.support
        out = np.where(ua <= 0, lo, hi).astype(float)
        m = (ua > 0) & (ua < 1)
        if np.any(m):
            out[m] = self._ppf(ua[m])
        return _out(u, out)

    def isf(self, v):
        va = np.asarray(v, dtype=float)
        if np.any((va < 0) | (va > 1)):
            raise DomainError("isf argument must lie in [0, 1]")
        lo, hi = self.support
        out = np.where(va >= 1, lo, hi).astype(float)
        m = (va > 0) & (va < 1)
        if np.any(m):
            out[m] = self._isf(va[m])
        return _out(v, out)

    def mean(self) -> float:
        """E(X); ``inf`` when it diverges."""
        from .quadrature import integrate

        lo, hi = self.support
        res = integrate(lambda x: x * self.pdf(x), lo, hi)
        if not res.converged:
            return math.inf
        return res.value

    def __repr__(self):
        inner = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"{self.name}({inner})"


def _bisect_inverse(cdf, u, support, iters=200):
    """Vectorised bisection for cdf(x) = u on the open support."""
    u = np.asarray(u, dtype=float)
    lo, hi = support
    a = np.full(u.shape, lo, dtype=float)
    if np.isfinite(hi):
        b = np.full(u.shape, hi, dtype=float)
    else:
        b = np.full(u.shape, max(1.0, abs(lo)) + lo, dtype=float)
        for _ in range(2000):
            low = cdf(b) < u
            if not np.any(low):
                break
            b = np.where(low, lo + 2 * (b - lo), b)
    for _ in range(iters):
        mid = 0.5 * (a + b)
        left = cdf(mid) < u
        a = np.where(left, mid, a)
        b = np.where(left, b, mid)
        if np.all(b - a <= 4e-16 * np.maximum(1.0, np.abs(b))):
            break
    return 0.5 * (a + b)


# --------------------------------------------------------------------------
# catalog families
# --------------------------------------------------------------------------


@dataclass(frozen=True, repr=False)
class Uniform(Distribution):
    alpha: float = 0.0
    beta: float = 1.0

    name = "uniform"
    pdf_trend = "constant"

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and np.isfinite(self.beta) and self.alpha < self.beta):
            raise ParameterError(f"uniform requires alpha < beta, got ({self.alpha}, {self.beta})")

    @property
    def support(self):
        return (float(self.alpha), float(self.beta))

    @property
    def params(self):
        return {"alpha": self.alpha, "beta": self.beta}

    def _pdf(self, x):
        return np.full(np.shape(x), 1.0 / (self.beta - self.alpha))

    def _cdf(self, x):
        return (x - self.alpha) / (self.beta - self.alpha)

    def _sf(self, x):
        return (self.beta - x) / (self.beta - self.alpha)

    def _dpdf(self, x):
        return np.zeros(np.shape(x))

    def _ppf(self, u):
        return self.alpha + u * (self.beta - self.alpha)

    def _isf(self, v):
        return self.beta - v * (self.beta - self.alpha)

    def mean(self):
        return 0.5 * (self.alpha + self.beta)


@dataclass(frozen=True, repr=False)
class TriangularUp(Distribution):
    """Density 2x/b^2 on (0, b)."""

    b: float = 1.0

    name = "triangular_up"
    pdf_trend = "increasing"

    def __post_init__(self):
        _positive(b=self.b)

    @property
    def support(self):
        return (0.0, float(self.b))

    @property
    def params(self):
        return {"b": self.b}

    def _pdf(self, x):
        return 2.0 * x / self.b**2

    def _cdf(self, x):
        return (x / self.b) ** 2

    def _sf(self, x):
        return (self.b - x) * (self.b + x) / self.b**2

    def _dpdf(self, x):
        return np.full(np.shape(x), 2.0 / self.b**2)

    def _ppf(self, u):
        return self.b * np.sqrt(u)

    def _isf(self, v):
        return self.b * np.sqrt(1.0 - v)

    def mean(self):
        return 2.0 * self.b / 3.0


@dataclass(frozen=True, repr=False)
class TriangularDown(Distribution):
    """Density 2(b - x)/b^2 on (0, b)."""

    b: float = 1.0

    name = "triangular_down"
    pdf_trend = "decreasing"

    def __post_init__(self):
        _positive(b=self.b)

    @property
    def support(self):
        return (0.0, float(self.b))

    @property
    def params(self):
        return {"b": self.b}

    def _pdf(self, x):
        return 2.0 * (self.b - x) / self.b**2

    def _cdf(self, x):
        return x * (2.0 * self.b - x) / self.b**2

    def _sf(self, x):
        return ((self.b - x) / self.b) ** 2

    def _dpdf(self, x):
        return np.full(np.shape(x), -2.0 / self.b**2)

    def _ppf(self, u):
        return self.b * (1.0 - np.sqrt(1.0 - u))

    def _isf(self, v):
        return self.b * (1.0 - np.sqrt(v))

    def mean(self):
        return self.b / 3.0


@dataclass(frozen=True, repr=False)
class Power(Distribution):
    """F(t) = (t/b)^c on (0, b)."""

    b: float = 1.0
    c: float = 1.0

    name = "power"

    def __post_init__(self):
        _positive(b=self.b, c=self.c)

    @property
    def pdf_trend(self):
        if self.c == 1:
            return "constant"
        return "increasing" if self.c > 1 else "decreasing"

    @property
    def support(self):
        return (0.0, float(self.b))

    @property
    def params(self):
        return {"b": self.b, "c": self.c}

    def _pdf(self, x):
        return self.c * x ** (self.c - 1) / self.b**self.c

    def _logpdf(self, x):
        return math.log(self.c) + (self.c - 1) * np.log(x) - self.c * math.log(self.b)

    def _cdf(self, x):
        return (x / self.b) ** self.c

    def _sf(self, x):
        return -np.expm1(self.c * np.log(x / self.b))

    def _dpdf(self, x):
        return self._pdf(x) * (self.c - 1) / x

    def _ppf(self, u):
        return self.b * u ** (1.0 / self.c)

    def mean(self):
        return self.c * self.b / (self.c + 1.0)


@dataclass(frozen=True, repr=False)
class Weibull(Distribution):
    """Survival function exp(-lam * t^p) on (0, inf); p=1 exponential, p=2 Rayleigh."""

    lam: float = 1.0
    p: float = 1.0

    name = "weibull"

    def __post_init__(self):
        _positive(lam=self.lam, p=self.p)

    @property
    def pdf_trend(self):
        return "decreasing" if self.p <= 1 else None

    @property
    def support(self):
        return (0.0, math.inf)

    @property
    def params(self):
        return {"lam": self.lam, "p": self.p}

    def _pdf(self, x):
        return self.lam * self.p * x ** (self.p - 1) * np.exp(-self.lam * x**self.p)

    def _logpdf(self, x):
        return math.log(self.lam * self.p) + (self.p - 1) * np.log(x) - self.lam * x**self.p

    def _cdf(self, x):
        return -np.expm1(-self.lam * x**self.p)

    def _sf(self, x):
        return np.exp(-self.lam * x**self.p)

    def _logsf(self, x):
        return -self.lam * x**self.p

    def _dpdf(self, x):
        return self._pdf(x) * ((self.p - 1) / x - self.lam * self.p * x ** (self.p - 1))

    def _ppf(self, u):
        return (-np.log1p(-u) / self.lam) ** (1.0 / self.p)

    def _isf(self, v):
        return (-np.log(v) / self.lam) ** (1.0 / self.p)

    def mean(self):
        return self.lam ** (-1.0 / self.p) * math.gamma(1.0 + 1.0 / self.p)


def exponential(lam: float = 1.0) -> Weibull:
    return Weibull(lam=lam, p=1.0)


def rayleigh(lam: float = 1.0) -> Weibull:
    return Weibull(lam=lam, p=2.0)


@dataclass(frozen=True, repr=False)
class Pareto1(Distribution):
    """F(t) = 1 - (beta/t)^alpha for t > beta."""

    alpha: float = 1.0
    beta: float = 1.0

    name = "pareto1"
    pdf_trend = "decreasing"

    def __post_init__(self):
        _positive(alpha=self.alpha, beta=self.beta)

    @property
    def support(self):
        return (float(self.beta), math.inf)

    @property
    def params(self):
        return {"alpha": self.alpha, "beta": self.beta}

    def _pdf(self, x):
        return self.alpha * self.beta**self.alpha * x ** (-self.alpha - 1)

    def _logpdf(self, x):
        return math.log(self.alpha) + self.alpha * math.log(self.beta) - (self.alpha + 1) * np.log(x)

    def _cdf(self, x):
        return -np.expm1(self.alpha * np.log(self.beta / x))

    def _sf(self, x):
        return (self.beta / x) ** self.alpha

    def _logsf(self, x):
        return self.alpha * np.log(self.beta / x)

    def _dpdf(self, x):
        return -(self.alpha + 1) * self._pdf(x) / x

    def _ppf(self, u):
        return self.beta * np.exp(-np.log1p(-u) / self.alpha)

    def _isf(self, v):
        return self.beta * v ** (-1.0 / self.alpha)

    def mean(self):
        if self.alpha <= 1:
            return math.inf
        return self.alpha * self.beta / (self.alpha - 1.0)


@dataclass(frozen=True, repr=False)
class Pareto2(Distribution):
    """F(t) = 1 - [1 + (t - mu)/beta]^(-alpha) for t > mu."""

    mu: float = 0.0
    beta: float = 1.0
    alpha: float = 1.0

    name = "pareto2"
    pdf_trend = "decreasing"

    def __post_init__(self):
        _positive(beta=self.beta, alpha=self.alpha)
        if not np.isfinite(self.mu):
            raise ParameterError("mu must be finite")

    @property
    def support(self):
        return (float(self.mu), math.inf)

    @property
    def params(self):
        return {"mu": self.mu, "beta": self.beta, "alpha": self.alpha}

    def _pdf(self, x):
        return (self.alpha / self.beta) * (1.0 + (x - self.mu) / self.beta) ** (-self.alpha - 1)

    def _logpdf(self, x):
        return math.log(self.alpha / self.beta) - (self.alpha + 1) * np.log1p((x - self.mu) / self.beta)

    def _cdf(self, x):
        return -np.expm1(-self.alpha * np.log1p((x - self.mu) / self.beta))

    def _sf(self, x):
        return np.exp(-self.alpha * np.log1p((x - self.mu) / self.beta))

    def _logsf(self, x):
        return -self.alpha * np.log1p((x - self.mu) / self.beta)

    def _dpdf(self, x):
        return -(self.alpha + 1) * self._pdf(x) / (self.beta + x - self.mu)

    def _ppf(self, u):
        return self.mu + self.beta * np.expm1(-np.log1p(-u) / self.alpha)

    def _isf(self, v):
        return self.mu + self.beta * np.expm1(-np.log(v) / self.alpha)

    def mean(self):
        if self.alpha <= 1:
            return math.inf
        return self.mu + self.beta / (self.alpha - 1.0)


@dataclass(frozen=True, repr=False)
class Pareto4(Distribution):
    """F(x) = 1 - [1 + ((x - mu)/beta)^(1/gamma)]^(-alpha) for x > mu."""

    mu: float = 0.0
    beta: float = 1.0
    gamma: float = 1.0
    alpha: float = 1.0

    name = "pareto4"

    def __post_init__(self):
        _positive(beta=self.beta, gamma=self.gamma, alpha=self.alpha)
        if not np.isfinite(self.mu):
            raise ParameterError("mu must be finite")

    @property
    def support(self):
        return (float(self.mu), math.inf)

    @property
    def params(self):
        return {"mu": self.mu, "beta": self.beta, "gamma": self.gamma, "alpha": self.alpha}

    def _s(self, x):
        return ((x - self.mu) / self.beta) ** (1.0 / self.gamma)

    def _pdf(self, x):
        s = self._s(x)
        return self.alpha * (1.0 + s) ** (-self.alpha - 1) * s / (self.gamma * (x - self.mu))

    def _logpdf(self, x):
        z = (x - self.mu) / self.beta
        ls = np.log(z) / self.gamma
        return (
            math.log(self.alpha / self.gamma)
            - (self.alpha + 1) * np.log1p(np.exp(ls))
            + ls
            - np.log(x - self.mu)
        )

    def _cdf(self, x):
        return -np.expm1(-self.alpha * np.log1p(self._s(x)))

    def _sf(self, x):
        return np.exp(-self.alpha * np.log1p(self._s(x)))

    def _logsf(self, x):
        return -self.alpha * np.log1p(self._s(x))

    def _dpdf(self, x):
        s = self._s(x)
        d = x - self.mu
        ds = s / (self.gamma * d)
        return self._pdf(x) * (-(self.alpha + 1) * ds / (1.0 + s) + (1.0 / self.gamma - 1.0) / d)

    def _ppf(self, u):
        s = np.expm1(-np.log1p(-u) / self.alpha)
        return self.mu + self.beta * s**self.gamma

    def _isf(self, v):
        s = np.expm1(-np.log(v) / self.alpha)
        return self.mu + self.beta * s**self.gamma

    def mean(self):
        if self.alpha <= self.gamma:
            return math.inf
        g, a = self.gamma, self.alpha
        return self.mu + self.beta * gamma_fn(1 + g) * gamma_fn(a - g) / gamma_fn(a)


@dataclass(frozen=True, repr=False)
class Pareto3(Pareto4):
    """Pareto-IV with alpha = 1."""

    mu: float = 0.0
    beta: float = 1.0
    gamma: float = 1.0
    alpha: float = field(default=1.0, init=False)

    name = "pareto3"

    @property
    def params(self):
        return {"mu": self.mu, "beta": self.beta, "gamma": self.gamma}


@dataclass(frozen=True, repr=False)
class Burr12(Distribution):
    """F(x) = 1 - [1 + (x/beta)^gamma]^(-alpha): Pareto-IV with mu = 0 and gamma -> 1/gamma."""

    beta: float = 1.0
    gamma: float = 1.0
    alpha: float = 1.0

    name = "burr12"

    def __post_init__(self):
        _positive(beta=self.beta, gamma=self.gamma, alpha=self.alpha)
        object.__setattr__(self, "_p4", Pareto4(0.0, self.beta, 1.0 / self.gamma, self.alpha))

    @property
    def support(self):
        return (0.0, math.inf)

    @property
    def params(self):
        return {"beta": self.beta, "gamma": self.gamma, "alpha": self.alpha}

    def _pdf(self, x):
        return self._p4._pdf(x)

    def _logpdf(self, x):
        return self._p4._logpdf(x)

    def _cdf(self, x):
        return self._p4._cdf(x)

    def _sf(self, x):
        return self._p4._sf(x)

    def _logsf(self, x):
        return self._p4._logsf(x)

    def _dpdf(self, x):
        return self._p4._dpdf(x)

    def _ppf(self, u):
        return self._p4._ppf(u)

    def _isf(self, v):
        return self._p4._isf(v)

    def mean(self):
        return self._p4.mean()


# --------------------------------------------------------------------------
# proportional hazard / reversed hazard models
# --------------------------------------------------------------------------


@dataclass(frozen=True, repr=False)
class ProportionalHazards(Distribution):
    """Y with sf_Y = sf_X^theta."""

    baseline: Distribution
    theta: float

    name = "phrm"

    def __post_init__(self):
        _positive(theta=self.theta)

    @property
    def support(self):
        return self.baseline.support

    @property
    def params(self):
        return {"theta": self.theta, "baseline": self.baseline.to_spec()}

    def to_spec(self):
        return {"model": "phrm", "theta": self.theta, "baseline": self.baseline.to_spec()}

    def _pdf(self, x):
        return self.theta * self.baseline._sf(x) ** (self.theta - 1) * self.baseline._pdf(x)

    def _logpdf(self, x):
        with np.errstate(divide="ignore"):
            return (
                math.log(self.theta)
                + (self.theta - 1) * self.baseline._logsf(x)
                + self.baseline._logpdf(x)
            )

    def _cdf(self, x):
        return -np.expm1(self.theta * self.baseline._logsf(x))

    def _sf(self, x):
        return self.baseline._sf(x) ** self.theta

    def _logsf(self, x):
        return self.theta * self.baseline._logsf(x)

    @property
    def _dpdf(self):
        base = self.baseline
        if base._dpdf is None:
            return None
        th = self.theta

        def d(x):
            s, f = base._sf(x), base._pdf(x)
            return th * s ** (th - 2) * (s * base._dpdf(x) - (th - 1) * f * f)

        return d

    def _ppf(self, u):
        return self.baseline.isf(np.exp(np.log1p(-u) / self.theta))

    def _isf(self, v):
        return self.baseline.isf(v ** (1.0 / self.theta))


@dataclass(frozen=True, repr=False)
class ProportionalReversedHazards(Distribution):
    """Y with cdf_Y = cdf_X^theta."""

    baseline: Distribution
    theta: float

    name = "prhrm"

    def __post_init__(self):
        _positive(theta=self.theta)

    @property
    def support(self):
        return self.baseline.support

    @property
    def params(self):
        return {"theta": self.theta, "baseline": self.baseline.to_spec()}

    def to_spec(self):
        return {"model": "prhrm", "theta": self.theta, "baseline": self.baseline.to_spec()}

    def _pdf(self, x):
        return self.theta * self.baseline._cdf(x) ** (self.theta - 1) * self.baseline._pdf(x)

    def _logpdf(self, x):
        with np.errstate(divide="ignore"):
            return (
                math.log(self.theta)
                + (self.theta - 1) * self.baseline._logcdf(x)
                + self.baseline._logpdf(x)
            )

    def _cdf(self, x):
        return self.baseline._cdf(x) ** self.theta

    def _logcdf(self, x):
        return self.theta * self.baseline._logcdf(x)

    def _sf(self, x):
        return -np.expm1(self.theta * self.baseline._logcdf(x))

    @property
    def _dpdf(self):
        base = self.baseline
        if base._dpdf is None:
            return None
        th = self.theta

        def d(x):
            c, f = base._cdf(x), base._pdf(x)
            return th * c ** (th - 2) * (c * base._dpdf(x) + (th - 1) * f * f)

        return d

    def _ppf(self, u):
        return self.baseline.ppf(u ** (1.0 / self.theta))

    def _isf(self, v):
        return self.baseline.ppf(np.exp(np.log1p(-v) / self.theta))


def make_phrm(baseline: Distribution, theta: float) -> ProportionalHazards:
    """Proportional hazard rate model: hazard_Y = theta * hazard_X."""
    if not theta > 0:
        raise ParameterError(f"theta must be positive, got {theta!r}")
    return ProportionalHazards(baseline, float(theta))


def make_prhrm(baseline: Distribution, theta: float) -> ProportionalReversedHazards:
    """Proportional reversed hazard rate model: cdf_Y = cdf_X^theta."""
    if not theta > 0:
        raise ParameterError(f"theta must be positive, got {theta!r}")
    return ProportionalReversedHazards(baseline, float(theta))


# --------------------------------------------------------------------------
# monotone transformations
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MonotoneMap:
    """A strictly monotone, differentiable map together with its inverse."""

    name: str
    fn: Callable
    inverse: Callable
    derivative: Callable
    increasing: bool
    params: Mapping = field(default_factory=dict)

    def __call__(self, x):
        return self.fn(x)

    def to_spec(self):
        return {"kind": self.name, **dict(self.params)}

    @classmethod
    def identity(cls):
        return cls("identity", lambda x: x, lambda y: y, lambda x: np.ones(np.shape(x)), True)

    @classmethod
    def affine(cls, a, b=0.0):
        if a == 0:
            raise ParameterError("affine map needs a != 0")
        return cls(
            "affine",
            lambda x: a * x + b,
            lambda y: (y - b) / a,
            lambda x: np.full(np.shape(x), float(a)),
            a > 0,
            {"a": a, "b": b},
        )

    @classmethod
    def power(cls, k):
        """x -> x^k on the positive half-line (increasing for k > 0)."""
        if k == 0:
            raise ParameterError("power map needs k != 0")
        return cls(
            "power",
            lambda x: np.asarray(x, dtype=float) ** k,
            lambda y: np.asarray(y, dtype=float) ** (1.0 / k),
            lambda x: k * np.asarray(x, dtype=float) ** (k - 1),
            k > 0,
            {"k": k},
        )

    @classmethod
    def reciprocal(cls):
        def inv(x):
            with np.errstate(divide="ignore"):
                return 1.0 / np.asarray(x, dtype=float)

        return cls("reciprocal", inv, inv, lambda x: -1.0 / np.asarray(x, dtype=float) ** 2, False)

    @classmethod
    def cdf_of(cls, dist: Distribution):
        return cls("cdf", dist.cdf, dist.ppf, dist.pdf, True, {"dist": dist.to_spec()})

    @classmethod
    def sf_of(cls, dist: Distribution):
        return cls("sf", dist.sf, dist.isf, lambda x: -np.asarray(dist.pdf(x)), False, {"dist": dist.to_spec()})


@dataclass(frozen=True, repr=False)
class Transformed(Distribution):
    """Law of phi(X) for a strictly monotone phi."""

    base: Distribution
    phi: MonotoneMap

    name = "transformed"

    @property
    def support(self):
        lo, hi = self.base.support
        with np.errstate(divide="ignore"):
            a, b = float(self.phi(lo)), float(self.phi(hi))
        return (a, b) if self.phi.increasing else (b, a)

    @property
    def params(self):
        return {"phi": self.phi.to_spec(), "base": self.base.to_spec()}

    def _pdf(self, y):
        x = self.phi.inverse(y)
        return self.base.pdf(x) / np.abs(self.phi.derivative(x))

    def _logpdf(self, y):
        x = self.phi.inverse(y)
        return self.base._logpdf(x) - np.log(np.abs(self.phi.derivative(x)))

    def _cdf(self, y):
        x = self.phi.inverse(y)
        return self.base.cdf(x) if self.phi.increasing else self.base.sf(x)

    def _sf(self, y):
        x = self.phi.inverse(y)
        return self.base.sf(x) if self.phi.increasing else self.base.cdf(x)

    def _ppf(self, u):
        return self.phi(self.base.ppf(u) if self.phi.increasing else self.base.isf(u))

    def _isf(self, v):
        return self.phi(self.base.isf(v) if self.phi.increasing else self.base.ppf(v))


def transformed(dist: Distribution, phi: MonotoneMap) -> Transformed:
    return Transformed(dist, phi)


# --------------------------------------------------------------------------
# catalog by name
# --------------------------------------------------------------------------

CATALOG: dict[str, Callable[..., Distribution]] = {
    "uniform": Uniform,
    "triangular_up": TriangularUp,
    "triangular_down": TriangularDown,
    "power": Power,
    "weibull": Weibull,
    "exponential": exponential,
    "rayleigh": rayleigh,
    "pareto1": Pareto1,
    "pareto2": Pareto2,
    "pareto3": Pareto3,
    "pareto4": Pareto4,
    "burr12": Burr12,
}


def make_distribution(spec: Mapping) -> Distribution:
    """Build a distribution from ``{"family", "params"}`` or ``{"model", "baseline", "theta"}``."""
    if not isinstance(spec, Mapping):
        raise ParameterError(f"distribution spec must be a mapping, got {type(spec).__name__}")
    if "model" in spec:
        model = str(spec["model"]).lower()
        if "baseline" not in spec or "theta" not in spec:
            raise ParameterError("model spec needs 'baseline' and 'theta'")
        base = make_distribution(spec["baseline"])
        if model == "phrm":
            return make_phrm(base, float(spec["theta"]))
        if model == "prhrm":
            return make_prhrm(base, float(spec["theta"]))
        raise ParameterError(f"unknown model {spec['model']!r}; expected 'phrm' or 'prhrm'")
    family = spec.get("family")
    if family not in CATALOG:
        raise ParameterError(f"unknown family {family!r}; known: {sorted(CATALOG)}")
    params = dict(spec.get("params", {}))
    if "lambda" in params:
        params["lam"] = params.pop("lambda")
    try:
        return CATALOG[family](**{k: float(v) for k, v in params.items()})
    except TypeError as exc:
        raise ParameterError(f"bad parameters for {family}: {exc}") from None


def evaluate(dist: Distribution, x, what: str):
    """Pointwise pdf, cdf, sf, log_pdf, hazard or rev_hazard."""
    if what not in SELECTORS:
        raise ParameterError(f"unknown selector {what!r}; expected one of {SELECTORS}")
    return getattr(dist, what)(x)


# --------------------------------------------------------------------------
# model pairs and truncation windows
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TruncationWindow:
    t1: float
    t2: float

    def __post_init__(self):
        object.__setattr__(self, "t1", float(self.t1))
        object.__setattr__(self, "t2", float(self.t2))
        if math.isnan(self.t1) or math.isnan(self.t2) or not self.t1 < self.t2:
            raise ParameterError(f"window needs t1 < t2, got ({self.t1}, {self.t2})")

    def as_tuple(self):
        return (self.t1, self.t2)


@dataclass(frozen=True)
class ModelPair:
    """Actual law X (density f) and assigned law Y (density g)."""

    actual: Distribution
    assigned: Distribution

    def __post_init__(self):
        lo = max(self.actual.support[0], self.assigned.support[0])
        hi = min(self.actual.support[1], self.assigned.support[1])
        if not lo < hi:
            raise ParameterError(f"supports of {self.actual!r} and {self.assigned!r} do not overlap")

    def swapped(self) -> "ModelPair":
        return ModelPair(self.assigned, self.actual)

    def to_spec(self):
        return {"actual": self.actual.to_spec(), "assigned": self.assigned.to_spec()}


def prob_mass(dist: Distribution, t1: float, t2: float) -> float:
    """P(t1 < X < t2), differencing whichever tail keeps precision."""
    c1 = dist.cdf(t1)
    if c1 < 0.5:
        return float(dist.cdf(t2) - c1)
    return float(dist.sf(t1) - dist.sf(t2))


@dataclass(frozen=True)
class WindowReport:
    member: bool
    F_t1: float
    F_t2: float
    G_t1: float
    G_t2: float

    def __bool__(self):
        return self.member


def validate_window(pair: ModelPair, w: TruncationWindow) -> WindowReport:
    """Report whether (t1, t2) lies in D = {F(t1) < F(t2) and G(t1) < G(t2)}."""
    X, Y = pair.actual, pair.assigned
    member = prob_mass(X, w.t1, w.t2) > 0 and prob_mass(Y, w.t1, w.t2) > 0
    return WindowReport(member, X.cdf(w.t1), X.cdf(w.t2), Y.cdf(w.t1), Y.cdf(w.t2))


def density_trend(dist: Distribution, lo: float | None = None, hi: float | None = None, n: int = 200):
    """Numeric probe of density monotonicity on [lo, hi] (default: support shrunk by 1e-6 of its span).

    Returns ``"increasing"``, ``"decreasing"``, ``"constant"`` or ``None``.
    """
    slo, shi = dist.support
    if lo is None or hi is None:
        a = slo if np.isfinite(slo) else dist.ppf(1e-9)
        b = shi if np.isfinite(shi) else dist.isf(1e-9)
        eps = 1e-6 * (b - a)
        lo = a + eps if lo is None else lo
        hi = b - eps if hi is None else hi
    x = np.linspace(lo, hi, n)
    d = np.asarray(dist.pdf_derivative(x))
    scale = max(float(np.max(np.abs(dist.pdf(x)))), 1e-300)
    tol = 1e-10 * scale
    if np.all(np.abs(d) <= tol):
        return "constant"
    if np.all(d >= -tol):
        return "increasing"
    if np.all(d <= tol):
        return "decreasing"
    return None

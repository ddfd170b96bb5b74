# %% [markdown]
# # Bounds and characterizations, checked numerically
#
# Every verifier in `dtinaccuracy.laws` evaluates both sides of a relation by
# quadrature on a grid of windows and returns a `LawReport`.  Equalities pass
# when all residuals are within tolerance.  Bounds are oriented so that a
# non-negative residual means the inequality holds.

# %%
import json

import numpy as np

from dtinaccuracy import ModelPair, make_phrm
from dtinaccuracy import laws
from dtinaccuracy.distributions import Pareto1, Pareto2, Uniform, Weibull
from dtinaccuracy.verification import run_law

# %% [markdown]
# ## GFR bounds
#
# With the general failure rate h1 = f(t1)/dF, a decreasing h1^Y in t1 gives
# H^w >= -m ln h1^Y.  For Y Pareto-I with G(t) = 1 - 1/t this holds for
# t2 > 2 t1.

# %%
pair = ModelPair(Uniform(1.0, 10.0), Pareto1(1.0, 1.0))
rep = laws.check_bound_thm21(pair, 8.0, np.linspace(1.2, 3.9, 10))
print(rep.verdict, rep.params["part"], "smallest margin", min(rep.residuals))

# %% [markdown]
# The margin shrinks to zero as the window closes onto t2.

# %%
from dtinaccuracy.measures import gcm, gfr, weighted_interval_inaccuracy  # noqa: E402

for eps in (1e-1, 1e-3, 1e-6):
    w = (8.0 - eps, 8.0)
    margin = weighted_interval_inaccuracy(pair, w).value + gcm(pair.actual, w) * np.log(gfr(pair.assigned, w)[0])
    print(f"eps = {eps:g}   margin = {margin:.3e}")

# %% [markdown]
# ## Characterizing the Weibull family
#
# For Y in the proportional hazards model of X (survival F-bar^theta), the
# identity H^w + m ln h1^Y = (1-p)(E[X ln X] - m ln t1) + lam theta (E[X^(p+1)] - t1^p m)
# holds on every window exactly when X is Weibull(lam, p).

# %%
X = Weibull(0.5, 1.7)
grid = laws.window_grid(X, n=10, seed=42)
for theta in (0.5, 1.0, 2.0):
    r = laws.characterization_residual("weibull", "PHRM", "h1", X, theta, grid)
    print(f"theta = {theta}:  {r.verdict}  max |residual| = {r.max_abs_residual:.1e}")

# %% [markdown]
# The same right-hand side with a Lomax X and exponential parameters does not
# match, which is what makes the identity a characterization.

# %%
imposter = Pareto2(0.0, 1.0, 3.0)
r = laws.characterization_residual(
    "weibull", "PHRM", "h1", imposter, 2.0, laws.window_grid(imposter, 10, seed=42), {"lam": 1.0, "p": 1.0}
)
print(r.verdict, f"max |residual| = {r.max_abs_residual:.3f}")

# %% [markdown]
# ## The bundled suite
#
# `run_law` evaluates the committed fixture cases for one law id.  Each
# negative-control case is marked `expect: fail` and counts as passing when it
# is discriminated.

# %%
for law_id in ("prop21", "thm22", "decomposition", "limits", "altforms"):
    r = run_law(law_id)
    print(f"{law_id:14s} {r.verdict:12s} max |residual| {r.max_abs_residual:.2e}")

# %% [markdown]
# `altforms` fails.  The published alternative forms of H^w do not hold, and
# neither do the derivative relations dH^w/dt_i = t_i dH/dt_i.  The correct
# partial derivative is
#
#     dH^w/dt1 = h1^X [H^w + t1 ln h1^Y] - m h1^Y
#
# which `laws.hw_partials` (a five-point finite difference) confirms.

# %%
pair = ModelPair(X, make_phrm(X, 2.0))
w = (0.5, 1.5)
hw = weighted_interval_inaccuracy(pair, w).value
h1x, h1y = gfr(X, w)[0], gfr(pair.assigned, w)[0]
formula = h1x * (hw + w[0] * np.log(h1y)) - gcm(X, w) * h1y
print("finite difference", laws.hw_partials(pair, w)[0], "  formula", formula)

# %% [markdown]
# Reports serialize to plain JSON, as written by `dtinaccuracy verify`.

# %%
print(json.dumps(laws.check_decomposition(ModelPair(Uniform(0, 1), Uniform(0, 1)), 0.3, 0.7).to_dict(), indent=1))

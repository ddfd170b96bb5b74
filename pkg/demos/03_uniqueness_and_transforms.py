# %% [markdown]
# # Recovering the failure rates, and monotone transformations
#
# ## GFR functions determine the law
#
# Knowing h1(s, t2) for every s rebuilds the conditional CDF on the window:
#
#     P(X <= x | t1 < X < t2) = 1 - exp(-int_{t1}^{x} h1(s, t2) ds)

# %%
import numpy as np

from dtinaccuracy import ModelPair, make_phrm, make_prhrm
from dtinaccuracy import laws
from dtinaccuracy.distributions import MonotoneMap, Weibull, exponential, prob_mass
from dtinaccuracy.measures import cdf_from_gfr, gfr

X = Weibull(0.5, 1.7)
xs = np.linspace(0.3, 2.0, 6)
rebuilt = cdf_from_gfr(lambda a, b: gfr(X, (a, b)), (0.3, 2.0), xs)
direct = (X.cdf(xs) - X.cdf(0.3)) / prob_mass(X, 0.3, 2.0)
print(np.c_[xs, rebuilt, direct])

# %% [markdown]
# ## The uniqueness probe
#
# If H^w increases in t1 and decreases in t2, the GFR of X is the unique
# positive root of a convex function built from H^w, its partial derivatives
# and the ratios theta_i = h_i^Y / h_i^X.  The probe first checks the
# monotonicity hypothesis numerically.  For a proportional hazards partner
# the hypothesis fails, so the probe reports inconclusive.

# %%
e1 = exponential(1.0)
rep = laws.uniqueness_probe(ModelPair(e1, make_phrm(e1, 2.0)), (0.5, 2.0))
print(rep.verdict, "|", rep.reason)
print("dH^w/dt1 =", rep.params["dHw_dt1"], " dH^w/dt2 =", rep.params["dHw_dt2"])

# %% [markdown]
# A proportional *reversed* hazards partner with a large theta and a window
# near zero satisfies the hypothesis.  There the roots match h1^X and h2^X.

# %%
Xs = exponential(296.0)
w = (3.3783952703828843e-08, 0.007779003692547452)
rep = laws.uniqueness_probe(ModelPair(Xs, make_prhrm(Xs, 20.0)), w)
print(rep.verdict, "relative root errors", rep.residuals)

# %% [markdown]
# ## Monotone transformations
#
# For a strictly monotone phi, the weighted inaccuracy of (phi(X), phi(Y)) on
# (t1, t2) equals the phi-weighted inaccuracy of (X, Y) on the preimage
# window plus E[phi(X) ln|phi'(X)|].  Decreasing maps swap the window ends.

# %%
pair = ModelPair(X, make_phrm(X, 2.0))
for phi, win in (
    (MonotoneMap.affine(2.0, 0.3), (1.0, 3.0)),
    (MonotoneMap.power(2.0), (0.25, 2.25)),
    (MonotoneMap.reciprocal(), (0.5, 2.0)),
    (MonotoneMap.sf_of(X), (0.3, 0.8)),
):
    r = laws.transform_identity(pair, phi, win)
    print(f"{phi.name:10s} {r.verdict}  residuals {np.round(r.residuals, 15)}")

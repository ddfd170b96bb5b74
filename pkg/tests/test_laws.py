import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dtinaccuracy import laws
from dtinaccuracy.distributions import (
    ModelPair,
    MonotoneMap,
    Pareto1,
    Pareto2,
    Power,
    TriangularDown,
    TriangularUp,
    TruncationWindow,
    Uniform,
    Weibull,
    exponential,
    make_phrm,
    make_prhrm,
    rayleigh,
)
from dtinaccuracy.exceptions import DomainError, ParameterError
from dtinaccuracy.measures import gcm, gfr, weighted_interval_inaccuracy
from dtinaccuracy.verification import (
    LAW_IDS,
    load_fixtures,
    merge_reports,
    parse_phi,
    parse_windows,
    run_law,
    suite_exit_code,
)

U01 = Uniform(0.0, 1.0)
TRI = ModelPair(TriangularUp(2.0), TriangularDown(2.0))
WB = Weibull(0.5, 1.7)
WB_PAIR = ModelPair(WB, make_phrm(WB, 2.0))


# --------------------------------------------------------------------------
# windows and report plumbing
# --------------------------------------------------------------------------


def test_window_grid_is_seeded_and_valid():
    g1 = laws.window_grid(WB, n=10, seed=42)
    assert g1 == laws.window_grid(WB, n=10, seed=42)
    assert g1 != laws.window_grid(WB, n=10, seed=43)
    assert len(g1) == 10
    lo, hi = WB.ppf(0.02), WB.ppf(0.98)
    for w in g1:
        assert lo - 1e-12 <= w.t1 < w.t2 <= hi + 1e-12
        assert WB.cdf(w.t2) - WB.cdf(w.t1) >= 0.05 - 1e-12


def test_report_serialization():
    rep = laws.check_decomposition(ModelPair(U01, U01), 0.3, 0.7)
    d = rep.to_dict()
    assert set(d) == {"law_id", "params", "windows", "residuals", "tolerance", "verdict", "reason"}
    json.dumps(d)
    assert rep.passed and rep.max_abs_residual <= 1e-8


def test_merge_reports_precedence():
    p = laws._equality("x", {}, [(0, 1)], [0.0], [0.0])
    f = laws._equality("x", {}, [(0, 1)], [1.0], [0.0])
    i = laws._inconclusive("x", {}, [(0, 1)], "no trend")
    assert merge_reports("x", [p, p]).verdict == "pass"
    assert merge_reports("x", [p, i]).verdict == "inconclusive"
    assert merge_reports("x", [i, f, p]).verdict == "fail"
    assert suite_exit_code([p, i]) == 0
    assert suite_exit_code([p, f]) == 1


# --------------------------------------------------------------------------
# bounds
# --------------------------------------------------------------------------


@pytest.mark.parametrize(
    "actual,assigned",
    [
        (TriangularUp(1.0), U01),
        (U01, TriangularDown(1.0)),
        (U01, TriangularUp(1.0)),
        (TriangularUp(2.0), TriangularDown(2.0)),
        (exponential(1.0), Pareto2(0.0, 1.0, 2.0)),
    ],
)
def test_density_monotonicity_bound(actual, assigned):
    pair = ModelPair(actual, assigned)
    rep = laws.check_bound_prop21(pair, laws.window_grid(actual, 10, seed=42))
    assert rep.verdict == "pass", rep.reason
    assert min(rep.residuals) >= -laws.BOUND_SLACK


def test_density_bound_inconclusive_for_nonmonotone_density():
    Y = Weibull(1.0, 2.0)  # unimodal density
    rep = laws.check_bound_prop21(ModelPair(exponential(1.0), Y), laws.window_grid(Y, 5, seed=1))
    assert rep.verdict == "inconclusive"
    assert rep.reason


def test_lower_gfr_bound_pareto_assigned():
    pair = ModelPair(Uniform(1.0, 10.0), Pareto1(1.0, 1.0))
    rep = laws.check_bound_thm21(pair, 8.0, list(np.linspace(1.2, 3.9, 10)))
    assert rep.verdict == "pass", rep.reason
    assert rep.params["part"] == "i"


def test_lower_gfr_bound_equality_limit():
    # the margin H^w + m ln h1^Y closes as the window shrinks onto t2
    pair = ModelPair(Uniform(1.0, 10.0), Pareto1(1.0, 1.0))
    t2 = 8.0

    def margin(t1):
        w = (t1, t2)
        return weighted_interval_inaccuracy(pair, w).value + gcm(pair.actual, w) * math.log(gfr(pair.assigned, w)[0])

    gaps = [margin(t2 - eps) for eps in (1e-1, 1e-2, 1e-3, 1e-6)]
    assert all(g >= -laws.BOUND_SLACK for g in gaps)
    assert gaps[0] > gaps[1] > gaps[2] > gaps[3]
    assert gaps[3] < 1e-3
    # closed form: 2[(1/L) int x ln x dx - (t1 + t2)/2 ln t1]
    t1 = 4.0
    anti = lambda x: x * x * (2 * math.log(x) - 1) / 4  # noqa: E731
    closed = 2 * ((anti(t2) - anti(t1)) / (t2 - t1) - 0.5 * (t1 + t2) * math.log(t1))
    assert margin(t1) == pytest.approx(closed, abs=1e-9)


def test_single_point_grid_probes_a_neighbourhood():
    # near t2 the Pareto-I h1 increases in t1, so part (ii) is the applicable one
    pair = ModelPair(Uniform(1.0, 10.0), Pareto1(1.0, 1.0))
    assert laws.check_bound_thm21(pair, 8.0, [7.9]).params["part"] == "ii"
    assert laws.check_bound_thm21(pair, 8.0, [2.0]).params["part"] == "i"


def test_lower_gfr_bound_uniform_assigned_uses_correction():
    pair = ModelPair(TriangularUp(1.0), Uniform(0.0, 2.0))
    rep = laws.check_bound_thm21(pair, 0.9, list(np.linspace(0.05, 0.8, 10)))
    assert rep.verdict == "pass", rep.reason
    assert rep.params["part"] == "ii"


def test_upper_gfr_bound():
    pair = ModelPair(TriangularUp(1.0), Uniform(0.0, 2.0))
    rep = laws.check_bound_thm22(pair, 0.1, list(np.linspace(0.3, 0.95, 10)))
    assert rep.verdict == "pass", rep.reason


def test_upper_gfr_bound_increasing_h2_branch():
    pair = ModelPair(U01, make_phrm(U01, 0.5))
    rep = laws.check_bound_thm22(pair, 0.1, list(np.linspace(0.85, 0.99, 10)))
    assert rep.verdict == "pass", rep.reason
    assert rep.params["branch"] == "lower"


@pytest.mark.parametrize("t", [0.3, 0.6, 0.9])
def test_left_end_reduction(t):
    pair = ModelPair(TriangularUp(1.0), Uniform(0.0, 2.0))
    # the two-sided bound at t1 = 0 written with past quantities
    assert laws.past_bound_reduction(pair, t) == pytest.approx(laws.thm22_upper_bound(pair, (0.0, t)), abs=1e-12)
    assert laws.thm22_upper_bound(pair, (1e-9, t)) == pytest.approx(laws.past_bound_reduction(pair, t), abs=1e-6)
    # the closed expression relaxes -ln u <= 1/u - 1; for this pair the
    # slack is t - tau + E[X ln(X/t) | X < t] = t/9
    gap = laws.past_bound_expression(pair, t) - laws.past_bound_reduction(pair, t)
    assert gap == pytest.approx(t / 9, abs=1e-9)


def test_left_end_bound_suite():
    pair = ModelPair(TriangularUp(1.0), Uniform(0.0, 2.0))
    rep = laws.check_past_bound(pair, list(np.linspace(0.2, 0.95, 10)))
    assert rep.verdict == "pass", rep.reason


# --------------------------------------------------------------------------
# characterizations
# --------------------------------------------------------------------------

IN_FAMILY = [
    ("uniform", "PRHRM", Uniform(1.0, 3.0), None),
    ("power", "PRHRM", Power(2.0, 1.5), None),
    ("weibull", "PHRM", Weibull(0.5, 1.7), None),
    ("exponential", "PHRM", exponential(1.5), None),
    ("rayleigh", "PHRM", rayleigh(1.0), None),
    ("pareto1", "PHRM", Pareto1(2.5, 1.0), None),
    ("pareto2", "PHRM", Pareto2(0.5, 2.0, 3.0), None),
]


@pytest.mark.parametrize("family,model,X,params", IN_FAMILY)
@pytest.mark.parametrize("theta", [0.5, 1.0, 1.5, 2.0])
@pytest.mark.parametrize("endpoint", ["h1", "h2"])
def test_characterization_in_family(family, model, X, params, theta, endpoint):
    rep = laws.characterization_residual(family, model, endpoint, X, theta, laws.window_grid(X, 10, seed=42), params)
    assert rep.verdict == "pass"
    assert rep.max_abs_residual <= 1e-6


NEGATIVE = [
    ("uniform", "PRHRM", TriangularUp(1.0), {"alpha": 0.0}),
    ("power", "PRHRM", TriangularDown(1.0), {"c": 2.0}),
    ("weibull", "PHRM", Pareto2(0.0, 1.0, 3.0), {"lam": 1.0, "p": 1.0}),
    ("pareto1", "PHRM", Pareto2(1.0, 2.0, 3.0), {"alpha": 3.0, "beta": 1.0}),
    ("pareto2", "PHRM", Pareto1(3.0, 1.0), {"mu": 1.0, "beta": 2.0, "alpha": 3.0}),
]


@pytest.mark.parametrize("family,model,X,params", NEGATIVE)
def test_characterization_negative_controls(family, model, X, params):
    for endpoint in ("h1", "h2"):
        rep = laws.characterization_residual(family, model, endpoint, X, 2.0, laws.window_grid(X, 10, seed=42), params)
        assert rep.verdict == "fail"
        assert rep.max_abs_residual > 1e-3


def test_characterization_region_errors():
    X = Uniform(1.0, 3.0)
    with pytest.raises(ParameterError, match="alpha < t1"):
        laws.characterization_residual("uniform", "PRHRM", "h1", X, 2.0, [(0.5, 2.0)], {"alpha": 1.0})
    with pytest.raises(ParameterError, match="beta < t1"):
        laws.characterization_residual("pareto1", "PHRM", "h1", Pareto1(2.0, 1.0), 2.0, [(1.0, 2.0)])
    with pytest.raises(ParameterError, match="pass the family parameters"):
        laws.characterization_residual("weibull", "PHRM", "h1", X, 2.0, [(1.5, 2.0)])
    with pytest.raises(ParameterError):
        laws.characterization_residual("lognormal", "PHRM", "h1", X, 2.0, [(1.5, 2.0)])


# --------------------------------------------------------------------------
# uniqueness probe
# --------------------------------------------------------------------------

FEASIBLE = [
    (296.0, 20.0, (3.3783952703828843e-08, 0.007779003692547452)),
    (277.0, 20.0, (3.6101101083044526e-09, 0.010814917955068556)),
    (6156.0, 30.0, (1.624439571204246e-09, 0.000374039163904166)),
]


@pytest.mark.parametrize("lam,theta,w", FEASIBLE)
def test_uniqueness_probe_recovers_gfr(lam, theta, w):
    X = exponential(lam)
    rep = laws.uniqueness_probe(ModelPair(X, make_prhrm(X, theta)), w)
    assert rep.verdict == "pass", rep.reason
    assert rep.max_abs_residual <= 1e-4


def test_uniqueness_probe_roots_are_gfr_values():
    lam, theta, w = FEASIBLE[0]
    X = exponential(lam)
    rep = laws.uniqueness_probe(ModelPair(X, make_prhrm(X, theta)), w)
    h1, h2 = gfr(X, w)
    assert rep.params["roots_target"] == [h1, h2]
    assert all(abs(r) <= 1e-4 for r in rep.residuals)


def test_uniqueness_probe_phrm_is_inconclusive():
    # exp(1) with a PHRM partner: H^w decreases in t1 here, so the hypothesis fails
    X = exponential(1.0)
    pair = ModelPair(X, make_phrm(X, 2.0))
    rep = laws.uniqueness_probe(pair, (0.5, 2.0))
    assert rep.verdict == "inconclusive"
    assert "increasing in t1" in rep.reason
    d1, d2 = laws.hw_partials(pair, (0.5, 2.0))
    assert d1 < 0


def test_self_pair_probe():
    X = exponential(1.0)
    rep = laws.uniqueness_probe(ModelPair(X, X), (0.5, 2.0))
    assert rep.verdict in ("pass", "inconclusive")
    assert rep.reason or rep.max_abs_residual <= 1e-4


# --------------------------------------------------------------------------
# transform identity
# --------------------------------------------------------------------------

PHIS = [
    (MonotoneMap.identity(), (0.5, 1.5)),
    (MonotoneMap.affine(2.0, 0.3), (1.0, 3.0)),
    (MonotoneMap.power(2.0), (0.25, 2.25)),
    (MonotoneMap.reciprocal(), (0.5, 2.0)),
    (MonotoneMap.cdf_of(WB), (0.2, 0.7)),
    (MonotoneMap.sf_of(WB), (0.3, 0.8)),
]


@pytest.mark.parametrize("phi,w", PHIS)
def test_transform_identity(phi, w):
    rep = laws.transform_identity(WB_PAIR, phi, w)
    assert rep.verdict == "pass", rep.reason
    assert rep.max_abs_residual <= 1e-6


def test_identity_transform_is_exact():
    rep = laws.transform_identity(WB_PAIR, MonotoneMap.identity(), (0.5, 1.5))
    assert rep.max_abs_residual <= 1e-15


def test_affine_composite_formula():
    a, b = 2.0, 0.3
    rep = laws.transform_identity(WB_PAIR, MonotoneMap.affine(a, b), (1.0, 3.0))
    assert len(rep.residuals) >= 2
    pre = ((1.0 - b) / a, (3.0 - b) / a)
    hw = weighted_interval_inaccuracy(WB_PAIR, pre).value
    from dtinaccuracy.measures import interval_inaccuracy

    h = interval_inaccuracy(WB_PAIR, pre).value
    m = gcm(WB, pre)
    scaled = a * hw + b * h + (a * m + b) * math.log(a)
    from dtinaccuracy.distributions import transformed

    tpair = ModelPair(transformed(WB, MonotoneMap.affine(a, b)), transformed(WB_PAIR.assigned, MonotoneMap.affine(a, b)))
    lhs = weighted_interval_inaccuracy(tpair, (1.0, 3.0), method="quadrature").value
    assert lhs == pytest.approx(scaled, abs=1e-9)


# --------------------------------------------------------------------------
# identities with known defects, limits, decomposition
# --------------------------------------------------------------------------


@pytest.mark.parametrize(
    "pair,t1,t2",
    [
        (ModelPair(U01, U01), 0.3, 0.7),
        (TRI, 0.5, 1.5),
        (WB_PAIR, 0.5, 1.5),
        (ModelPair(exponential(1.0), Weibull(1.0, 2.0)), 0.4, 1.2),
        (ModelPair(Pareto1(2.5, 1.0), Pareto1(3.0, 1.0)), 1.5, 4.0),
    ],
)
def test_decomposition(pair, t1, t2):
    rep = laws.check_decomposition(pair, t1, t2)
    assert rep.verdict == "pass"
    assert rep.max_abs_residual <= 1e-6


def test_decomposition_degenerate_window():
    rep = laws.check_decomposition(ModelPair(U01, U01), 0.5, 0.5)
    assert rep.verdict == "pass"
    assert rep.max_abs_residual <= 1e-8


def test_decomposition_infinite_mean():
    with pytest.raises(DomainError):
        laws.check_decomposition(ModelPair(Pareto1(1.0, 1.0), Pareto1(1.0, 1.0)), 1.5, 3.0)


def test_alternative_forms_as_published_do_not_hold():
    rep = laws.check_alternative_forms(TRI, laws.window_grid(TriangularUp(2.0), 5, seed=42))
    assert rep.verdict == "fail"
    assert rep.max_abs_residual > 1e-2


def test_derivative_relations_as_published_do_not_hold():
    rep = laws.check_derivative_relations(TRI, laws.window_grid(TriangularUp(2.0), 5, seed=42))
    assert rep.verdict == "fail"
    assert rep.max_abs_residual > 1e-2


@pytest.mark.parametrize(
    "pair,ts",
    [
        (ModelPair(U01, TriangularUp(1.0)), [0.3, 0.7]),
        (TRI, [0.5, 1.5]),
        (WB_PAIR, [0.5, 1.5]),
        (ModelPair(exponential(1.0), Weibull(1.0, 2.0)), [0.4, 1.2]),
        (ModelPair(Pareto1(2.5, 1.0), Pareto1(3.0, 1.0)), [1.5, 4.0]),
    ],
)
def test_limits(pair, ts):
    rep = laws.check_limits(pair, ts)
    assert rep.verdict == "pass", rep.reason
    assert rep.max_abs_residual <= 1e-7


# --------------------------------------------------------------------------
# fixture-driven runner
# --------------------------------------------------------------------------


def test_fixture_file_covers_every_law():
    fx = load_fixtures()
    assert fx["version"]
    assert set(fx["laws"]) == set(LAW_IDS)


@pytest.mark.parametrize(
    "law_id", [x for x in LAW_IDS if x not in ("altforms", "derivatives", "uniqueness")]
)
def test_bundled_law_passes(law_id):
    assert run_law(law_id).verdict == "pass"


def test_bundled_uniqueness_is_inconclusive_with_reason():
    rep = run_law("uniqueness")
    assert rep.verdict == "inconclusive"
    assert rep.reason


def test_negative_control_as_regular_case_fails():
    case = {"X": {"family": "triangular_up", "params": {"b": 1}}, "params": {"alpha": 0}, "theta": 2, "grid": {"n": 10}}
    assert run_law("uniform_prhrm", [case]).verdict == "fail"


def test_run_law_errors():
    with pytest.raises(ParameterError):
        run_law("nonsense")
    with pytest.raises(ParameterError, match="missing field 'pair'"):
        run_law("prop21", [{"grid": {"n": 3}}])
    with pytest.raises(ParameterError):
        run_law("prop21", [{"pair": {"actual": {"family": "uniform"}}}])


def test_parse_helpers():
    pair = WB_PAIR
    assert parse_phi({"kind": "cdf"}, pair).name == "cdf"
    with pytest.raises(ParameterError):
        parse_phi({"kind": "tan"}, pair)
    ws = parse_windows({"windows": [[0.1, 0.2]]}, WB, 42)
    assert ws == [TruncationWindow(0.1, 0.2)]
    with pytest.raises(ParameterError):
        parse_windows({"windows": [[0.1]]}, WB, 42)


@settings(max_examples=15, deadline=None)
@given(theta=st.floats(0.3, 3.0), q=st.floats(0.05, 0.6), width=st.floats(0.1, 0.35))
def test_weibull_characterization_property(theta, q, width):
    X = Weibull(0.5, 1.7)
    w = (X.ppf(q), X.ppf(q + width))
    rep = laws.characterization_residual("weibull", "PHRM", "h2", X, theta, [w])
    assert rep.max_abs_residual <= 1e-6

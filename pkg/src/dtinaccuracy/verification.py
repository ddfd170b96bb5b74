"""Run law verifiers from JSON-style case descriptions.

A *case* is a plain mapping (as found in the bundled fixture file or a user
config) naming the pair, windows and law-specific settings.  ``run_law``
evaluates every case for one law id and merges the per-case reports into a
single :class:`~dtinaccuracy.laws.LawReport`.
"""

from __future__ import annotations

import json
import math
from importlib import resources
from typing import Mapping, Sequence

import numpy as np

from . import laws
from .distributions import ModelPair, MonotoneMap, TruncationWindow, make_distribution
from .exceptions import ParameterError
from .laws import LawReport

LAW_IDS = (
    "prop21",
    "thm21",
    "thm22",
    "decomposition",
    "altforms",
    "derivatives",
    "limits",
    "uniform_prhrm",
    "power_prhrm",
    "weibull_phrm",
    "pareto1_phrm",
    "pareto2_phrm",
    "uniqueness",
    "transform",
)
CHARACTERIZATIONS = ("uniform_prhrm", "power_prhrm", "weibull_phrm", "pareto1_phrm", "pareto2_phrm")
#: a negative control counts as discriminating when its largest residual exceeds this
DISCRIMINATION = 1e-3


def load_fixtures() -> dict:
    """The bundled default fixture set (``{"version": ..., "laws": {law_id: [case, ...]}}``)."""
    text = resources.files("dtinaccuracy").joinpath("fixtures.json").read_text()
    return json.loads(text)


def _require(case, key, law_id):
    if key not in case:
        raise ParameterError(f"{law_id} case is missing field {key!r}")
    return case[key]


def parse_pair(spec) -> ModelPair:
    if not isinstance(spec, Mapping) or "actual" not in spec or "assigned" not in spec:
        raise ParameterError("pair must be a mapping with 'actual' and 'assigned' distribution specs")
    return ModelPair(make_distribution(spec["actual"]), make_distribution(spec["assigned"]))


def parse_phi(spec, pair: ModelPair) -> MonotoneMap:
    if not isinstance(spec, Mapping) or "kind" not in spec:
        raise ParameterError("phi must be a mapping with a 'kind'")
    kind = spec["kind"]
    if kind == "identity":
        return MonotoneMap.identity()
    if kind == "affine":
        return MonotoneMap.affine(float(spec.get("a", 1.0)), float(spec.get("b", 0.0)))
    if kind == "power":
        return MonotoneMap.power(float(_require(spec, "k", "phi")))
    if kind == "reciprocal":
        return MonotoneMap.reciprocal()
    if kind in ("cdf", "sf"):
        dist = make_distribution(spec["dist"]) if "dist" in spec else pair.actual
        return MonotoneMap.cdf_of(dist) if kind == "cdf" else MonotoneMap.sf_of(dist)
    raise ParameterError(f"unknown phi kind {kind!r}; expected identity, affine, power, reciprocal, cdf or sf")


def parse_windows(case, dist, seed: int, law_id: str = "case") -> list[TruncationWindow]:
    """Explicit ``windows`` list, or a ``grid`` spec expanded with :func:`laws.window_grid`."""
    if "windows" in case:
        ws = case["windows"]
        if not isinstance(ws, Sequence) or not ws:
            raise ParameterError(f"{law_id}: 'windows' must be a non-empty list of [t1, t2]")
        out = []
        for w in ws:
            if not isinstance(w, Sequence) or len(w) != 2:
                raise ParameterError(f"{law_id}: each window must be [t1, t2], got {w!r}")
            out.append(TruncationWindow(float(w[0]), float(w[1])))
        return out
    grid = case.get("grid", {"n": 10})
    if not isinstance(grid, Mapping):
        raise ParameterError(f"{law_id}: 'grid' must be a mapping")
    return laws.window_grid(
        dist,
        n=int(grid.get("n", 10)),
        seed=int(grid.get("seed", seed)),
        min_gap=float(grid.get("min_gap", 0.05)),
        q_range=tuple(grid.get("q_range", (0.02, 0.98))),
    )


def parse_points(spec, law_id, field_name) -> list[float]:
    """A list of abscissae or ``{"lo", "hi", "n"}`` for an even grid."""
    if isinstance(spec, Mapping):
        return [float(v) for v in np.linspace(float(spec["lo"]), float(spec["hi"]), int(spec.get("n", 10)))]
    if isinstance(spec, Sequence) and spec:
        return [float(v) for v in spec]
    raise ParameterError(f"{law_id}: {field_name!r} must be a non-empty list or a {{lo, hi, n}} mapping")


def _thetas(case):
    th = case.get("theta", [0.5, 1.0, 2.0])
    return [float(t) for t in (th if isinstance(th, Sequence) else [th])]


def _endpoints(case):
    ep = case.get("endpoint", "both")
    return ["h1", "h2"] if ep == "both" else [ep]


def _one_case(law_id, case, seed, cfg, jobs) -> list[LawReport]:
    if not isinstance(case, Mapping):
        raise ParameterError(f"{law_id}: each case must be a mapping")
    if law_id in CHARACTERIZATIONS:
        family, model = law_id.split("_")
        X = make_distribution(_require(case, "X", law_id))
        grid = parse_windows(case, X, seed, law_id)
        params = case.get("params")
        return [
            laws.characterization_residual(family, model.upper(), ep, X, th, grid, params, cfg, jobs)
            for th in _thetas(case)
            for ep in _endpoints(case)
        ]
    pair = parse_pair(_require(case, "pair", law_id))
    if law_id == "prop21":
        return [laws.check_bound_prop21(pair, parse_windows(case, pair.actual, seed, law_id), cfg, jobs)]
    if law_id == "thm21":
        t1s = parse_points(_require(case, "t1_grid", law_id), law_id, "t1_grid")
        return [laws.check_bound_thm21(pair, float(_require(case, "t2", law_id)), t1s, cfg, jobs)]
    if law_id == "thm22":
        t2s = parse_points(_require(case, "t2_grid", law_id), law_id, "t2_grid")
        if case.get("past_bound"):
            return [laws.check_past_bound(pair, t2s, cfg, jobs)]
        return [laws.check_bound_thm22(pair, float(_require(case, "t1", law_id)), t2s, cfg, jobs)]
    if law_id == "decomposition":
        return [laws.check_decomposition(pair, float(_require(case, "t1", law_id)), float(_require(case, "t2", law_id)), cfg)]
    if law_id == "altforms":
        return [laws.check_alternative_forms(pair, parse_windows(case, pair.actual, seed, law_id), cfg, jobs)]
    if law_id == "derivatives":
        return [laws.check_derivative_relations(pair, parse_windows(case, pair.actual, seed, law_id), jobs=jobs)]
    if law_id == "limits":
        ts = parse_points(_require(case, "ts", law_id), law_id, "ts")
        return [laws.check_limits(pair, ts, cfg=cfg, jobs=jobs)]
    if law_id == "uniqueness":
        w = _require(case, "window", law_id)
        return [laws.uniqueness_probe(pair, TruncationWindow(*w))]
    if law_id == "transform":
        phi = parse_phi(_require(case, "phi", law_id), pair)
        w = _require(case, "window", law_id)
        return [laws.transform_identity(pair, phi, TruncationWindow(*w), cfg)]
    raise ParameterError(f"unknown law id {law_id!r}; expected one of {', '.join(LAW_IDS)}")


def _apply_expectation(rep: LawReport, expect: str) -> LawReport:
    """A case expected to fail passes when it discriminates (max |residual| > DISCRIMINATION)."""
    if expect == "pass":
        return rep
    if expect != "fail":
        raise ParameterError(f"'expect' must be 'pass' or 'fail', got {expect!r}")
    rep.params = {**rep.params, "expect": "fail", "raw_verdict": rep.verdict}
    if rep.verdict == "inconclusive":
        return rep
    if rep.max_abs_residual > DISCRIMINATION:
        rep.verdict, rep.reason = "pass", "negative control discriminated"
    else:
        rep.verdict, rep.reason = "fail", f"negative control not discriminated (max residual <= {DISCRIMINATION})"
    return rep


def merge_reports(law_id: str, reports: Sequence[LawReport]) -> LawReport:
    """Concatenate case reports; fail if any case fails, else inconclusive if any is, else pass."""
    verdicts = [r.verdict for r in reports]
    if "fail" in verdicts:
        verdict = "fail"
    elif "inconclusive" in verdicts:
        verdict = "inconclusive"
    else:
        verdict = "pass"
    reasons = [f"case {i}: {r.reason}" for i, r in enumerate(reports) if r.reason]
    cases = [{**r.params, "verdict": r.verdict, "tolerance": r.tolerance, "n_windows": len(r.windows)} for r in reports]
    return LawReport(
        law_id,
        {"cases": cases},
        [w for r in reports for w in r.windows],
        [x for r in reports for x in r.residuals],
        max((r.tolerance for r in reports), default=laws.EQ_TOL),
        verdict,
        "; ".join(reasons) or None,
        reports[0].kind if reports else "equality",
    )


def run_law(law_id: str, cases: Sequence[Mapping] | None = None, seed: int = 42, cfg=None, jobs: int = 1) -> LawReport:
    """Evaluate every case for ``law_id`` (default: the bundled fixtures) and merge the reports."""
    if law_id not in LAW_IDS:
        raise ParameterError(f"unknown law id {law_id!r}; expected one of {', '.join(LAW_IDS)}")
    if cases is None:
        cases = load_fixtures()["laws"].get(law_id, [])
    if not cases:
        raise ParameterError(f"no cases for law {law_id!r}")
    reports = []
    for case in cases:
        for rep in _one_case(law_id, case, seed, cfg, jobs):
            reports.append(_apply_expectation(rep, case.get("expect", "pass")))
    return merge_reports(law_id, reports)


def suite_exit_code(reports: Sequence[LawReport]) -> int:
    """0 when every verdict is pass or inconclusive with a stated reason, 1 otherwise."""
    for r in reports:
        if r.verdict == "fail":
            return 1
        if r.verdict == "inconclusive" and not r.reason:
            return 1
    return 0


def finite_or_str(x):
    """JSON-safe float: non-finite values become the strings 'inf', '-inf', 'nan'."""
    if isinstance(x, float) and not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return x

"""Command-line front end: ``measure``, ``verify`` and ``reproduce``.

Exit codes: 0 success, 1 a law (or reproduced value) failed, 2 usage or
configuration error.  Reports are deterministic for a fixed config and seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Mapping

from . import __version__
from .distributions import Pareto1, TriangularDown, TriangularUp, Uniform, validate_window
from .exceptions import DivergenceError, DomainError, IntegrandError, ParameterError
from .laws import check_bound_thm21, check_bound_thm22
from .measures import (
    MC_FUNCTIONALS,
    conditional_power_moment,
    gcm,
    geometric_vitality,
    gfr,
    interval_inaccuracy,
    mc_estimate,
    weighted_inaccuracy,
    weighted_interval_inaccuracy,
    weighted_log_moment,
    weighted_past_inaccuracy,
    weighted_residual_inaccuracy,
)
from .distributions import ModelPair
from .quadrature import DEFAULT_CONFIG, QuadratureConfig
from .verification import LAW_IDS, finite_or_str, load_fixtures, parse_pair, parse_windows, run_law, suite_exit_code

WINDOW_FUNCTIONALS = (
    "interval_inaccuracy",
    "weighted_interval_inaccuracy",
    "gcm",
    "geometric_vitality",
    "weighted_log_moment",
    "conditional_power_moment",
    "gfr_h1",
    "gfr_h2",
)
POINT_FUNCTIONALS = ("weighted_residual_inaccuracy", "weighted_past_inaccuracy")
GLOBAL_FUNCTIONALS = ("weighted_inaccuracy", "inaccuracy")
FUNCTIONALS = WINDOW_FUNCTIONALS + POINT_FUNCTIONALS + GLOBAL_FUNCTIONALS


class ConfigError(Exception):
    """Invalid command line or configuration; maps to exit status 2."""


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------


def _clean(obj):
    if isinstance(obj, float):
        return finite_or_str(obj)
    if isinstance(obj, Mapping):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def render_json(doc) -> str:
    return json.dumps(_clean(doc), indent=2, sort_keys=True) + "\n"


def render_csv(rows, columns) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: "" if row.get(k) is None else finite_or_str(row.get(k)) for k in columns})
    return buf.getvalue()


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# config handling
# --------------------------------------------------------------------------


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg


def _quadrature(cfg: Mapping, args) -> QuadratureConfig:
    q = dict(cfg.get("quadrature", {}))
    if not isinstance(cfg.get("quadrature", {}), Mapping):
        raise ConfigError("field 'quadrature' must be an object")
    if args.abs_tol is not None:
        q["abs_tol"] = args.abs_tol
    if args.rel_tol is not None:
        q["rel_tol"] = args.rel_tol
    unknown = set(q) - {"abs_tol", "rel_tol", "max_depth", "max_evaluations", "tail_map"}
    if unknown:
        raise ConfigError(f"unknown quadrature field(s): {sorted(unknown)}")
    if not q:
        return DEFAULT_CONFIG
    try:
        return QuadratureConfig(**q)
    except (TypeError, ParameterError) as exc:
        raise ConfigError(f"field 'quadrature': {exc}") from None


# --------------------------------------------------------------------------
# measure
# --------------------------------------------------------------------------


def _window_value(name, pair, w, opts, qcfg):
    X = pair.actual
    if name == "interval_inaccuracy":
        return interval_inaccuracy(pair, w, method=opts.get("method", "auto"), cfg=qcfg)
    if name == "weighted_interval_inaccuracy":
        return weighted_interval_inaccuracy(pair, w, method=opts.get("method", "auto"), cfg=qcfg)
    if name == "gcm":
        return gcm(X, w, qcfg), "quadrature"
    if name == "geometric_vitality":
        return geometric_vitality(X, w, qcfg), "quadrature"
    if name == "weighted_log_moment":
        return weighted_log_moment(X, w, float(opts.get("shift", 0.0)), qcfg), "quadrature"
    if name == "conditional_power_moment":
        return conditional_power_moment(X, w, float(opts.get("exponent", 2.0)), qcfg), "quadrature"
    if name in ("gfr_h1", "gfr_h2"):
        return gfr(X, w)[0 if name == "gfr_h1" else 1], "closed_form"
    raise ConfigError(f"unknown functional {name!r}")


def _record(name, t1, t2, result):
    if isinstance(result, tuple):
        value, method = result
        return {"functional": name, "t1": t1, "t2": t2, "value": float(value), "method": method, "error_estimate": 0.0, "status": "ok"}
    return {
        "functional": name,
        "t1": t1,
        "t2": t2,
        "value": result.value,
        "method": result.method,
        "error_estimate": result.error_estimate,
        "status": "ok" if result.converged else "not_converged",
    }


def _diverged(name, t1, t2, exc):
    return {"functional": name, "t1": t1, "t2": t2, "value": None, "method": None, "error_estimate": None, "status": "diverged", "message": str(exc)}


def cmd_measure(cfg: Mapping, args) -> tuple[dict, list, int]:
    try:
        pair = parse_pair(cfg.get("pair"))
    except ParameterError as exc:
        raise ConfigError(f"field 'pair': {exc}") from None
    functionals = cfg.get("functionals", ["weighted_interval_inaccuracy"])
    if isinstance(functionals, str):
        functionals = [functionals]
    bad = [f for f in functionals if f not in FUNCTIONALS]
    if bad:
        raise ConfigError(f"field 'functionals': unknown {bad}; expected any of {list(FUNCTIONALS)}")
    options = cfg.get("functional_options", {})
    if not isinstance(options, Mapping):
        raise ConfigError("field 'functional_options' must be an object")
    qcfg = _quadrature(cfg, args)

    windows = []
    if any(f in WINDOW_FUNCTIONALS for f in functionals):
        try:
            windows = parse_windows(cfg, pair.actual, args.seed, "measure")
        except (ParameterError, TypeError, ValueError) as exc:
            raise ConfigError(f"field 'windows': {exc}") from None
        for w in windows:
            rep = validate_window(pair, w)
            if not rep.member:
                raise ConfigError(f"field 'windows': ({w.t1}, {w.t2}) has zero probability under X or Y")
    points = cfg.get("points", [])
    if any(f in POINT_FUNCTIONALS for f in functionals) and not points:
        raise ConfigError("field 'points' is required for residual/past functionals")

    records = []
    for name in functionals:
        opts = options.get(name, {})
        try:
            if name in WINDOW_FUNCTIONALS:
                for w in windows:
                    try:
                        records.append(_record(name, w.t1, w.t2, _window_value(name, pair, w, opts, qcfg)))
                    except (DivergenceError, IntegrandError) as exc:
                        records.append(_diverged(name, w.t1, w.t2, exc))
            elif name in POINT_FUNCTIONALS:
                fn = weighted_residual_inaccuracy if name == "weighted_residual_inaccuracy" else weighted_past_inaccuracy
                for t in points:
                    t = float(t)
                    try:
                        mv = fn(pair, t, method=opts.get("method", "auto"), cfg=qcfg)
                        records.append(_record(name, mv.window.t1, mv.window.t2, mv))
                    except (DivergenceError, IntegrandError) as exc:
                        records.append(_diverged(name, t, None, exc))
            else:
                try:
                    mv = weighted_inaccuracy(pair, weighted=name == "weighted_inaccuracy", cfg=qcfg)
                    records.append(_record(name, mv.window.t1, mv.window.t2, mv))
                except (DivergenceError, IntegrandError) as exc:
                    records.append(_diverged(name, None, None, exc))
        except (ParameterError, DomainError) as exc:
            raise ConfigError(f"functional {name!r}: {exc}") from None

    mc = cfg.get("monte_carlo")
    if mc is not None:
        if not isinstance(mc, Mapping):
            raise ConfigError("field 'monte_carlo' must be an object")
        n = int(mc.get("n", 1_000_000))
        seed = int(mc.get("seed", args.seed))
        for name in functionals:
            if name not in MC_FUNCTIONALS:
                continue
            opts = options.get(name, {})
            for w in windows:
                try:
                    mv = mc_estimate(pair, w, name, n, seed, shift=float(opts.get("shift", 0.0)), exponent=float(opts.get("exponent", 2.0)))
                    records.append(_record(name, w.t1, w.t2, mv))
                except (DivergenceError, IntegrandError) as exc:
                    records.append(_diverged(name, w.t1, w.t2, exc))
                except (ParameterError, DomainError) as exc:
                    raise ConfigError(f"monte_carlo {name!r}: {exc}") from None

    doc = {"command": "measure", "version": __version__, "pair": pair.to_spec(), "records": records}
    return doc, records, 0


MEASURE_COLUMNS = ["functional", "t1", "t2", "value", "method", "error_estimate", "status"]


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------


def cmd_verify(cfg: Mapping, args) -> tuple[dict, list, int]:
    selected = args.laws or cfg.get("laws", ["all"])
    if isinstance(selected, str):
        selected = [selected]
    if "all" in selected:
        selected = list(LAW_IDS)
    unknown = [s for s in selected if s not in LAW_IDS]
    if unknown:
        raise ConfigError(f"unknown law id(s) {unknown}; expected 'all' or any of {list(LAW_IDS)}")
    overrides = cfg.get("cases", {})
    if not isinstance(overrides, Mapping):
        raise ConfigError("field 'cases' must map law ids to lists of cases")
    fixtures = load_fixtures()
    qcfg = _quadrature(cfg, args)
    reports = []
    for law_id in selected:
        cases = overrides.get(law_id, fixtures["laws"].get(law_id))
        try:
            reports.append(run_law(law_id, cases, seed=args.seed, cfg=qcfg if qcfg is not DEFAULT_CONFIG else None, jobs=args.jobs))
        except (ParameterError, DomainError, KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"law {law_id!r}: {exc}") from None
    code = suite_exit_code(reports)
    doc = {
        "command": "verify",
        "version": __version__,
        "fixtures_version": fixtures["version"],
        "seed": args.seed,
        "reports": [r.to_dict() for r in reports],
    }
    rows = [
        {"law_id": r.law_id, "window_index": i, "t1": w[0], "t2": w[1], "residual": res, "tolerance": r.tolerance, "verdict": r.verdict}
        for r in reports
        for i, (w, res) in enumerate(zip(r.windows, r.residuals))
    ]
    rows += [
        {"law_id": r.law_id, "window_index": None, "t1": None, "t2": None, "residual": None, "tolerance": r.tolerance, "verdict": r.verdict}
        for r in reports
        if not r.residuals
    ]
    return doc, rows, code


VERIFY_COLUMNS = ["law_id", "window_index", "t1", "t2", "residual", "tolerance", "verdict"]


# --------------------------------------------------------------------------
# reproduce
# --------------------------------------------------------------------------


def _row(rid, quantity, computed, published, tol, method):
    diff = abs(computed - published)
    return {
        "id": rid,
        "quantity": quantity,
        "method": method,
        "computed": computed,
        "published": published,
        "abs_diff": diff,
        "tolerance": tol,
        "status": "ok" if diff <= tol else "mismatch",
    }


def reproduction_rows(jobs: int = 1) -> list[dict]:
    """Worked examples against their published values."""
    rows = []
    up2, down2 = TriangularUp(2.0), TriangularDown(2.0)
    xy, yx = ModelPair(up2, down2), ModelPair(down2, up2)
    for method, tol in (("closed_form", 1e-9), ("quadrature", 1e-7)):
        full = (0.0, 2.0)
        rows.append(_row("triangular_full", "H(X1,Y1)", interval_inaccuracy(xy, full, method=method).value, 1.5, tol, method))
        rows.append(_row("triangular_full", "H(Y1,X1)", interval_inaccuracy(yx, full, method=method).value, 1.5, tol, method))
        rows.append(_row("triangular_full", "Hw(X1,Y1)", weighted_interval_inaccuracy(xy, full, method=method).value, 22 / 9, tol, method))
        rows.append(_row("triangular_full", "Hw(Y1,X1)", weighted_interval_inaccuracy(yx, full, method=method).value, 5 / 9, tol, method))

    # the printed example: support (0,2) pair listed as -0.1143, support (0,1) pair as -0.2416
    w = (0.2, 0.8)
    rows.append(_row("triangular_truncated", "Hw(0.2,0.8) support (0,2)", weighted_interval_inaccuracy(xy, w).value, -0.1143, 5e-4, "quadrature"))
    up1, down1 = TriangularUp(1.0), TriangularDown(1.0)
    rows.append(
        _row("triangular_truncated", "Hw(0.2,0.8) support (0,1)", weighted_interval_inaccuracy(ModelPair(up1, down1), w).value, -0.2416, 5e-4, "quadrature")
    )

    # triangular actual, uniform assigned: closed form m_X ln(t2 - t1) against quadrature
    t1, t2 = 0.25, 0.75
    formula = 2 * (t1**2 + t1 * t2 + t2**2) / (3 * (t1 + t2)) * math.log(t2 - t1)
    ex22 = ModelPair(up1, Uniform(0.0, 2.0))
    rows.append(_row("triangular_uniform", "Hw(0.25,0.75) triangular/uniform", weighted_interval_inaccuracy(ex22, (t1, t2), method="quadrature").value, formula, 1e-8, "quadrature"))

    bound_cases = (
        ("bound_lower", "part (i) Pareto-I/uniform, t2=8", check_bound_thm21(ModelPair(Uniform(1.0, 10.0), Pareto1(1.0, 1.0)), 8.0, [1.2 + 0.3 * i for i in range(10)], jobs=jobs)),
        ("bound_lower", "part (ii) triangular/uniform, t2=0.9", check_bound_thm21(ex22, 0.9, [0.05 + 0.075 * i for i in range(11)], jobs=jobs)),
        ("bound_upper", "upper bound triangular/uniform, t1=0.1", check_bound_thm22(ex22, 0.1, [0.3 + 0.065 * i for i in range(11)], jobs=jobs)),
    )
    for rid, quantity, rep in bound_cases:
        rows.append(
            {
                "id": rid,
                "quantity": quantity,
                "method": "bound",
                "computed": min(rep.residuals) if rep.residuals else None,
                "published": "bound holds",
                "abs_diff": None,
                "tolerance": rep.tolerance,
                "status": "ok" if rep.verdict == "pass" else rep.verdict,
            }
        )
    return rows


def cmd_reproduce(cfg: Mapping, args) -> tuple[dict, list, int]:
    rows = reproduction_rows(args.jobs)
    code = 0 if all(r["status"] == "ok" for r in rows) else 1
    return {"command": "reproduce", "version": __version__, "rows": rows}, rows, code


REPRODUCE_COLUMNS = ["id", "quantity", "method", "computed", "published", "abs_diff", "tolerance", "status"]


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON job configuration")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker threads for window grids")
    common.add_argument("--seed", type=int, default=42, help="seed for window grids and Monte Carlo")
    common.add_argument("--abs-tol", type=float, default=None)
    common.add_argument("--rel-tol", type=float, default=None)

    parser = argparse.ArgumentParser(prog="dtinaccuracy", description="Weighted interval inaccuracy for doubly truncated lifetimes.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("measure", parents=[common], help="compute measures for a configured pair")
    v = sub.add_parser("verify", parents=[common], help="run law verifiers")
    v.add_argument("laws", nargs="*", help="law ids, or 'all' (default: the config's 'laws' field, else all)")
    sub.add_parser("reproduce", parents=[common], help="compare worked examples with published values")
    return parser


COMMANDS = {
    "measure": (cmd_measure, MEASURE_COLUMNS, "records"),
    "verify": (cmd_verify, VERIFY_COLUMNS, "reports"),
    "reproduce": (cmd_reproduce, REPRODUCE_COLUMNS, "rows"),
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    fn, columns, _ = COMMANDS[args.command]
    try:
        if args.jobs < 1:
            raise ConfigError("--jobs must be at least 1")
        cfg = _load_config(args.config)
        doc, rows, code = fn(cfg, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = render_json(doc) if args.format == "json" else render_csv(rows, columns)
    try:
        _emit(text, args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out!r}: {exc.strerror}", file=sys.stderr)
        return 2
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

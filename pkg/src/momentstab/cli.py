"""Command line: classify points, sweep grids and parameters, verify, print.

Exit codes: 0 the command completed (classification verdicts of any kind
included), 2 the input was unusable (files, points, flags), 3 the numerics
failed hard (flow blew up).  Results go to stdout or --output as JSON
(classify) or CSV (sweep); certificates embed exact rationals as strings so
a reader can recheck them without this package.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
import time

import numpy as np

from .flow import (
    FlowConfig,
    FlowError,
    SemistableWitness,
    Undetermined,
    UnstableCertificate,
)
from .groups import DomainError, StructuralError
from .moments import LogProfile, MomentEvaluator, ProductSum, RadialPotential
from .scenario_io import (
    complex_pair,
    fraction_str,
    load_scenario,
    scenario_from_dict,
    scenario_to_dict,
)
from .scenarios import (
    _slice_data,
    build_extension_point,
    builtin_scenario,
    classify_N_semistable,
    default_sample,
)
from .verify import SUITE_NAMES, run_suite

RESULT_SCHEMA = "momentstab.result/v1"


# ---------------------------------------------------------------------------
# shared argument handling

def _add_scenario_args(sub) -> None:
    src = sub.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", metavar="TAG",
                     help="built-in scenario tag, e.g. sl2xsl2_p2 or "
                          "sl2_log_c(0.5)")
    src.add_argument("--file", metavar="PATH",
                     help="scenario file to load")
    sub.add_argument("--c", type=float, default=None,
                     help="parameter for parametrized built-ins")
    sub.add_argument("--max-iters", type=int, default=None)
    sub.add_argument("--tol", type=float, default=None)


def _scenario_from_args(args):
    if args.builtin is not None:
        scenario = builtin_scenario(args.builtin, c=args.c)
        cfg = FlowConfig()
    else:
        if args.c is not None:
            raise StructuralError("--c applies to built-in tags only")
        scenario, cfg = load_scenario(args.file)
    overrides = {}
    if args.max_iters is not None:
        overrides["max_iters"] = args.max_iters
    if args.tol is not None:
        overrides["tol"] = args.tol
    if overrides:
        cfg = dataclasses.replace(cfg, **overrides)
    return scenario, cfg


def _parse_point(text: str) -> np.ndarray:
    parts = [chunk.strip() for chunk in text.split(",")]
    if not parts or any(not chunk for chunk in parts):
        raise StructuralError(f"malformed point {text!r}")
    try:
        values = [complex(chunk) for chunk in parts]
    except ValueError as exc:
        raise StructuralError(f"malformed point {text!r}: {exc}") from exc
    return np.asarray(values, dtype=complex)


def _open_output(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


# ---------------------------------------------------------------------------
# verdict serialization

def _rational_vector(vec) -> list:
    return [fraction_str(x) for x in vec]


def _certificate_payload(verdict: UnstableCertificate) -> dict:
    data = verdict.data
    if verdict.kind == "cone_obstruction":
        cert = data["certificate"]
        return {
            "verdict": cert.verdict,
            "cone_generators": [_rational_vector(g)
                                for g in cert.cone.generators],
            "targets": [_rational_vector(t) for t in cert.target_points],
            "separators": [_rational_vector(s) for s in cert.separators],
        }
    if verdict.kind == "slice_infimum":
        (z, r), xrep = data["at"]
        return {
            "value": float(data["value"]),
            "at": {"z": complex_pair(z), "r": float(r),
                   "projective": [complex_pair(v) for v in np.atleast_1d(xrep)]},
        }
    # constant_norm
    return {"value": float(data["value"]), "spread": float(data["spread"])}


def _point_payload(x: np.ndarray) -> list:
    return [complex_pair(v) for v in np.asarray(x, dtype=complex).reshape(-1)]


def _result_record(x, verdict, wall: float) -> dict:
    record = {
        "point": _point_payload(x),
        "verdict": "undetermined",
        "kind": None,
        "residual": None,
        "iterations": None,
        "reason": None,
        "certificate": None,
        "wall_time": wall,
    }
    if isinstance(verdict, SemistableWitness):
        record["verdict"] = "semistable"
        record["residual"] = float(verdict.residual)
        record["iterations"] = int(verdict.iterations)
    elif isinstance(verdict, UnstableCertificate):
        record["verdict"] = "unstable"
        record["kind"] = verdict.kind
        record["certificate"] = _certificate_payload(verdict)
        if verdict.kind == "constant_norm":
            record["residual"] = float(verdict.data["value"])
    elif isinstance(verdict, Undetermined):
        record["residual"] = float(verdict.best_residual)
        record["iterations"] = int(verdict.summary.get("iterations", 0))
        record["reason"] = str(verdict.summary.get("reason", ""))
    return record


# ---------------------------------------------------------------------------
# classify

def _cmd_classify(args) -> int:
    scenario, cfg = _scenario_from_args(args)
    if not args.point:
        raise StructuralError("classify needs at least one --point")
    results = []
    for text in args.point:
        x = _parse_point(text)
        start = time.perf_counter()
        verdict = classify_N_semistable(
            scenario, x, cfg, rng=np.random.default_rng(args.seed))
        results.append(_result_record(x, verdict,
                                      time.perf_counter() - start))
    doc = {
        "schema": RESULT_SCHEMA,
        "scenario": scenario.tag,
        "seed": args.seed,
        "results": results,
    }
    out, close = _open_output(args.output)
    try:
        json.dump(doc, out, indent=2)
        out.write("\n")
    finally:
        if close:
            out.close()
    return 0


# ---------------------------------------------------------------------------
# sweep

def _verdict_cell(verdict) -> str:
    if isinstance(verdict, SemistableWitness):
        return "semistable"
    if isinstance(verdict, UnstableCertificate):
        return f"unstable:{verdict.kind}"
    return "undetermined"


def _residual_cell(verdict) -> str:
    if isinstance(verdict, SemistableWitness):
        return repr(float(verdict.residual))
    if isinstance(verdict, Undetermined):
        return repr(float(verdict.best_residual))
    if isinstance(verdict, UnstableCertificate) \
            and verdict.kind == "constant_norm":
        return repr(float(verdict.data["value"]))
    return ""


def _point_cell(x) -> str:
    return ";".join(repr(complex(v)) for v in np.asarray(x).reshape(-1))


def _parse_param(spec: str):
    name, _, rng = spec.partition("=")
    if name != "c":
        raise StructuralError(f"unknown sweep parameter {name!r}")
    pieces = rng.split(":")
    if len(pieces) != 3:
        raise StructuralError("parameter range must be start:stop:count")
    try:
        a, b, n = float(pieces[0]), float(pieces[1]), int(pieces[2])
    except ValueError as exc:
        raise StructuralError(f"bad parameter range {rng!r}") from exc
    if n < 0:
        raise StructuralError("parameter count must be nonnegative")
    return np.linspace(a, b, n) if n else []


def _with_c(scenario, c: float):
    if not isinstance(scenario.gn_model, RadialPotential) \
            or not isinstance(scenario.gn_model.profile, LogProfile):
        raise StructuralError(
            "parameter c applies to radial log scenarios only")
    doc = scenario_to_dict(scenario)
    doc["orbit"]["c"] = float(c)
    if "slice_c" in doc:
        doc["slice_c"] = float(c)
    if scenario.tag.startswith("sl2_log_c"):
        doc["tag"] = f"sl2_log_c({c:g})"
    rebuilt, _ = scenario_from_dict(doc)
    return rebuilt

def _sweep_rows(scenario, cfg, grid: int, seed: int, param: str):
    for x in default_sample(scenario, grid, seed=seed):
        verdict = classify_N_semistable(
            scenario, x, cfg, rng=np.random.default_rng(seed))
        sl = _slice_data(scenario)
        yield [
            param,
            _point_cell(x),
            _verdict_cell(verdict),
            _residual_cell(verdict),
            "" if sl is None else repr(float(sl.value)),
            "" if sl is None else str(bool(sl.boundary)).lower(),
        ]


def _cmd_sweep(args) -> int:
    scenario, cfg = _scenario_from_args(args)
    if args.param is not None:
        jobs = [(f"c={c:g}", _with_c(scenario, float(c)))
                for c in _parse_param(args.param)]
    else:
        jobs = [("", scenario)]
    out, close = _open_output(args.output)
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["param", "point", "verdict", "residual",
                         "slice_infimum", "slice_boundary"])
        for label, s in jobs:
            for row in _sweep_rows(s, cfg, args.grid, args.seed, label):
                writer.writerow(row)
    finally:
        if close:
            out.close()
    return 0


# ---------------------------------------------------------------------------
# verify

def _cmd_verify(args) -> int:
    names = [args.suite] if args.suite else list(SUITE_NAMES)
    ok = True
    for name in names:
        report = run_suite(name, seed=args.seed)
        for line in report.lines():
            print(line)
        ok &= report.passed
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# moment printout

def _format_block(block: np.ndarray) -> str:
    rows = []
    for row in np.atleast_2d(block):
        rows.append("  ".join(f"{z.real:+.12f}{z.imag:+.12f}j" for z in row))
    return "\n".join("    " + r for r in rows)


def _print_blocks(beta, factors) -> None:
    for name, block in zip(factors, beta.blocks):
        print(f"  factor {name}:")
        print(_format_block(block))


def _cmd_moment(args) -> int:
    scenario, _ = _scenario_from_args(args)
    x = _parse_point(args.point)
    p = build_extension_point(scenario, x)
    if args.orbit_point is not None:
        if scenario.reductive_only:
            raise StructuralError(
                "--orbit-point needs a scenario with an orbit factor")
        v = _parse_point(args.orbit_point)
        if v.shape != scenario.v_base.shape:
            raise StructuralError("orbit point has the wrong length")
        p = (v,) + tuple(p[1:])
    ev = scenario.evaluator
    beta = ev.moment(p)
    factors = scenario.group.factors
    print(f"scenario {scenario.tag} at point {args.point}")
    model = scenario.model
    if isinstance(model, ProductSum):
        for idx, (part, slot) in enumerate(zip(model.parts, p)):
            part_beta = MomentEvaluator(part).moment(slot)
            print(f"part {idx} ({type(part).__name__}):")
            _print_blocks(part_beta, factors)
    print("sum:")
    _print_blocks(beta, factors)
    print(f"trace norm: {beta.norm():.12f}")
    top = max(float(np.max(np.abs(b))) for b in beta.blocks)
    print(f"max entry modulus: {top:.6e}")
    return 0


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="momentstab",
        description="Moment-map semistability: classification, sweeps, "
                    "verification, and moment printouts.")
    subs = parser.add_subparsers(dest="command", required=True)

    p_classify = subs.add_parser(
        "classify", help="classify points of a scenario domain")
    _add_scenario_args(p_classify)
    p_classify.add_argument("--point", action="append", default=[],
                            metavar="C0,C1,...",
                            help="domain point, comma-separated complex "
                                 "components (repeatable)")
    p_classify.add_argument("--seed", type=int, default=0)
    p_classify.add_argument("--output", default=None,
                            help="write JSON here instead of stdout")
    p_classify.set_defaults(func=_cmd_classify)

    p_sweep = subs.add_parser(
        "sweep", help="classify a deterministic grid, CSV output")
    _add_scenario_args(p_sweep)
    p_sweep.add_argument("--grid", type=int, default=20,
                         help="number of sampled domain points")
    p_sweep.add_argument("--param", default=None, metavar="c=A:B:N",
                         help="sweep a model parameter over a linear range")
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--output", default=None,
                         help="write CSV here instead of stdout")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_verify = subs.add_parser(
        "verify", help="run the named property suites")
    p_verify.add_argument("--suite", choices=SUITE_NAMES, default=None,
                          help="one suite (default: all)")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.set_defaults(func=_cmd_verify)

    p_moment = subs.add_parser(
        "moment", help="print the moment blocks at one point")
    _add_scenario_args(p_moment)
    p_moment.add_argument("--point", required=True, metavar="C0,C1,...")
    p_moment.add_argument("--orbit-point", default=None, metavar="C0,C1,...",
                          help="override the orbit-factor coordinates")
    p_moment.add_argument("--seed", type=int, default=0)
    p_moment.set_defaults(func=_cmd_moment)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except FlowError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except (StructuralError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

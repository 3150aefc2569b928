"""Command-line surface: norms, Carleson certification, decomposition reports,
Moebius diagnostics, corpus listing, and the acceptance suite.

Exit codes: 0 success (possibly with warnings), 1 input error, 2 the
computation finished but certified a divergent result (a valid answer that
scripts must be able to tell apart).
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .carleson import carleson_constant, slice_carleson_constant
from .config import RunConfig, dump_report
from .corpus import build_corpus, classify, classification_units, verdict_mismatches
from .errors import SliceballError
from .moebius import MoebiusParam, moebius_check
from .norms import (ArcFamily, bloch_norm, bmo_seminorm_global, dirichlet_inner,
                    dual_pairing, hardy_norm, star_grid, star_norm)
from .quaternion import Quaternion, imaginary_unit, sample_sphere, to_slice
from .specs import (function_spec_from_file, measure_spec_from_file,
                    quaternion_from_json)
from .acceptance import ALL_CHECKS

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_DIVERGED = 2


def _norm_units(cfg: RunConfig):
    return sample_sphere(6, "axes") + sample_sphere(
        2 * cfg.sup_units_theta ** 2, "product")


def cmd_norm(args, cfg: RunConfig) -> int:
    f = function_spec_from_file(args.function)
    units = _norm_units(cfg)
    arcs = ArcFamily(cfg.arc_depth, cfg.arc_samples_per_cell)
    diverged = False
    if args.space == "hardy":
        rep = hardy_norm(f, args.p, units, ladder=cfg.ladder,
                         circle_nodes=cfg.circle_nodes,
                         order=cfg.extrapolation_order)
        out = rep.to_dict()
        diverged = rep.flags["diverged"]
    elif args.space == "bmo":
        rep = bmo_seminorm_global(f, units, arcs, cfg.r_boundary)
        out = rep.to_dict()
        out["norm"] = abs(f.value_at_zero()) + rep.value
    elif args.space == "vmo":
        from .norms import vmo_modulus
        per = [vmo_modulus(f, u, 2.0 * math.pi, arcs, cfg.r_boundary) for u in units[:6]]
        out = {"per_slice": per, "is_vmo": all(p["is_vmo"] for p in per),
               "value": max(p["modulus"] for p in per)}
    elif args.space == "bloch":
        rep = bloch_norm(f, units)
        out = rep.to_dict()
    elif args.space == "dirichlet":
        res = dirichlet_inner(f, f, units[0])
        out = {"value": abs(res["quadrature"]), "quadrature": res["quadrature"].to_list(),
               "coefficient": res["coefficient"].to_list() if res["coefficient"] else None}
    elif args.space == "star":
        out = {"value": star_norm(f, units[0], star_grid(),
                                  r_boundary=cfg.r_boundary)}
    else:
        raise SliceballError(f"unknown space {args.space}")
    out["config"] = cfg.to_dict()
    dump_report(out, args.out)
    return EXIT_DIVERGED if diverged else EXIT_OK


def cmd_carleson(args, cfg: RunConfig) -> int:
    m = measure_spec_from_file(args.measure)
    h_rungs = [0.5 ** k for k in range(cfg.h_max_exp, cfg.h_min_exp + 1)]
    theta = None if cfg.theta_grid == 256 else np.linspace(0.0, math.pi, cfg.theta_grid)
    rep = carleson_constant(m, theta_grid=theta, h_rungs=h_rungs)
    out = rep.to_dict()
    out["config"] = cfg.to_dict()
    dump_report(out, args.out)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(rep.profile_csv())
    return EXIT_OK if rep.verdicts["carleson"] else EXIT_DIVERGED


def cmd_decompose(args, cfg: RunConfig) -> int:
    m = measure_spec_from_file(args.measure)
    out = {"name": m.name, "config": cfg.to_dict()}
    if m.nu_atoms:
        out["nu_atoms"] = len(m.nu_atoms)
        out["nu_total"] = m.nu_total()
        out["mu_R_atoms"] = len(m.mu_R.atoms)
    else:
        units = sample_sphere(6, "axes")
        weights = {}
        flags = {}
        for u in units:
            try:
                weights[str(u.to_list())] = m.slice_weight(np.array(u.vec))
            except SliceballError as exc:
                weights[str(u.to_list())] = None
                flags[str(u.to_list())] = type(exc).__name__
        out["slice_weights"] = weights
        out["flags"] = flags
        out["nu_total"] = m.nu_total() if not flags else None
    sc = slice_carleson_constant(m)
    out["uniform_slice_constant"] = sc["uniform_constant"]
    out["uniform_slice_carleson"] = sc["uniform_slice_carleson"]
    dump_report(out, args.out)
    return EXIT_OK


def cmd_moebius_check(args, cfg: RunConfig) -> int:
    a = quaternion_from_json(json.loads(args.a))
    unit = imaginary_unit(quaternion_from_json(json.loads(args.i)))
    sc = to_slice(a)
    if abs(sc.unit - unit) > 1e-9 and sc.x1 > 1e-12:
        print("warning: parameter does not lie in the plane of the given unit",
              file=sys.stderr)
    out = moebius_check(MoebiusParam(complex(sc.x0, sc.x1), unit))
    out["config"] = cfg.to_dict()
    dump_report(out, args.out)
    return EXIT_OK


def cmd_corpus(args, cfg: RunConfig) -> int:
    rows = []
    for e in build_corpus(cfg.seed):
        row = {"id": e.id, "expected": e.expected, "provenance": e.provenance}
        if args.classify:
            flags = classify(e)
            row["computed"] = {k: v for k, v in flags.items() if not k.startswith("_")}
            row["mismatches"] = verdict_mismatches(e, flags)
        rows.append(row)
    out = {"entries": rows, "config": cfg.to_dict()}
    if args.out:
        dump_report(out, args.out)
    else:
        for row in rows:
            print(f"{row['id']:26s} {row['provenance']}")
    return EXIT_OK


def cmd_suite(args, cfg: RunConfig) -> int:
    failures = 0
    results = []
    for name, fn in ALL_CHECKS:
        if args.only and name != args.only:
            continue
        res = fn()
        results.append(res)
        print(res.line())
        if not res.passed:
            failures += 1
    if args.out:
        dump_report({"results": [{"id": r.check_id, "passed": r.passed,
                                  "elapsed": r.elapsed, "details": _jsonable(r.details)}
                                 for r in results],
                     "config": cfg.to_dict()}, args.out)
    return EXIT_OK if failures == 0 else 1


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Quaternion):
        return obj.to_list()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sliceball",
        description="Function-space numerics on the quaternionic unit ball")
    ap.add_argument("--config", help="key = value config file "
                                     "(or set SLICEBALL_CONFIG)")
    ap.add_argument("--circle-nodes", type=int, help="override circle rule size")
    ap.add_argument("--disk-nodes", type=int, help="override radial disk nodes")
    ap.add_argument("--sphere-nodes", type=int, help="override sphere theta nodes")
    ap.add_argument("--ladder-depth", type=int, help="override radial ladder depth")
    ap.add_argument("--jobs", type=int, help="worker pool size")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", help="compute a function-space norm")
    p.add_argument("--space", required=True,
                   choices=["hardy", "bmo", "vmo", "bloch", "dirichlet", "star"])
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--function", required=True, help="function spec JSON file")
    p.add_argument("--out", default="norm_report.json")

    p = sub.add_parser("carleson", help="certify Carleson box bounds")
    p.add_argument("--measure", required=True, help="measure spec JSON file")
    p.add_argument("--out", default="carleson_report.json")
    p.add_argument("--csv", help="also write the h-profile as CSV")

    p = sub.add_parser("decompose", help="slice-decomposition report")
    p.add_argument("--measure", required=True)
    p.add_argument("--out", default="decompose_report.json")

    p = sub.add_parser("moebius-check", help="verbatim vs extension comparison")
    p.add_argument("--a", required=True, help="parameter as JSON [w,x1,x2,x3]")
    p.add_argument("--i", required=True, help="unit as JSON [0,x1,x2,x3]")
    p.add_argument("--out", default="moebius_report.json")

    p = sub.add_parser("corpus", help="list (and optionally classify) the corpus")
    p.add_argument("--classify", action="store_true")
    p.add_argument("--out")

    p = sub.add_parser("suite", help="run the acceptance battery")
    p.add_argument("--only", help="run a single named check")
    p.add_argument("--out")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig.from_file(args.config) if args.config else RunConfig.load_default()
        overrides = {}
        if args.circle_nodes:
            overrides["circle_nodes"] = args.circle_nodes
        if args.disk_nodes:
            overrides["disk_radial"] = args.disk_nodes
        if args.sphere_nodes:
            overrides["sphere_theta"] = args.sphere_nodes
        if args.ladder_depth:
            overrides["ladder_max"] = args.ladder_depth
        if args.jobs:
            overrides["jobs"] = args.jobs
        if overrides:
            cfg = cfg.replace(**overrides)
        handler = {"norm": cmd_norm, "carleson": cmd_carleson,
                   "decompose": cmd_decompose, "moebius-check": cmd_moebius_check,
                   "corpus": cmd_corpus, "suite": cmd_suite}[args.command]
        return handler(args, cfg)
    except (SliceballError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

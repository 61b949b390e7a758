"""Command-line front end.

Subcommands: constants, region, estimate, simulate, compare, tune,
reproduce-tables.  Systems come from the built-in example registry
(--example ex1|ex2) or a declarative JSON document (--config).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .compare import compare, emit_figure_data
from .examples import TABLE_PRESETS, ExampleSpec, SystemBundle, build_example
from .history import HistorySegment
from .integrator import integrate, lyapunov_trace
from .krasovskii import WeightSplit, krasovskii_certificate
from .lyapunov import LyapunovData, validate_lyapunov
from .razumikhin import razumikhin_certificate
from .systems import GrowthConstants, HomogeneousRHS, estimate_growth_constants
from .tables import reproduce_all, reproduce_table, write_reports_csv
from .tuning import TuningProblem, tune


def _load_json_arg(value):
    text = value
    p = Path(value)
    if p.exists():
        text = p.read_text(encoding="utf-8")
    return json.loads(text)


def _bundle(args) -> SystemBundle:
    if getattr(args, "example", None):
        return build_example(ExampleSpec(args.example))
    if getattr(args, "config", None):
        spec = _load_json_arg(args.config)
        rhs = HomogeneousRHS.from_dict(spec)
        lyap = LyapunovData.from_dict(rhs.n, spec["lyapunov"])
        if "growth" in spec:
            g = spec["growth"]
            growth = GrowthConstants(m=g["m"], m1=g["m1"], m2=g["m2"])
        else:
            growth = estimate_growth_constants(rhs)
        return SystemBundle(rhs=rhs, lyap=lyap, growth=growth)
    raise SystemExit("either --example or --config is required")


def _history(args, bundle) -> HistorySegment:
    rhs = bundle.rhs
    if getattr(args, "phi", None):
        return HistorySegment.from_dict(_load_json_arg(args.phi), h=rhs.h)
    if getattr(args, "example", None):
        for preset in TABLE_PRESETS.values():
            if preset.example.name == args.example:
                return HistorySegment.constant(list(preset.phi_constant), rhs.h)
    raise SystemExit("an initial history is required (--phi)")


def _emit(args, payload):
    text = json.dumps(payload, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _lk_preset_params(args):
    if getattr(args, "preset", None):
        lk = dict(TABLE_PRESETS[args.preset].lk)
        return {"chi": lk["chi"], "w1": lk["w1"], "w2": lk["w2"],
                "delta": lk["delta"]}
    return {}


def cmd_constants(args):
    bundle = _bundle(args)
    rhs, lyap, growth = bundle
    sampled = estimate_growth_constants(rhs, sample_count=args.samples)
    report = validate_lyapunov(lyap, rhs, sample_count=args.samples)
    _emit(args, {
        "n": rhs.n, "mu": rhs.mu, "h": rhs.h,
        "growth": growth.to_dict(), "growth_sampled": sampled.to_dict(),
        "lyapunov": lyap.to_dict(),
        "lyapunov_validation": report.to_dict(),
        "lyapunov_ok": report.passed(),
    })
    return 0


def cmd_region(args):
    bundle = _bundle(args)
    rhs, lyap, growth = bundle
    out = {}
    lk_params = _lk_preset_params(args)
    lr_delta = TABLE_PRESETS[args.preset].lr.get("delta") if args.preset else args.delta
    if args.method in ("both", "razumikhin"):
        lr = razumikhin_certificate(lyap, growth, rhs.h, rhs.mu,
                                    alpha=args.alpha, delta=lr_delta)
        out["razumikhin"] = lr.to_dict()
    if args.method in ("both", "krasovskii"):
        weights = None
        if "w1" in lk_params:
            weights = WeightSplit.from_rate(lyap.w, rhs.h, w1=lk_params["w1"],
                                            w2=lk_params["w2"])
        lk = krasovskii_certificate(rhs, lyap, growth, weights=weights,
                                    chi=lk_params.get("chi"),
                                    delta=lk_params.get("delta", args.delta))
        out["krasovskii"] = lk.to_dict()
    out["radii"] = {k: v["radius"] for k, v in out.items()}
    _emit(args, out)
    return 0


def cmd_estimate(args):
    return cmd_region(args)


def cmd_simulate(args):
    bundle = _bundle(args)
    rhs, lyap, _ = bundle
    phi = _history(args, bundle)
    traj = integrate(rhs, phi, args.horizon, step=args.step,
                     output="full" if args.full else "auto")
    if args.out:
        traj.to_csv(args.out, lyap=lyap)
    else:
        times, v = lyapunov_trace(traj, lyap)
        norms = traj.norms()
        print("t,norm,V")
        for t, nv, vv in zip(times, norms, v):
            print(f"{t:.17g},{nv:.17g},{vv:.17g}")
    return 0


def cmd_compare(args):
    bundle = _bundle(args)
    phi = _history(args, bundle) if (args.phi or args.example) else None
    lk_params = _lk_preset_params(args)
    delta = args.delta
    if delta is None and args.preset:
        delta = TABLE_PRESETS[args.preset].lk["delta"]
    if delta is None:
        raise SystemExit("--delta (or --preset) is required for compare")
    lk_params.pop("delta", None)
    report = compare(bundle, delta, lk_params=lk_params, alpha=args.alpha,
                     phi=phi, T=args.horizon, step=args.step)
    if args.csv and report.samples is not None:
        import csv as _csv
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            wr = _csv.writer(fh)
            keys = list(report.samples)
            wr.writerow(keys)
            for row in zip(*(np.asarray(report.samples[k]) for k in keys)):
                wr.writerow([format(v, ".17g") for v in row])
    _emit(args, report.to_dict())
    return 0


def cmd_figure(args):
    bundle = _bundle(args)
    rhs, lyap, growth = bundle
    phi = _history(args, bundle)
    lk_params = _lk_preset_params(args)
    delta = args.delta or (TABLE_PRESETS[args.preset].lk["delta"] if args.preset
                           else None)
    lr = razumikhin_certificate(lyap, growth, rhs.h, rhs.mu, alpha=args.alpha,
                                delta=delta)
    weights = None
    if "w1" in lk_params:
        weights = WeightSplit.from_rate(lyap.w, rhs.h, w1=lk_params["w1"],
                                        w2=lk_params["w2"])
    lk = krasovskii_certificate(rhs, lyap, growth, weights=weights,
                                chi=lk_params.get("chi"), delta=delta)
    out = args.out or "figure.csv"
    emit_figure_data(bundle, lr, lk, phi, args.horizon, out, step=args.step)
    print(f"wrote {out}")
    return 0


def cmd_tune(args):
    if args.config:
        spec = _load_json_arg(args.config)
        if "example" in spec:
            bundle = build_example(ExampleSpec(spec["example"]))
        else:
            rhs = HomogeneousRHS.from_dict(spec["system"])
            lyap = LyapunovData.from_dict(rhs.n, spec["system"]["lyapunov"])
            growth = estimate_growth_constants(rhs)
            bundle = SystemBundle(rhs=rhs, lyap=lyap, growth=growth)
        problem = TuningProblem(
            system=bundle,
            target=spec.get("target", "max_radius"),
            method=spec.get("method", "krasovskii-scalar"),
            bounds={k: tuple(v) for k, v in spec.get("bounds", {}).items()},
            budget=int(spec.get("budget", 10_000)),
            seed=int(spec.get("seed", 0)))
    else:
        bundle = _bundle(args)
        problem = TuningProblem(system=bundle, target=args.target,
                                method=args.method_name, budget=args.budget,
                                seed=args.seed)
    result = tune(problem)
    _emit(args, result.to_dict())
    return 0


def cmd_reproduce_tables(args):
    reports = reproduce_all() if args.table == "all" \
        else [reproduce_table(args.table)]
    for rep in reports:
        for line in rep.summary_lines():
            print(line)
    if args.out:
        write_reports_csv(reports, args.out)
    ok = all(rep.core_passed for rep in reports)
    print(f"non-flagged cells: {'all pass' if ok else 'FAILURES'}")
    return 0 if ok else 1


def build_parser():
    p = argparse.ArgumentParser(
        prog="delaycert",
        description="Stability certificates and solution envelopes for "
                    "homogeneous time-delay systems")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, history=False):
        sp.add_argument("--example", choices=["ex1", "ex2"])
        sp.add_argument("--config", help="declarative system JSON (file or inline)")
        sp.add_argument("--out", help="output file (JSON or CSV by command)")
        if history:
            sp.add_argument("--phi", help="history JSON (file or inline)")
            sp.add_argument("--step", type=float, default=None)
            sp.add_argument("--horizon", type=float, default=None)

    sp = sub.add_parser("constants", help="growth and Lyapunov constants")
    common(sp)
    sp.add_argument("--samples", type=int, default=10_000)
    sp.set_defaults(fn=cmd_constants)

    for name, help_ in (("region", "attraction-region radii"),
                        ("estimate", "solution-envelope certificates")):
        sp = sub.add_parser(name, help=help_)
        common(sp)
        sp.add_argument("--method", choices=["both", "razumikhin", "krasovskii"],
                        default="both")
        sp.add_argument("--preset", choices=list(TABLE_PRESETS))
        sp.add_argument("--alpha", type=float, default=2.0)
        sp.add_argument("--delta", type=float, default=None)
        sp.set_defaults(fn=cmd_region if name == "region" else cmd_estimate)

    sp = sub.add_parser("simulate", help="integrate and dump a CSV trajectory")
    common(sp, history=True)
    sp.add_argument("--full", action="store_true",
                    help="store every node (memory permitting)")
    sp.set_defaults(fn=cmd_simulate, horizon_required=True)

    sp = sub.add_parser("compare", help="both certificates at equal delta")
    common(sp, history=True)
    sp.add_argument("--preset", choices=list(TABLE_PRESETS))
    sp.add_argument("--alpha", type=float, default=2.0)
    sp.add_argument("--delta", type=float, default=None)
    sp.add_argument("--csv", help="also dump envelope/trajectory samples")
    sp.set_defaults(fn=cmd_compare)

    sp = sub.add_parser("figure-data", help="CSV for the envelope figures")
    common(sp, history=True)
    sp.add_argument("--preset", choices=list(TABLE_PRESETS))
    sp.add_argument("--alpha", type=float, default=2.0)
    sp.add_argument("--delta", type=float, default=None)
    sp.set_defaults(fn=cmd_figure)

    sp = sub.add_parser("tune", help="search the free certificate parameters")
    common(sp)
    sp.add_argument("--target", choices=["max_radius", "min_c1", "max_c2"],
                    default="max_radius")
    sp.add_argument("--method-name", dest="method_name",
                    choices=["razumikhin", "krasovskii-general",
                             "krasovskii-scalar"],
                    default="krasovskii-scalar")
    sp.add_argument("--budget", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(fn=cmd_tune)

    sp = sub.add_parser("reproduce-tables", help="recompute the benchmark tables")
    sp.add_argument("--table", choices=["1", "2", "3", "all"], default="all")
    sp.add_argument("--out", help="CSV report path")
    sp.set_defaults(fn=cmd_reproduce_tables)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "horizon_required", False) and args.horizon is None:
        raise SystemExit("--horizon is required")
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())

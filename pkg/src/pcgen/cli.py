"""Command-line front end.  Every command prints JSON and exits 0 iff its checks pass."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .folang import default_library, make_template
from .gen_fo import GenConfig, fo_report
from .gen_prop import PropGenConfig, h_P, step_report
from .harness import (
    ExperimentSpec,
    SchemaError,
    acceptance_specs,
    enum_circuit_summary,
    run,
)
from .proplogic import to_dimacs, translate

CONFIG_ENV = "PCGEN_CONFIG"
DEFAULTS = {"profile": "DESK", "backend": "CERT", "system": "SCH", "seed": 0, "out": None}


def load_config(path: str | None) -> dict:
    """Defaults, overlaid with a JSON config file; ``$PCGEN_CONFIG`` overrides ``--config``."""
    cfg = dict(DEFAULTS)
    path = os.environ.get(CONFIG_ENV) or path
    if path:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        unknown = set(doc) - set(DEFAULTS)
        if unknown:
            raise SchemaError(sorted(unknown)[0], f"unknown config key in {path}")
        cfg.update(doc)
    return cfg


def _n_values(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(t) for t in text.split(",")]


def _param(text: str) -> int | str:
    """``j`` for BIT_J_IS_1; a verifier index or name for SIGMA1_REF."""
    return int(text) if text.isdigit() else text


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True)
    print(text)
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        with open(out, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(doc, sort_keys=True) + "\n")


def _report(spec: ExperimentSpec) -> int:
    report = run(spec)
    print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subcommand's unset option from hiding one given before it.
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--profile", type=str.upper, choices=["DESK", "PAPER"])
    common.add_argument("--backend", type=str.upper, choices=["CERT", "EMPTY"])
    common.add_argument("--system", type=str.upper, choices=["TT", "SCH"])
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="append the JSON report to this file")
    common.add_argument("--config", help=f"JSON config file (overridden by ${CONFIG_ENV})")

    ap = argparse.ArgumentParser(prog="pcgen", description=__doc__, parents=[common])
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", parents=[common], help="run g_T (fo) or h_P (prop) on one input")
    g.add_argument("which", choices=["fo", "prop"])
    g.add_argument("--input", required=True)

    s = sub.add_parser("scan-range", parents=[common], help="exhaustive range of g_T")
    s.add_argument("--n", type=_n_values, default=[10])

    h = sub.add_parser("hit-test", parents=[common], help="feed Phi ++ u0 and record hits")
    h.add_argument("--generator", choices=["fo", "prop"], default="fo")
    h.add_argument("--phi", default="BEGINS_WITH_1")
    h.add_argument("--param", type=_param, default=0)
    h.add_argument("--n", type=_n_values, default=list(range(8, 15)))
    h.add_argument("--cap", type=int, default=256)

    i = sub.add_parser("incompleteness-demo", parents=[common],
                       help="unproved true sentences about the range complement")
    i.add_argument("--horizon", type=int, default=12)

    t = sub.add_parser("translate", parents=[common], help="emit translate(Phi, w, n)")
    t.add_argument("--phi", required=True)
    t.add_argument("--param", type=_param, default=0)
    t.add_argument("--w", required=True)
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--format", choices=["json", "cnf"], default="json")

    e = sub.add_parser("enum-circuits", parents=[common], help="count or list canonical circuits")
    e.add_argument("--inputs", type=int, required=True)
    e.add_argument("--size", type=int, required=True)
    e.add_argument("--count", action="store_true", help="print only counts")
    e.add_argument("--list", type=int, default=8, help="circuits to print without --count")

    a = sub.add_parser("audit", parents=[common], help="run experiment specs")
    a.add_argument("--spec", help="JSON file holding one ExperimentSpec")
    a.add_argument("--acceptance", action="store_true", help="run the full acceptance set")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(getattr(args, "config", None))
        for key in DEFAULTS:
            if getattr(args, key, None) is not None:
                cfg[key] = getattr(args, key)
        return _dispatch(args, cfg)
    except (ValueError, KeyError) as exc:
        print(f"pcgen: error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args, cfg) -> int:
    seed, out = cfg["seed"], cfg["out"]
    if args.cmd == "gen":
        if args.which == "fo":
            gcfg = GenConfig.paper(cfg["backend"]) if cfg["profile"] == "PAPER" else GenConfig.desk(cfg["backend"])
            doc = fo_report(args.input, gcfg)
            ok = len(doc["output"]) == len(args.input) + 1
        else:
            pcfg = (PropGenConfig.paper(cfg["system"]) if cfg["profile"] == "PAPER"
                    else PropGenConfig.desk(cfg["system"]))
            output, trace = h_P(args.input, pcfg)
            check = step_report(trace, len(args.input), pcfg)
            doc = {"n": len(args.input), "w0": trace.w0, "output": output,
                   "trace": trace.to_dict(), "step_report": check, "config": pcfg.describe()}
            ok = check["ok"] and len(output) == len(args.input) + 1
        _emit(doc, out)
        return 0 if ok else 1
    if args.cmd == "scan-range":
        return _report(ExperimentSpec("RANGE_SCAN", {"n_values": args.n, "profile": cfg["profile"],
                                                     "backend": cfg["backend"]}, seed, out))
    if args.cmd == "hit-test":
        param = args.param if isinstance(args.param, int) else default_library().index(args.param)
        return _report(ExperimentSpec("HIT_TEST", {
            "generator": args.generator, "kind": args.phi, "param": param, "n_values": args.n,
            "cap": args.cap, "profile": cfg["profile"], "backend": cfg["backend"],
            "system": cfg["system"]}, seed, out))
    if args.cmd == "incompleteness-demo":
        return _report(ExperimentSpec("INCOMPLETENESS", {
            "horizon": args.horizon, "profile": cfg["profile"], "backend": cfg["backend"]}, seed, out))
    if args.cmd == "translate":
        f = translate(make_template(args.phi, args.param), args.w, args.n)
        if args.format == "cnf":
            sys.stdout.write(to_dimacs(f))
        else:
            _emit(f.to_json(), out)
        return 0
    if args.cmd == "enum-circuits":
        doc = enum_circuit_summary(args.inputs, args.size, 0 if args.count else args.list)
        _emit(doc, out)
        return 0 if doc["duplicate_free"] and doc["count"] == doc["closed_form"] else 1
    if args.cmd == "audit":
        if args.spec:
            with open(args.spec, encoding="utf-8") as fh:
                spec = ExperimentSpec.from_dict(json.load(fh))
            if out:
                spec.output_path = out
            return _report(spec)
        if args.acceptance:
            status = 0
            for label, spec in acceptance_specs(seed):
                spec.output_path = out
                report = run(spec)
                print(f"criterion {label}: {'PASS' if report.passed else 'FAIL'} {report.assertions}")
                status |= 0 if report.passed else 1
            return status
        return _report(ExperimentSpec("TRANSLATE_AUDIT", {}, seed, out))
    raise AssertionError(args.cmd)


if __name__ == "__main__":
    sys.exit(main())

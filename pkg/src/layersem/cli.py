"""Command-line interface.

Every command except ``dot`` writes a JSON report to standard output and a
one-line human summary to standard error.  Exit status: 0 all checks pass,
1 a theorem or property check failed, 2 invalid input, 3 budget exceeded.

A FILE argument may be a path to a configuration document or
``fixture:ID`` for a built-in fixture (e.g. ``fixture:fg_loop``).
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import dependency as dep
from .document import dumps, parse_config, serialize
from .dot import RELATIONS, export_dot
from .errors import BudgetExceededError, LayerSemError
from .fixtures import FIXTURE_IDS, all_fixtures, fixture
from .generate import Bounds, random_configuration
from .model import make_valuation, open_inputs, validate_configuration
from .semantics import attachment_closure, config_semantics

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_BUDGET = 3

BUDGET_ENV = "LAYERSEM_BUDGET"


class _Invalid(Exception):
    def __init__(self, report: dict, summary: str):
        self.report = report
        self.summary = summary


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return dep.DEFAULT_TABLE_BUDGET


def _load(source: str):
    if source.startswith("fixture:"):
        try:
            return fixture(source[len("fixture:"):]).config
        except LayerSemError as exc:
            raise _Invalid({"error": str(exc)}, str(exc)) from None
    try:
        text = Path(source).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Invalid({"error": str(exc)}, f"cannot read {source}") from None
    try:
        _, config = parse_config(text)
    except LayerSemError as exc:
        raise _Invalid({"error": str(exc)}, f"{source}: {exc}") from None
    report = validate_configuration(config)
    if not report.ok:
        raise _Invalid({"validation": report.to_json()},
                       f"{source}: {len(report.violations)} validation violation(s)")
    return config


def _parse_input(text: str, config):
    pairs = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        port, sep, service = part.partition("=")
        if not sep:
            raise _Invalid({"error": f"malformed binding {part!r}"}, f"malformed binding {part!r}")
        pairs.append((port.strip(), service.strip()))
    try:
        mu = make_valuation(pairs, config.universe)
    except LayerSemError as exc:
        raise _Invalid({"error": str(exc)}, str(exc)) from None
    expected = open_inputs(config)
    if mu.ports != expected:
        msg = f"--input must bind exactly the open inputs {sorted(expected)}"
        raise _Invalid({"error": msg}, msg)
    return mu


def _pairs(rel):
    return [list(p) for p in rel.sorted_pairs()]


def cmd_validate(args):
    try:
        config = _load(args.file)
    except _Invalid as exc:
        return {"command": "validate", "ok": False, **exc.report}, exc.summary, EXIT_INVALID
    return {"command": "validate", "ok": True, "layers": list(config.names)}, "ok", EXIT_OK


def cmd_closure(args):
    config = _load(args.file)
    res = attachment_closure(config, args.layer)
    report = {"command": "closure", "layer": res.layer, "closure": sorted(res.ports),
              "iterations": res.iterations}
    return report, f"closure of {res.layer}: {len(res.ports)} port(s)", EXIT_OK


def cmd_eval(args):
    config = _load(args.file)
    mu = _parse_input(args.input, config)
    outs = config_semantics(config, args.layer, mu, args.state_budget)
    report = {"command": "eval", "layer": args.layer, "input": mu.as_dict(),
              "outputs": [v.as_dict() for v in sorted(outs)]}
    shown = ", ".join(str(v) for v in sorted(outs)) or "(none)"
    return report, f"{args.layer} at {mu}: {shown}", EXIT_OK


def cmd_syndep(args):
    config = _load(args.file)
    kind = {"none": dep.SYNTACTIC, "trans": dep.SYNTACTIC_PLUS,
            "refl-trans": dep.SYNTACTIC_STAR}[args.closure]
    rel = dep.syntactic_relation(config, kind)
    return ({"command": "syndep", "kind": kind, "pairs": _pairs(rel)},
            f"{len(rel)} {kind} pair(s)", EXIT_OK)


def cmd_semdep(args):
    config = _load(args.file)
    rel = dep.semantic_dependency_relation(config, args.budget, args.state_budget)
    return ({"command": "semdep", "budget": args.budget, "pairs": _pairs(rel)},
            f"{len(rel)} semantic pair(s)", EXIT_OK)


def cmd_usable(args):
    config = _load(args.file)
    ok, mu = dep.is_usable(config, args.state_budget)
    report = {"command": "usable", "usable": ok, "witness": mu.as_dict() if mu is not None else None}
    return report, ("usable, witness " + str(mu)) if ok else "not usable", EXIT_OK


def cmd_check(args):
    config = _load(args.file)
    rep = dep.check_theorems(config, args.budget, config_id=args.file, state_budget=args.state_budget)
    status = EXIT_OK if rep.ok else EXIT_FAILED
    if rep.ok and rep.skipped:
        status = EXIT_BUDGET
    summary = (f"usable={rep.usable} thm1={rep.thm1_holds} thm2={rep.thm2_holds} "
               f"corollary={rep.corollary_holds} lemma1={rep.lemma1_holds} prop1={rep.prop1_holds}")
    return {"command": "check", **rep.to_json()}, summary, status


def cmd_fixtures(args):
    fixtures = all_fixtures()
    report = {"command": "fixtures", "known": list(FIXTURE_IDS), "fixtures": [f.id for f in fixtures]}
    if args.emit:
        out = Path(args.emit)
        out.mkdir(parents=True, exist_ok=True)
        written = []
        for f in fixtures:
            path = out / f"{f.id}.json"
            path.write_text(serialize(f.config), encoding="utf-8")
            written.append(path.name)
        report["written"] = written
    return report, f"{len(fixtures)} fixture(s)", EXIT_OK


def cmd_fuzz(args):
    try:
        bounds = Bounds.parse(args.bounds) if args.bounds else Bounds()
    except (LayerSemError, ValueError) as exc:
        raise _Invalid({"error": str(exc)}, str(exc)) from None
    counts = {"configs": 0, "usable": 0, "skipped": 0, "thm1_fail": 0, "thm2_fail": 0,
              "corollary_fail": 0, "lemma1_fail": 0, "prop1_fail": 0}
    failures = []
    for seed in range(args.start, args.start + args.seeds):
        config = random_configuration(seed, bounds)
        rep = dep.check_theorems(config, args.budget, config_id=f"seed {seed}",
                                 state_budget=args.state_budget, seed=seed)
        counts["configs"] += 1
        counts["usable"] += bool(rep.usable)
        counts["skipped"] += bool(rep.skipped)
        for name in ("thm1", "thm2", "corollary", "lemma1", "prop1"):
            if getattr(rep, f"{name}_holds") is False:
                counts[f"{name}_fail"] += 1
                failures.append({"seed": seed, "check": name})
    report = {"command": "fuzz", "bounds": vars(bounds), "counts": counts, "failures": failures}
    status = EXIT_FAILED if failures else EXIT_OK
    summary = " ".join(f"{k}={v}" for k, v in counts.items())
    return report, summary, status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="layersem",
                                     description="Analyze layered architecture configurations.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help, file=True):
        p = sub.add_parser(name, help=help)
        if file:
            p.add_argument("file", help="configuration document or fixture:ID")
        p.add_argument("--state-budget", type=int, default=10**6,
                       help="max candidate valuations per enumeration")
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "check a configuration document")
    add("closure", cmd_closure, "attachment closure of a layer").add_argument("--layer", required=True)
    p = add("eval", cmd_eval, "configuration semantics of a layer at one input")
    p.add_argument("--layer", required=True)
    p.add_argument("--input", default="", help='open-input valuation, "port=service,..."')
    add("syndep", cmd_syndep, "syntactic dependency").add_argument(
        "--closure", choices=("none", "trans", "refl-trans"), default="none")
    for name, func, help in (("semdep", cmd_semdep, "semantic dependency (exhaustive)"),
                             ("check", cmd_check, "check the dependency theorems")):
        add(name, func, help).add_argument("--budget", type=int, default=default_budget(),
                                           help="max behavior tables per layer pair")
    add("usable", cmd_usable, "usability and its first witness")
    p = add("dot", None, "Graphviz export", file=True)
    p.add_argument("--relation", choices=RELATIONS, default="syn")
    p.add_argument("--budget", type=int, default=default_budget())
    p.set_defaults(func=None)
    add("fixtures", cmd_fixtures, "list or emit built-in fixtures", file=False).add_argument(
        "--emit", metavar="DIR")
    p = add("fuzz", cmd_fuzz, "check theorems on seeded random configurations", file=False)
    p.add_argument("--seeds", type=int, default=100)
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--bounds", default="", help='e.g. "layers=3,ports=2,type_size=2"')
    p.add_argument("--budget", type=int, default=2**16)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "dot":
            config = _load(args.file)
            sys.stdout.write(export_dot(config, args.relation, args.budget))
            return EXIT_OK
        report, summary, status = args.func(args)
    except _Invalid as exc:
        sys.stdout.write(dumps({"command": args.command, "ok": False, **exc.report}))
        print(f"invalid input: {exc.summary}", file=sys.stderr)
        return EXIT_INVALID
    except BudgetExceededError as exc:
        sys.stdout.write(dumps({"command": args.command, "ok": False, "budget_exceeded": str(exc)}))
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except LayerSemError as exc:
        sys.stdout.write(dumps({"command": args.command, "ok": False, "error": str(exc)}))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    sys.stdout.write(dumps(report))
    print(summary, file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())

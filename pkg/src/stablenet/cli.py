"""Command-line entry point: ``stablenet verify|tolerance|synth|simulate|gen``.

Exit codes: 0 for success or Correct, 1 for Fail or Infeasible, 2 for usage,
input or environment errors.
"""
from __future__ import annotations

import argparse
import json
import shlex
import sys
from dataclasses import dataclass
from pathlib import Path

from .bench import VARIANTS, FattreeSpec, gen_fattree, gen_running_example
from .chc import (
    ChcSolution,
    ChcUnknown,
    DisconnectedCBGraph,
    Infeasible,
    RoundTripFailure,
    emit_chc,
    solve_chc,
    validate_solution,
)
from .expr import ExprError
from .network import load_document, network_to_json, parse_edge_name, save_document
from .simulator import FairnessProfile, InfeasibleProfile, random_fair_schedule, run
from .smt import SolverConfig, SolverCrash
from .smt.solver import DEFAULT_TIMEOUT
from .tolerance import tolerance_report
from .verifier import CBGraph, ConfigError, synthesize_cbgraph, verify

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    solver_path: str | None = None
    solver_args: tuple = ("-in",)
    timeout_seconds: float = DEFAULT_TIMEOUT
    jobs: int = 1
    dump_dir: str | None = None
    output_format: str = "pretty"

    def __post_init__(self):
        if self.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        if self.timeout_seconds <= 0:
            raise UsageError("--timeout must be positive")
        if self.output_format not in ("pretty", "json"):
            raise UsageError(f"unknown output format {self.output_format!r}")

    def solver(self) -> SolverConfig:
        return SolverConfig(self.solver_path, tuple(self.solver_args),
                            self.timeout_seconds, self.dump_dir)

    @classmethod
    def from_args(cls, ns) -> "RunConfig":
        args = tuple(shlex.split(ns.solver_args)) if ns.solver_args else ("-in",)
        return cls(ns.solver, args, ns.timeout, ns.jobs, ns.dump_smt, ns.format)


def _emit(cfg: RunConfig, doc: dict, pretty: str, out_path: str | None) -> None:
    if out_path:
        Path(out_path).write_text(json.dumps(doc, indent=1) + "\n")
    if cfg.output_format == "json":
        print(json.dumps(doc, indent=1))
    else:
        print(pretty)


def _load(path):
    if not Path(path).is_file():
        raise UsageError(f"no such file: {path}")
    net, ifs = load_document(path)
    return net, ifs


def _fmt_graph(g) -> str:
    edges = ", ".join(f"{u}->{v}" for u, v in sorted(g.edges))
    return f"roots: {', '.join(sorted(g.roots)) or '-'}\ncb-edges: {edges or '-'}"


def cmd_verify(ns, cfg: RunConfig) -> int:
    net, ifs = _load(ns.net)
    if ifs is None:
        raise UsageError(f"{ns.net} has no I/Q/Y interfaces")
    v = verify(net, ifs, cfg.solver(), cfg.jobs, ns.profile)
    lines = [v.status]
    if v.cb_graph is not None:
        lines.append(_fmt_graph(v.cb_graph))
    if v.unconnected:
        lines.append(f"unconnected: {', '.join(sorted(v.unconnected))}")
    essential = [f for f in v.failures if f.vc.kind in ("Init", "Inv", "Prop")]
    shown = essential if essential else [f for fs in v.evidence.values() for f in fs]
    for f in shown:
        lines.append(f.triage.render() if f.triage else f"{f.vc.name}: {f.reason}")
    _emit(cfg, v.to_json(), "\n".join(lines), ns.json)
    return EXIT_OK if v.correct else EXIT_FAIL


def cmd_tolerance(ns, cfg: RunConfig) -> int:
    net, ifs = _load(ns.net)
    if ns.cbgraph:
        g = CBGraph.from_json(json.loads(Path(ns.cbgraph).read_text()))
    else:
        if ifs is None:
            raise UsageError(f"{ns.net} has no interfaces; pass --cbgraph")
        g, _ = synthesize_cbgraph(net, ifs, cfg.solver(), cfg.jobs, ns.profile)
    rep = tolerance_report(g, net, ns.k)
    doc = rep.to_json()
    doc["cbGraph"] = g.to_json()
    per = "\n".join(f"  {v}: {x}" for v, x in doc["perNode"].items())
    pretty = f"network tolerance: {doc['network']}\nper node:\n{per}"
    if rep.for_k is not None:
        pretty += f"\n{ns.k}-fail-connected: {'yes' if rep.for_k else 'no'}"
    _emit(cfg, doc, pretty, ns.json)
    if rep.for_k is not None:
        return EXIT_OK if rep.for_k else EXIT_FAIL
    return EXIT_OK


def cmd_synth(ns, cfg: RunConfig) -> int:
    net, ifs = _load(ns.net)
    if ifs is None or not ifs.Y:
        raise UsageError(f"{ns.net} has no Y properties")
    g = CBGraph.from_json(json.loads(Path(ns.cbgraph).read_text()))
    sysm = emit_chc(net, ifs.Y, g, ns.profile)
    sol = solve_chc(sysm, cfg.solver())
    if isinstance(sol, Infeasible):
        _emit(cfg, {"status": "Infeasible"}, "Infeasible", None)
        return EXIT_FAIL
    if isinstance(sol, ChcUnknown):
        print(f"error: HORN solver gave no answer ({sol.reason})", file=sys.stderr)
        return EXIT_ERROR
    assert isinstance(sol, ChcSolution)
    verdict = validate_solution(sol, net, ifs.Y, g, cfg.solver())
    doc = {"status": "Solved", "roundTrip": verdict.status, **sol.to_json()}
    if ns.out:
        out = network_to_json(net, sol.interfaces(ifs.Y))
        Path(ns.out).write_text(json.dumps(out, indent=1) + "\n")
    lines = ["Solved (round trip: %s)" % verdict.status]
    for v, (i, q) in sol.interp.items():
        lines.append(f"  I({v}) = {getattr(i, 'body', i)}")
        lines.append(f"  Q({v}) = {getattr(q, 'body', q)}")
    _emit(cfg, doc, "\n".join(lines), None)
    return EXIT_OK


def cmd_simulate(ns, cfg: RunConfig) -> int:
    net, _ = _load(ns.net)
    failed = frozenset(parse_edge_name(s) for s in ns.fail)
    prof = FairnessProfile(ns.ea_period, ns.ef_lag, failed, ns.cutoff)
    tr = run(net, random_fair_schedule(net, ns.seed, ns.horizon, prof))
    doc = tr.to_json()
    if ns.trace:
        Path(ns.trace).write_text(json.dumps(doc, indent=1) + "\n")
    final = "\n".join(f"  {v}: {tr[v, tr.horizon]!r}" for v in net.nodes)
    if cfg.output_format == "json" and not ns.trace:
        print(json.dumps(doc, indent=1))
    elif cfg.output_format == "pretty":
        print(f"state at t={tr.horizon}:\n{final}")
    return EXIT_OK


def cmd_gen(ns, cfg: RunConfig) -> int:
    out = Path(ns.out)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if ns.example:
        if ns.example != "fig1":
            raise UsageError(f"unknown example {ns.example!r}")
        net, (p1, p2) = gen_running_example()
        for i, p in enumerate((p1, p2), 1):
            path = out / f"fig1_pkg{i}.json"
            save_document(path, net, p)
            written.append(path)
        path = out / "fig1_cbgraph.json"
        g = CBGraph({"A"}, {("A", "B"), ("A", "C"), ("B", "E")})
        path.write_text(json.dumps(g.to_json(), indent=1) + "\n")
        written.append(path)
    else:
        variants = VARIANTS if ns.variant == "all" else (ns.variant,)
        for var in variants:
            net, ifs, d = gen_fattree(FattreeSpec(ns.fattree, var))
            path = out / f"fattree{ns.fattree}_{var}.json"
            save_document(path, net, ifs, dist=d)
            written.append(path)
    for p in written:
        print(p)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--solver", help="solver binary (default: $STABLENET_SOLVER or z3)")
    common.add_argument("--solver-args", help="solver flags, shell-quoted (default: -in)")
    common.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT,
                        help="per-query timeout in seconds")
    common.add_argument("--jobs", type=int, default=1, help="parallel solver processes")
    common.add_argument("--dump-smt", metavar="DIR", help="write every solver script to DIR")
    common.add_argument("--format", choices=("pretty", "json"), default="pretty")

    p = argparse.ArgumentParser(prog="stablenet", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    v = sub.add_parser("verify", parents=[common], help="check a network against its interfaces")
    v.add_argument("--net", required=True)
    v.add_argument("--json", metavar="OUT", help="also write the verdict as JSON")
    v.add_argument("--profile", choices=("full", "simple"), default="full")
    v.set_defaults(fn=cmd_verify)

    t = sub.add_parser("tolerance", parents=[common], help="k-fail-connectivity of the CB-graph")
    t.add_argument("--net", required=True)
    t.add_argument("--cbgraph", help="use this CB-graph instead of synthesizing one")
    t.add_argument("--k", type=int)
    t.add_argument("--json", metavar="OUT")
    t.add_argument("--profile", choices=("full", "simple"), default="full")
    t.set_defaults(fn=cmd_tolerance)

    s = sub.add_parser("synth", parents=[common], help="synthesize interfaces for a CB-graph")
    s.add_argument("--net", required=True)
    s.add_argument("--cbgraph", required=True)
    s.add_argument("--profile", choices=("full", "simple"), default="simple")
    s.add_argument("--out", help="write the network with solved interfaces here")
    s.set_defaults(fn=cmd_synth)

    m = sub.add_parser("simulate", parents=[common], help="run one seeded fair schedule")
    m.add_argument("--net", required=True)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--horizon", type=int, default=50)
    m.add_argument("--fail", action="append", default=[], metavar="U->V")
    m.add_argument("--cutoff", type=int, default=0)
    m.add_argument("--ea-period", type=int, default=3)
    m.add_argument("--ef-lag", type=int, default=3)
    m.add_argument("--trace", help="write the trace JSON here")
    m.set_defaults(fn=cmd_simulate)

    g = sub.add_parser("gen", parents=[common], help="write benchmark networks")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--fattree", type=int, metavar="K")
    src.add_argument("--example", choices=("fig1",))
    g.add_argument("--variant", choices=VARIANTS + ("all",), default="Reachability")
    g.add_argument("--out", required=True)
    g.set_defaults(fn=cmd_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        cfg = RunConfig.from_args(ns)
        return ns.fn(ns, cfg)
    except ConfigError as exc:
        for e in exc.errors:
            print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except RoundTripFailure as exc:
        print(f"error: round trip failed at {exc.vc.name}: {exc.result}", file=sys.stderr)
        return EXIT_ERROR
    except DisconnectedCBGraph as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (UsageError, SolverCrash, ExprError, InfeasibleProfile, OSError,
            ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

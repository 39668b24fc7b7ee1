"""Drives an external SMT-LIB v2 solver process, one process per query."""
from __future__ import annotations

import os
import re
import shutil
import subprocess
from dataclasses import dataclass, field
from pathlib import Path

from ..route import NO_ROUTE
from .encoder import Encoder
from .sexpr import SexprError, parse_all, to_text

SOLVER_ENV = "STABLENET_SOLVER"
DEFAULT_SOLVER = "z3"
DEFAULT_TIMEOUT = 60.0


class SolverCrash(RuntimeError):
    """The solver process died or printed something we cannot read."""


class SolverNotFound(SolverCrash):
    pass


@dataclass(frozen=True)
class SolverConfig:
    path: str | None = None
    args: tuple = ("-in",)
    timeout: float = DEFAULT_TIMEOUT
    dump_dir: str | None = None

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")

    def binary(self) -> str:
        return resolve_solver(self.path)


def resolve_solver(path: str | None = None) -> str:
    """Explicit path, then ``$STABLENET_SOLVER``, then ``z3`` on ``PATH``."""
    candidate = path or os.environ.get(SOLVER_ENV) or DEFAULT_SOLVER
    found = shutil.which(candidate)
    if found is None:
        raise SolverNotFound(
            f"SMT solver {candidate!r} not found; pass --solver or set ${SOLVER_ENV}")
    return found


@dataclass(frozen=True)
class Formula:
    """A closed validity query over route variables.

    ``variables`` are ``Route``-sorted constants (implicitly universally
    quantified); ``definitions`` are named intermediate terms.
    """

    encoder: Encoder
    variables: tuple
    body: str
    definitions: tuple = ()
    label: str = "query"


@dataclass(frozen=True)
class Valid:
    pass


@dataclass(frozen=True)
class Invalid:
    model: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Unknown:
    reason: str = "unknown"


SolverVerdict = Valid | Invalid | Unknown


def _safe_label(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", label.replace("->", "-"))


def render_script(f: Formula, timeout: float | None = None) -> str:
    enc = f.encoder
    lines = []
    if timeout is not None:
        lines.append(f"(set-option :timeout {int(timeout * 1000)})")
    lines.append("(set-logic ALL)")
    lines.append(enc.sort_declarations())
    for v in f.variables:
        lines.append(f"(declare-const {v} Route)")
    for v in f.variables:
        lines.append(f"(assert {enc.domain_axiom(v)})")
    for name, sort, expr in f.definitions:
        lines.append(f"(define-fun {name} () {sort} {expr})")
    lines.append(f"(assert (not {f.body}))")
    lines.append("(check-sat)")
    lines.append("(get-model)")
    return "\n".join(lines) + "\n"


def run_script(script: str, config: SolverConfig, label: str = "query") -> tuple[str | None, str]:
    """Run *script*; returns ``(stdout, stderr)`` or ``(None, reason)`` on timeout."""
    if config.dump_dir:
        d = Path(config.dump_dir)
        d.mkdir(parents=True, exist_ok=True)
        (d / f"{_safe_label(label)}.smt2").write_text(script)
    cmd = [config.binary(), *config.args]
    try:
        proc = subprocess.run(cmd, input=script, capture_output=True, text=True,
                              timeout=config.timeout + 5)
    except subprocess.TimeoutExpired:
        return None, f"timeout after {config.timeout}s"
    except OSError as exc:
        raise SolverCrash(f"cannot run {cmd[0]}: {exc}") from exc
    return proc.stdout, proc.stderr


def _status(out: str) -> tuple[str, str]:
    head, _, rest = out.lstrip().partition("\n")
    return head.strip(), rest


def _model_bindings(text: str) -> dict:
    try:
        exprs = parse_all(text)
    except SexprError as exc:
        raise SolverCrash(f"malformed model: {exc}") from exc
    if not exprs or not isinstance(exprs[0], list):
        raise SolverCrash("solver returned sat without a model")
    body = exprs[0]
    if body and body[0] == "model":
        body = body[1:]
    out = {}
    for item in body:
        if isinstance(item, list) and len(item) == 5 and item[0] == "define-fun" and item[2] == []:
            out[item[1]] = item[4]
    return out


def check_validity(f: Formula, config: SolverConfig | None = None) -> SolverVerdict:
    """Assert ``not f``; unsat means valid, sat yields a counterexample model."""
    config = config or SolverConfig()
    out, err = run_script(render_script(f, config.timeout), config, f.label)
    if out is None:
        return Unknown(err)
    status, rest = _status(out)
    if status == "unsat":
        return Valid()
    if status == "unknown":
        return Unknown("solver returned unknown")
    if status != "sat":
        raise SolverCrash(f"unexpected solver output for {f.label}: {(out + err).strip()[:300]}")
    bindings = _model_bindings(rest)
    model = {}
    for v in f.variables:
        model[v] = f.encoder.decode_value(bindings[v]) if v in bindings else NO_ROUTE
    return Invalid(model)


def get_values(encoder: Encoder, terms, config: SolverConfig | None = None,
               definitions=(), label: str = "eval") -> list:
    """Evaluate ground *terms* ``[(sort, expr), ...]`` and return their values.

    Values come back as parsed S-expressions (decode with
    :func:`~stablenet.smt.sexpr.atom_value` or ``encoder.decode_value``).
    """
    config = config or SolverConfig()
    lines = ["(set-logic ALL)", encoder.sort_declarations()]
    for name, sort, expr in definitions:
        lines.append(f"(define-fun {name} () {sort} {expr})")
    names = []
    for i, (sort, expr) in enumerate(terms):
        n = f"e!{i}"
        names.append(n)
        lines.append(f"(define-fun {n} () {sort} {expr})")
    lines.append("(check-sat)")
    if names:
        lines.append("(get-value (" + " ".join(names) + "))")
    out, err = run_script("\n".join(lines) + "\n", config, label)
    if out is None:
        raise SolverCrash(err)
    status, rest = _status(out)
    if status != "sat":
        raise SolverCrash(f"ground evaluation returned {(out + err).strip()[:300]}")
    if not names:
        return []
    try:
        (pairs,) = parse_all(rest)
    except (SexprError, ValueError) as exc:
        raise SolverCrash(f"malformed get-value output: {exc}") from exc
    got = {to_text(k): v for k, v in pairs}
    return [got[n] for n in names]

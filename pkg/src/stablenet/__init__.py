"""Modular verification of eventually-stable BGP-style routing properties."""
from .bench import FattreeSpec, gen_fattree, gen_running_example
from .chc import emit_chc, solve_chc, validate_solution
from .expr import eval_predicate, parse_predicate, parse_transfer
from .network import Interfaces, Network, apply_transfer, load_document, validate_network
from .route import NO_ROUTE, Route, merge
from .simulator import (
    FairnessProfile,
    check_abstract_convergence,
    fairness_lemma_check,
    random_fair_schedule,
    run,
)
from .smt import SolverConfig, check_validity
from .tolerance import max_tolerance, tolerance_report
from .verifier import CBGraph, diagnose, is_connected, synthesize_cbgraph, verify

__version__ = "0.1.0"

__all__ = [
    "apply_transfer",
    "CBGraph",
    "check_abstract_convergence",
    "check_validity",
    "diagnose",
    "emit_chc",
    "eval_predicate",
    "fairness_lemma_check",
    "FairnessProfile",
    "FattreeSpec",
    "gen_fattree",
    "gen_running_example",
    "Interfaces",
    "is_connected",
    "load_document",
    "max_tolerance",
    "merge",
    "Network",
    "NO_ROUTE",
    "parse_predicate",
    "parse_transfer",
    "random_fair_schedule",
    "Route",
    "run",
    "solve_chc",
    "SolverConfig",
    "synthesize_cbgraph",
    "tolerance_report",
    "validate_network",
    "validate_solution",
    "verify",
]

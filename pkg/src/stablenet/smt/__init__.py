"""SMT-LIB encoding and solver driver."""
from .encoder import (
    FIELDS,
    PROFILES,
    EncodingError,
    Encoder,
    MacroScope,
    RouteTerm,
    UniverseOverflow,
)
from .solver import (
    Formula,
    Invalid,
    SolverConfig,
    SolverCrash,
    SolverNotFound,
    SolverVerdict,
    Unknown,
    Valid,
    check_validity,
    get_values,
    render_script,
    resolve_solver,
)

__all__ = [
    "check_validity",
    "Encoder",
    "EncodingError",
    "FIELDS",
    "Formula",
    "get_values",
    "Invalid",
    "MacroScope",
    "PROFILES",
    "render_script",
    "resolve_solver",
    "RouteTerm",
    "SolverConfig",
    "SolverCrash",
    "SolverNotFound",
    "SolverVerdict",
    "UniverseOverflow",
    "Unknown",
    "Valid",
]

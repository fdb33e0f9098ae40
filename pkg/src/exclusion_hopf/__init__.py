"""Exact verification engine for generalized-exclusion oscillator algebras."""

__version__ = "0.1.0"

from .fock import build_fock_rep, spectrum_value, verify_relations  # noqa: E402
from .hopf import make_solution, solve_hopf, verify_axioms  # noqa: E402
from .oscillator import SolutionType, build_solution_system  # noqa: E402
from .scalar import Cyclotomic, cyc_root, rational  # noqa: E402

__all__ = [
    "Cyclotomic",
    "SolutionType",
    "build_fock_rep",
    "build_solution_system",
    "cyc_root",
    "make_solution",
    "rational",
    "solve_hopf",
    "spectrum_value",
    "verify_axioms",
    "verify_relations",
]

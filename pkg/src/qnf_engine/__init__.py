"""qnf-engine - quantum normal forms and KAM iteration on atomic symbols."""

__version__ = "0.1.0"

from .errors import InputError, NumericalFailure, QnfError
from .core_symbols import (
    Atom,
    AtomicSymbol,
    Context,
    canonical_potential,
    merge_add,
    prune,
    weighted_norm,
    weighted_norm_k,
)
from .moyal_algebra import (
    adjoint_series,
    moyal_bracket,
    poisson_bracket,
    poisson_limit_residual,
    star_product,
)
from .weyl_matrix import ModeBox, OperatorMatrix, commutator_over_ihbar, eigensolve, quantize
from .homological import DivisorModel, build_g, solve_homological, verify_homological
from .qnf_order import NormalForm, qnf_construct, qnf_eigenvalue, qnf_remainder_bound
from .kam_engine import KamState, kam_run, kam_step, unitary_product
from .estimates import diophantine_certify, epsilon_star, ledger_evaluate
from .classical_limit import (
    classical_birkhoff,
    egorov_residual,
    hamiltonian_flow,
)
from .verify_spectrum import compare_ebk, compare_qnf, label_spectrum
from .config import RunConfig

__all__ = [
    "Atom",
    "AtomicSymbol",
    "Context",
    "DivisorModel",
    "InputError",
    "KamState",
    "ModeBox",
    "NormalForm",
    "NumericalFailure",
    "OperatorMatrix",
    "QnfError",
    "RunConfig",
    "adjoint_series",
    "build_g",
    "canonical_potential",
    "classical_birkhoff",
    "commutator_over_ihbar",
    "compare_ebk",
    "compare_qnf",
    "diophantine_certify",
    "egorov_residual",
    "eigensolve",
    "epsilon_star",
    "hamiltonian_flow",
    "kam_run",
    "kam_step",
    "label_spectrum",
    "ledger_evaluate",
    "merge_add",
    "moyal_bracket",
    "poisson_bracket",
    "poisson_limit_residual",
    "prune",
    "qnf_construct",
    "qnf_eigenvalue",
    "qnf_remainder_bound",
    "quantize",
    "solve_homological",
    "star_product",
    "unitary_product",
    "verify_homological",
    "weighted_norm",
    "weighted_norm_k",
]

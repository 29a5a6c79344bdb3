"""Four-mode so(4,1) squeezed vacua in truncated Fock spaces."""
from .coset import SqueezeParams, coset_matrix
from .fock import FockBasis, StateVector, TruncationBudget, build_basis, exp_action, fidelity, required_cutoff
from .lie import build_generators
from .squeeze import ROUTES, SqueezedVacuum, squeezed_vacuum
from .statistics import MomentReport, closed_form_moments, state_moments, wick_moments

__all__ = [
    "FockBasis", "StateVector", "TruncationBudget", "build_basis", "exp_action", "fidelity",
    "required_cutoff", "build_generators", "SqueezeParams", "coset_matrix", "ROUTES",
    "SqueezedVacuum", "squeezed_vacuum", "MomentReport", "closed_form_moments", "state_moments",
    "wick_moments",
]

"""Optimal-order Trotter-Suzuki decompositions for noisy quantum simulation."""

from .errors import ErrorBudget, GateErrorModel, TrotterErrorParams, total_error
from .models import ModelSpec, build_hamiltonian, build_tfim, build_xy
from .optimizer import CostPair, OptimumReport, k_opt, kappa_curve, optimal_steps
from .pauli import Hamiltonian, PauliString, PauliSum, PauliTerm
from .statevec import StateVector, exact_evolve, infidelity
from .trotter import Factor, Schedule, build_schedule, split_coefficient

__all__ = [
    "CostPair", "ErrorBudget", "Factor", "GateErrorModel", "Hamiltonian", "ModelSpec",
    "OptimumReport", "PauliString", "PauliSum", "PauliTerm", "Schedule", "StateVector",
    "TrotterErrorParams", "build_hamiltonian", "build_schedule", "build_tfim", "build_xy",
    "exact_evolve", "infidelity", "k_opt", "kappa_curve", "optimal_steps",
    "split_coefficient", "total_error",
]

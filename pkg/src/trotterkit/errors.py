"""Gate-error model, analytic Trotter-error estimates and total budgets."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Literal

from .exceptions import DomainError
from .models import ModelSpec, build_hamiltonian
from .statevec import StateVector, infidelity
from .trotter import COUNT_MODES, CountMode, Schedule, build_schedule, gate_count

FMode = Literal["inv_k", "inv_factorial", "unit"]
F_MODES = ("inv_k", "inv_factorial", "unit")

# The printed TFIM first-order estimate (t^2/n) J G (N-1) is half of
# (t^2 / 2n) * one_norm(sum_{i<j} [H_i, H_j]); XY matches the norm as is.
NORM_CONVERSION = {"tfim": 0.5, "xy": 1.0}


@dataclass(frozen=True)
class GateErrorModel:
    p0: float
    count_mode: CountMode = "literal"

    def __post_init__(self):
        if not 0 < self.p0 < 1:
            raise DomainError(f"p0 must lie in (0, 1), got {self.p0}")
        if self.count_mode not in COUNT_MODES:
            raise DomainError(f"unknown count mode {self.count_mode!r}")


@dataclass(frozen=True)
class TrotterErrorParams:
    a_const: float = 2.0
    f_mode: FMode = "inv_k"

    def __post_init__(self):
        if not self.a_const > 1:
            raise DomainError(f"a_const must exceed 1, got {self.a_const}")
        if self.f_mode not in F_MODES:
            raise DomainError(f"unknown f mode {self.f_mode!r}")

    def f(self, k: int) -> float:
        return f_value(k, self.f_mode)


@dataclass(frozen=True)
class ErrorBudget:
    k: int
    n: int
    r_gate: float
    r_trotter: float
    r_total: float
    source: Literal["analytic", "empirical"]

    def to_json(self) -> dict:
        return asdict(self)


def f_value(k: int, mode: FMode) -> float:
    """Taylor-series weight ``f(k)`` of the order-k error estimate."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if mode == "inv_k":
        return 1.0 / k
    if mode == "inv_factorial":
        return 1.0 / math.factorial(k)
    if mode == "unit":
        return 1.0
    raise DomainError(f"unknown f mode {mode!r}")


def gate_error(m: GateErrorModel, n_terms: int, n: int, k: int,
               schedule: Schedule | None = None) -> float:
    return m.p0 * gate_count(n_terms, n, k, m.count_mode, schedule)


def analytic_trotter_error(model: ModelSpec, params: TrotterErrorParams,
                           k: int, n: int, t: float) -> float:
    """Commutator-scaling estimate of the order-k Trotter infidelity.

    Orders 1 and 2 use the explicit commutator censuses of each model; from
    order 3 on the generic ``t^(k+1)/n^k f(k) (...) N A^k`` form applies.
    """
    if k < 1 or n < 1:
        raise DomainError("k and n must be >= 1")
    if t <= 0:
        raise DomainError("t must be positive")
    N, J, G = model.n_sites, model.j, model.gamma
    scale = t ** (k + 1) / n**k
    if model.kind == "tfim":
        if k == 1:
            return scale * J * G * (N - 1)
        if k == 2:
            return 4 * scale * J * G * (J + G) * (N - 1)
        return scale * params.f(k) * J * G * (J + G) ** (k - 1) * N * params.a_const**k
    if k == 1:
        # exact bond-pair count 2(N-2) rather than the large-N N-1
        return scale / 2 * (4 * (N - 1) * J * G + 4 * (N - 2) * J * J)
    if k == 2:
        return scale * 4 * (N - 1) * J * (G + 2 * J) ** 2
    return scale * params.f(k) * J * (J + 2 * G) ** k * N * params.a_const**k


def empirical_trotter_error(model: ModelSpec, k: int, n: int, t: float,
                            psi0: StateVector, normalize: bool = True) -> float:
    h = build_hamiltonian(model)
    return infidelity(h, build_schedule(h, k, n, t), psi0, normalize)


def total_error(gate: GateErrorModel, model: ModelSpec, params: TrotterErrorParams,
                k: int, n: int, t: float, source: str = "analytic",
                psi0: StateVector | None = None) -> ErrorBudget:
    h = build_hamiltonian(model)
    sched = build_schedule(h, k, n, t) if gate.count_mode == "literal" else None
    r_gate = gate_error(gate, h.n_terms, n, k, sched)
    if source == "analytic":
        r_trotter = analytic_trotter_error(model, params, k, n, t)
    elif source == "empirical":
        if psi0 is None:
            raise DomainError("empirical budgets need an initial state")
        r_trotter = infidelity(h, sched or build_schedule(h, k, n, t), psi0)
    else:
        raise DomainError(f"unknown source {source!r}")
    return ErrorBudget(k, n, r_gate, r_trotter, r_gate + r_trotter, source)

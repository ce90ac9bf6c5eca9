"""State-vector simulation of Pauli-exponential products.

Basis index convention: site 1 is the most significant bit, so
``|q_1 q_2 ... q_N>`` has index ``sum_s q_s 2^(N - s)``.

Every Hamiltonian term is ``c P`` with ``P^2 = 1``, hence

    exp(-i w c P) = cos(w c) - i sin(w c) P

which also holds for the complex weights produced by the higher-order
recursion (complex ``cos``/``sin``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

from .exceptions import CapabilityError, DimensionError, DomainError, NumericError
from .pauli import Hamiltonian, PauliString, PauliSum, one_norm, string_matrix, sum_matrix
from .trotter import Factor, Schedule

DENSE_LIMIT = 6
MAX_TAYLOR_DEGREE = 80
NEGATIVE_GUARD = 1e-12


@dataclass
class StateVector:
    n_sites: int
    amps: np.ndarray

    def __post_init__(self):
        self.amps = np.asarray(self.amps, dtype=complex)
        if self.amps.shape != (2**self.n_sites,):
            raise DimensionError(
                f"expected {2**self.n_sites} amplitudes, got shape {self.amps.shape}")

    def copy(self) -> StateVector:
        return StateVector(self.n_sites, self.amps.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))


def basis_state(bits: str) -> StateVector:
    if not bits or set(bits) - {"0", "1"}:
        raise DomainError(f"invalid bitstring {bits!r}")
    amps = np.zeros(2 ** len(bits), dtype=complex)
    amps[int(bits, 2)] = 1
    return StateVector(len(bits), amps)


def plus_state(n_sites: int) -> StateVector:
    dim = 2**n_sites
    return StateVector(n_sites, np.full(dim, 1 / math.sqrt(dim), dtype=complex))


def initial_state(name: str, n_sites: int) -> StateVector:
    if name == "zeros":
        return basis_state("0" * n_sites)
    if name == "plus":
        return plus_state(n_sites)
    raise DomainError(f"unknown initial state {name!r}")


@lru_cache(maxsize=4096)
def _pauli_action(string: PauliString) -> tuple[np.ndarray, np.ndarray]:
    """``(perm, phase)`` such that ``(P psi) = phase * psi[perm]``."""
    n = string.n_sites
    x_mask = z_mask = 0
    n_y = 0
    for s, a in enumerate(string.axes):
        bit = 1 << (n - 1 - s)
        if a in "XY":
            x_mask |= bit
        if a in "ZY":
            z_mask |= bit
        n_y += a == "Y"
    idx = np.arange(2**n, dtype=np.int64)
    perm = idx ^ x_mask
    # P|b> = i^nY (-1)^{popcount(b & z)} |b ^ x>, read off at c = b ^ x
    signs = 1 - 2 * (np.bitwise_count(perm & z_mask).astype(np.int64) & 1)
    phase = (1j) ** n_y * signs.astype(complex)
    perm.setflags(write=False)
    phase.setflags(write=False)
    return perm, phase


def apply_pauli(string: PauliString, amps: np.ndarray) -> np.ndarray:
    perm, phase = _pauli_action(string)
    return phase * amps[perm]


def apply_sum(p: PauliSum | Hamiltonian, amps: np.ndarray) -> np.ndarray:
    out = np.zeros_like(amps)
    for t in p.terms:
        out += t.coeff * apply_pauli(t.string, amps)
    return out


def _apply_factor_inplace(f: Factor, h: Hamiltonian, amps: np.ndarray) -> np.ndarray:
    term = h.terms[f.term_index]
    theta = complex(f.weight) * term.coeff
    c = np.cos(theta)
    s = np.sin(theta)
    return c * amps - 1j * s * apply_pauli(term.string, amps)


def _check_factor(f: Factor, h: Hamiltonian) -> None:
    if not 0 <= f.term_index < h.n_terms:
        raise DomainError(f"term index {f.term_index} outside 0..{h.n_terms - 1}")


def apply_factor(f: Factor, h: Hamiltonian, s: StateVector) -> StateVector:
    _check_factor(f, h)
    if s.n_sites != h.n_sites:
        raise DimensionError("state and Hamiltonian sizes differ")
    return StateVector(s.n_sites, _apply_factor_inplace(f, h, s.amps))


def apply_schedule(sched: Schedule, h: Hamiltonian, psi: StateVector) -> StateVector:
    """Apply the factors of ``sched`` to ``psi`` in list order."""
    if sched.n_terms != h.n_terms or sched.n_sites != h.n_sites:
        raise DimensionError("schedule was not built for this Hamiltonian")
    if psi.n_sites != h.n_sites:
        raise DimensionError("state and Hamiltonian sizes differ")
    amps = psi.amps
    for f in sched.factors:
        _check_factor(f, h)
        amps = _apply_factor_inplace(f, h, amps)
    return StateVector(psi.n_sites, amps)


def taylor_plan(norm: float, tol: float) -> tuple[int, int]:
    """Substep count ``m`` and degree ``d`` for a certified Taylor evolution.

    Each substep has generator norm ``x = norm / m <= 1`` and truncation
    remainder ``x^(d+1) / (d+1)! * e^x <= tol / m``.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    m = max(1, math.ceil(norm))
    x = norm / m
    budget = tol / m
    term = x * math.exp(x)  # x^(d+1)/(d+1)! e^x at d = 0
    d = 0
    while term > budget:
        d += 1
        if d > MAX_TAYLOR_DEGREE:
            raise NumericError(f"Taylor degree exceeded {MAX_TAYLOR_DEGREE} at tol={tol}")
        term *= x / (d + 1)
    return m, d


def exact_evolve(h: Hamiltonian, t: float, psi: StateVector, tol: float = 1e-12) -> StateVector:
    """``exp(-i t H) psi`` by substepped truncated Taylor series, matrix-free."""
    if psi.n_sites != h.n_sites:
        raise DimensionError("state and Hamiltonian sizes differ")
    norm = abs(t) * one_norm(h.as_sum())
    m, d = taylor_plan(norm, tol)
    dt = t / m
    amps = psi.amps.copy()
    for _ in range(m):
        term = amps
        acc = amps.copy()
        for j in range(1, d + 1):
            term = (-1j * dt / j) * apply_sum(h, term)
            acc += term
        amps = acc
    if not np.all(np.isfinite(amps)):
        raise NumericError("non-finite amplitudes in exact evolution")
    return StateVector(psi.n_sites, amps)


def inner(a: StateVector, b: StateVector) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    if a.n_sites != b.n_sites:
        raise DimensionError("state sizes differ")
    return complex(np.vdot(a.amps, b.amps))


def expectation(p: PauliSum, psi: StateVector) -> complex:
    if p.n_sites is not None and p.n_sites != psi.n_sites:
        raise DimensionError("operator and state sizes differ")
    return complex(np.vdot(psi.amps, apply_sum(p, psi.amps)))


def _guard(value: float, label: str) -> float:
    if value < -NEGATIVE_GUARD:
        raise NumericError(f"{label} infidelity {value:.3e} is negative beyond rounding")
    return min(max(value, 0.0), 1.0)


def infidelity_pair(h: Hamiltonian, sched: Schedule, psi0: StateVector,
                    tol: float = 1e-12) -> tuple[float, float, float]:
    """``(normalized, raw, norm_deviation)`` for one simulation.

    Complex-weight schedules are not unitary, so the raw overlap can exceed
    one; the raw figure is clipped to ``[0, 1]`` and the norm drift is
    returned separately.
    """
    phi = exact_evolve(h, sched.time, psi0, tol)
    chi = apply_schedule(sched, h, psi0)
    overlap = abs(inner(phi, chi)) ** 2
    chi_norm2 = float(np.vdot(chi.amps, chi.amps).real)
    if chi_norm2 == 0 or not math.isfinite(chi_norm2):
        raise NumericError("Trotter-evolved state has zero or non-finite norm")
    normalized = _guard(1 - overlap / chi_norm2, "normalized")
    raw = min(max(1 - overlap, 0.0), 1.0)
    return normalized, raw, abs(chi_norm2 - 1)


def infidelity(h: Hamiltonian, sched: Schedule, psi0: StateVector,
               normalize: bool = True) -> float:
    normalized, raw, _ = infidelity_pair(h, sched, psi0)
    return normalized if normalize else raw


def _check_dense(n_sites: int, limit: int) -> None:
    if n_sites > limit:
        raise CapabilityError(f"dense operators are capped at {limit} sites, got {n_sites}")


def dense_operator(obj: Hamiltonian | Schedule, h: Hamiltonian | None = None,
                   limit: int = DENSE_LIMIT) -> np.ndarray:
    """Dense matrix of a Hamiltonian, or of a schedule's ordered product."""
    if isinstance(obj, Hamiltonian):
        _check_dense(obj.n_sites, limit)
        return sum_matrix(obj)
    if h is None:
        raise DomainError("a schedule's dense operator needs its Hamiltonian")
    _check_dense(obj.n_sites, limit)
    dim = 2**obj.n_sites
    eye = np.eye(dim, dtype=complex)
    paulis = [string_matrix(t.string) for t in h.terms]
    out = eye.copy()
    for f in obj.factors:
        theta = complex(f.weight) * h.terms[f.term_index].coeff
        out = (np.cos(theta) * eye - 1j * np.sin(theta) * paulis[f.term_index]) @ out
    return out


def dense_exact_operator(h: Hamiltonian, t: float, limit: int = DENSE_LIMIT) -> np.ndarray:
    """``exp(-i t H)`` by dense scaling and squaring."""
    return scipy.linalg.expm(-1j * t * dense_operator(h, limit=limit))


def operator_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Frobenius norm of ``a - b``."""
    if a.shape != b.shape:
        raise DimensionError(f"shapes differ: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b, "fro"))

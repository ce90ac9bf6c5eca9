"""Optimal step count and decomposition order under a noisy-gate budget.

For a fixed order ``k`` the total error has the form

    r(n) = c_gate * n + c_trotter / n^k

which is convex in ``n`` with its real minimum at
``n* = (k c_trotter / c_gate)^(1/(k+1))`` and value ``(1 + 1/k) c_gate n*``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Literal, Sequence

import numpy as np

from .errors import (
    GateErrorModel,
    TrotterErrorParams,
    analytic_trotter_error,
    f_value,
    gate_error,
)
from .exceptions import DomainError
from .models import ModelSpec, build_hamiltonian
from .trotter import build_schedule

KMode = Literal["analytic", "numeric"]
K_MAX_LIMIT = 8
MAX_GRID = 10_000
# XY: K = 3N - 2 gates per layer against N sites of error weight
XY_SITES_PER_TERM = 1 / 3


@dataclass(frozen=True)
class CostPair:
    c_gate_per_step: float
    c_trotter: float
    order_k: int

    def __post_init__(self):
        if not (math.isfinite(self.c_gate_per_step) and self.c_gate_per_step > 0):
            raise DomainError("c_gate_per_step must be finite and positive")
        if not (math.isfinite(self.c_trotter) and self.c_trotter >= 0):
            raise DomainError("c_trotter must be finite and non-negative")
        if self.order_k < 1:
            raise DomainError("order_k must be >= 1")

    def total(self, n: float) -> float:
        return self.c_gate_per_step * n + self.c_trotter / n**self.order_k


@dataclass(frozen=True)
class OptimumReport:
    n_star_real: float
    n_star_int: int
    r_min: float
    k: int
    r_min_real: float


@dataclass(frozen=True)
class KappaPoint:
    k: int
    kappa: float
    phi: float
    phi_normalized: float


@dataclass(frozen=True)
class KappaCurve:
    b_value: float
    points: tuple[KappaPoint, ...]


@dataclass(frozen=True)
class KoptRow:
    p0: float
    alpha: float
    k_opt: int
    n_opt: int
    r_min: float


def optimal_steps(c: CostPair) -> OptimumReport:
    k = c.order_k
    if c.c_trotter == 0:
        r = c.c_gate_per_step
        return OptimumReport(1.0, 1, r, k, r)
    n_real = (k * c.c_trotter / c.c_gate_per_step) ** (1 / (k + 1))
    r_real = (1 + 1 / k) * c.c_gate_per_step * n_real
    lo = max(1, math.floor(n_real))
    hi = max(1, math.ceil(n_real))
    n_int = lo if c.total(lo) <= c.total(hi) else hi
    return OptimumReport(n_real, n_int, c.total(n_int), k, r_real)


def tfim_b_value(p0: float, alpha: float, a_const: float) -> float:
    """``B = alpha / (P0 A (alpha + 1)^2)``."""
    return alpha / (p0 * a_const * (alpha + 1) ** 2)


def kappa(b: float, k: int, f_mode: str = "inv_k") -> float:
    return (b * f_value(k, f_mode) * k) ** (1 / (k + 1))


def phi(b: float, k: int, f_mode: str = "inv_k") -> float:
    """k-dependent part of the minimized TFIM error, ``2^k kappa(k)``."""
    return 2**k * kappa(b, k, f_mode)


def xy_unit_costs(params: TrotterErrorParams, p0: float, alpha: float, k: int) -> CostPair:
    """Per-gate XY cost pair at ``J = t = 1`` and large ``N``.

    The gate side grows as ``2^k`` like the TFIM objective; the Trotter side
    is the generic order-k XY estimate.
    """
    c_t = XY_SITES_PER_TERM * params.f(k) * (1 + 2 * alpha) ** k * params.a_const**k
    return CostPair(2**k * p0, c_t, k)


def analytic_objective(model_kind: str, params: TrotterErrorParams, p0: float,
                       alpha: float, k: int) -> float:
    if k < 1:
        raise DomainError("k must be >= 1")
    if not 0 < p0 < 1:
        raise DomainError("p0 must lie in (0, 1)")
    if model_kind == "tfim":
        return phi(tfim_b_value(p0, alpha, params.a_const), k, params.f_mode)
    if model_kind == "xy":
        return optimal_steps(xy_unit_costs(params, p0, alpha, k)).r_min_real
    raise DomainError(f"unknown model kind {model_kind!r}")


def cost_pair(model: ModelSpec, params: TrotterErrorParams, gate: GateErrorModel,
              k: int, t: float) -> CostPair:
    """Cost pair of a concrete model, taken from the error formulas at n = 1."""
    K = model.n_terms
    sched = None
    if gate.count_mode == "literal":
        sched = build_schedule(build_hamiltonian(model), k, 1, t, k_max=K_MAX_LIMIT)
    return CostPair(gate_error(gate, K, 1, k, sched),
                    analytic_trotter_error(model, params, k, 1, t), k)


def _argmin(values: Sequence[float]) -> int:
    best = 0
    for i, v in enumerate(values):
        # strict improvement beyond rounding; ties go to the smaller k
        if v < values[best] * (1 - 1e-12):
            best = i
    return best


def k_opt(model: ModelSpec, params: TrotterErrorParams, gate: GateErrorModel,
          t: float = 1.0, mode: KMode = "analytic", k_max: int = K_MAX_LIMIT) -> OptimumReport:
    """Error-minimizing order and its optimal step count.

    ``analytic`` ranks orders by :func:`analytic_objective`; ``numeric`` ranks
    them by the continuous minimum of the model's own cost pair.  Either way
    the reported ``n`` and ``r`` come from that cost pair at the chosen k.
    """
    if not 1 <= k_max <= K_MAX_LIMIT:
        raise DomainError(f"k_max must lie in 1..{K_MAX_LIMIT}")
    ks = range(1, k_max + 1)
    if mode == "analytic":
        scores = [analytic_objective(model.kind, params, gate.p0, model.alpha, k) for k in ks]
        best = ks[_argmin(scores)]
        return optimal_steps(cost_pair(model, params, gate, best, t))
    if mode == "numeric":
        reports = [optimal_steps(cost_pair(model, params, gate, k, t)) for k in ks]
        return reports[_argmin([r.r_min_real for r in reports])]
    raise DomainError(f"unknown mode {mode!r}")


def log_grid(lo: float, hi: float, count: int) -> list[float]:
    if lo <= 0 or hi <= 0:
        raise DomainError("log grids need positive bounds")
    if not 1 <= count <= MAX_GRID:
        raise DomainError(f"grid size must lie in 1..{MAX_GRID}")
    if count == 1:
        return [float(lo)]
    return [float(x) for x in np.logspace(math.log10(lo), math.log10(hi), count)]


def _map(fn: Callable, items: Iterable, workers: int | None) -> list:
    items = list(items)
    if len(items) > MAX_GRID:
        raise DomainError(f"grids are capped at {MAX_GRID} points")
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def sweep_p0(model: ModelSpec, params: TrotterErrorParams, p0_grid: Iterable[float],
             count_mode: str = "eq6", t: float = 1.0, mode: KMode = "analytic",
             k_max: int = K_MAX_LIMIT, workers: int | None = None) -> list[KoptRow]:
    def row(p0: float) -> KoptRow:
        rep = k_opt(model, params, GateErrorModel(p0, count_mode), t, mode, k_max)
        return KoptRow(p0, model.alpha, rep.k, rep.n_star_int, rep.r_min)

    return _map(row, p0_grid, workers)


def sweep_alpha(model: ModelSpec, params: TrotterErrorParams, p0: float,
                alpha_grid: Iterable[float], count_mode: str = "eq6", t: float = 1.0,
                mode: KMode = "analytic", k_max: int = K_MAX_LIMIT,
                workers: int | None = None) -> list[KoptRow]:
    gate = GateErrorModel(p0, count_mode)

    def row(alpha: float) -> KoptRow:
        rep = k_opt(model.with_alpha(alpha), params, gate, t, mode, k_max)
        return KoptRow(p0, alpha, rep.k, rep.n_star_int, rep.r_min)

    return _map(row, alpha_grid, workers)


def kappa_curve(b: float, f_mode: str = "inv_k", k_range: Iterable[int] = range(1, 9)) -> KappaCurve:
    if b <= 0:
        raise DomainError("B must be positive")
    ks = list(k_range)
    phi1 = phi(b, 1, f_mode)
    points = tuple(
        KappaPoint(k, kappa(b, k, f_mode), phi(b, k, f_mode), phi(b, k, f_mode) / phi1)
        for k in ks
    )
    return KappaCurve(b, points)

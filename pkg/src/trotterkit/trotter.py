"""Product-formula schedules built from the complex Suzuki recursion.

A step of order ``k`` over time ``tau`` is

    U_1(tau) = exp(-i tau H_1) exp(-i tau H_2) ... exp(-i tau H_K)
    U_k(tau) = U_{k-1}(p_k tau) U_{k-1}((1 - p_k) tau),  p_k = 1 / (1 + e^{i pi / k})

and the full evolution repeats the step ``n`` times with ``tau = t / n``.
Schedules list factors in application order, i.e. the rightmost operator
of the product comes first.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, replace
from typing import Literal

from .exceptions import DimensionError, DomainError
from .models import ModelSpec
from .pauli import Hamiltonian

DEFAULT_K_MAX = 6

CountMode = Literal["literal", "eq6", "doubling"]
COUNT_MODES = ("literal", "eq6", "doubling")


@dataclass(frozen=True)
class Factor:
    """``exp(-i * weight * H[term_index])``; ``term_index`` is 0-based."""

    term_index: int
    weight: complex


@dataclass(frozen=True)
class Schedule:
    factors: tuple[Factor, ...]
    order: int
    steps: int
    time: float
    n_terms: int
    n_sites: int

    def __len__(self) -> int:
        return len(self.factors)

    def step_weight_sums(self) -> list[list[complex]]:
        """Per step, per term: the summed weight (should be ``t/n`` each).

        Only meaningful for unmerged schedules, whose factors divide evenly
        into steps.
        """
        per_step = len(self.factors) // self.steps
        out = []
        for s in range(self.steps):
            sums = [0j] * self.n_terms
            for f in self.factors[s * per_step:(s + 1) * per_step]:
                sums[f.term_index] += f.weight
            out.append(sums)
        return out


def split_coefficient(k: int) -> complex:
    """Suzuki splitting weight ``p_k``, a root of ``p^k + (1-p)^k = 0``."""
    if k < 2:
        raise DomainError(f"split coefficient needs k >= 2, got {k}")
    return 1 / (1 + cmath.exp(1j * math.pi / k))


def _step(k: int, n_terms: int, tau: complex) -> list[Factor]:
    if k == 1:
        return [Factor(i, tau) for i in reversed(range(n_terms))]
    p = split_coefficient(k)
    # U_{k-1}(p tau) is the left operator, so the (1-p) block acts first
    return _step(k - 1, n_terms, (1 - p) * tau) + _step(k - 1, n_terms, p * tau)


def build_schedule(h: Hamiltonian, k: int, n: int, t: float,
                   k_max: int = DEFAULT_K_MAX) -> Schedule:
    if not 1 <= k <= k_max:
        raise DomainError(f"order k must lie in 1..{k_max}, got {k}")
    if n < 1:
        raise DomainError(f"steps n must be >= 1, got {n}")
    step = _step(k, h.n_terms, complex(t) / n)
    return Schedule(tuple(step * n), k, n, float(t), h.n_terms, h.n_sites)


def merge_adjacent(s: Schedule) -> Schedule:
    """Fuse neighbouring factors on the same term by adding their weights."""
    merged: list[Factor] = []
    for f in s.factors:
        if merged and merged[-1].term_index == f.term_index:
            merged[-1] = Factor(f.term_index, merged[-1].weight + f.weight)
        else:
            merged.append(f)
    return replace(s, factors=tuple(merged))


def gate_count(n_terms: int, n: int, k: int, mode: CountMode = "literal",
               schedule: Schedule | None = None) -> int:
    """Number of exponentials charged to a circuit.

    ``literal`` counts the merged factors of ``schedule``; ``eq6`` is
    ``K n`` at first order and ``2^(k-2) K n`` above; ``doubling`` is the
    unmerged recursion length ``2^(k-1) K n``.
    """
    if mode == "literal":
        if schedule is None:
            raise DomainError("literal gate counting needs a schedule")
        return len(merge_adjacent(schedule))
    if mode == "eq6":
        return n_terms * n if k == 1 else 2 ** (k - 2) * n_terms * n
    if mode == "doubling":
        return 2 ** (k - 1) * n_terms * n
    raise DomainError(f"unknown gate count mode {mode!r}")


def _weight_json(w: complex) -> dict:
    return {"re": w.real, "im": w.imag}


def export_schedule(s: Schedule, h: Hamiltonian, model: ModelSpec | None = None) -> dict:
    if s.n_terms != h.n_terms or s.n_sites != h.n_sites:
        raise DimensionError("schedule does not match the Hamiltonian")
    return {
        "model": model.to_json() if model is not None else None,
        "order": s.order,
        "steps": s.steps,
        "time": s.time,
        "terms": [{"coeff": t.coeff.real, "paulis": t.string.axes} for t in h.terms],
        "factors": [{"term": f.term_index, "weight": _weight_json(f.weight)}
                    for f in s.factors],
    }


def parse_schedule(doc: dict | str) -> tuple[Schedule, Hamiltonian, ModelSpec | None]:
    if isinstance(doc, str):
        doc = json.loads(doc)
    h = Hamiltonian.from_labels([(t["coeff"], t["paulis"]) for t in doc["terms"]])
    factors = tuple(
        Factor(int(f["term"]), complex(f["weight"]["re"], f["weight"]["im"]))
        for f in doc["factors"]
    )
    for f in factors:
        if not 0 <= f.term_index < h.n_terms:
            raise DimensionError(f"factor refers to missing term {f.term_index}")
    model = ModelSpec.from_json(doc["model"]) if doc.get("model") else None
    s = Schedule(factors, int(doc["order"]), int(doc["steps"]), float(doc["time"]),
                 h.n_terms, h.n_sites)
    return s, h, model


def dumps_schedule(s: Schedule, h: Hamiltonian, model: ModelSpec | None = None) -> str:
    return json.dumps(export_schedule(s, h, model), indent=1)

"""Benchmark spin-chain Hamiltonians with open boundaries.

Term order matters for product formulas and is fixed:

* TFIM: ``-J Z_i Z_{i+1}`` for every bond, then ``-G X_i`` for every site.
* XY:   all ``-J X_i X_{i+1}``, then all ``-J Y_i Y_{i+1}``, then ``-G X_i``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Literal

from .exceptions import DomainError
from .pauli import Hamiltonian, PauliString, PauliTerm

ModelKind = Literal["tfim", "xy"]
MODEL_KINDS = ("tfim", "xy")


@dataclass(frozen=True)
class ModelSpec:
    kind: ModelKind
    n_sites: int
    j: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise DomainError(f"unknown model kind {self.kind!r}")
        if int(self.n_sites) != self.n_sites or self.n_sites < 2:
            raise DomainError(f"n_sites must be an integer >= 2, got {self.n_sites}")
        if not (math.isfinite(self.j) and math.isfinite(self.gamma)):
            raise DomainError("couplings must be finite")
        object.__setattr__(self, "n_sites", int(self.n_sites))
        object.__setattr__(self, "j", float(self.j))
        object.__setattr__(self, "gamma", float(self.gamma))

    @property
    def alpha(self) -> float:
        """Field-to-coupling ratio ``gamma / j``."""
        if self.j == 0:
            raise DomainError("alpha is undefined for j = 0")
        return self.gamma / self.j

    @property
    def n_terms(self) -> int:
        return 2 * self.n_sites - 1 if self.kind == "tfim" else 3 * self.n_sites - 2

    def with_alpha(self, alpha: float) -> ModelSpec:
        """Same coupling, field set to ``alpha * j``."""
        return ModelSpec(self.kind, self.n_sites, self.j, alpha * self.j)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, doc: dict) -> ModelSpec:
        return cls(doc["kind"], doc["n_sites"], doc.get("j", 1.0), doc.get("gamma", 1.0))


def _bond(n: int, i: int, axis: str) -> PauliString:
    return PauliString.from_sites(n, {i: axis, i + 1: axis})


def _site(n: int, i: int, axis: str) -> PauliString:
    return PauliString.from_sites(n, {i: axis})


def build_tfim(spec: ModelSpec) -> Hamiltonian:
    if spec.kind != "tfim":
        raise DomainError(f"build_tfim needs kind 'tfim', got {spec.kind!r}")
    n = spec.n_sites
    terms = [PauliTerm(-spec.j, _bond(n, i, "Z")) for i in range(n - 1)]
    terms += [PauliTerm(-spec.gamma, _site(n, i, "X")) for i in range(n)]
    return Hamiltonian(n, tuple(terms))


def build_xy(spec: ModelSpec) -> Hamiltonian:
    if spec.kind != "xy":
        raise DomainError(f"build_xy needs kind 'xy', got {spec.kind!r}")
    n = spec.n_sites
    terms = [PauliTerm(-spec.j, _bond(n, i, "X")) for i in range(n - 1)]
    terms += [PauliTerm(-spec.j, _bond(n, i, "Y")) for i in range(n - 1)]
    terms += [PauliTerm(-spec.gamma, _site(n, i, "X")) for i in range(n)]
    return Hamiltonian(n, tuple(terms))


def build_hamiltonian(spec: ModelSpec) -> Hamiltonian:
    return build_tfim(spec) if spec.kind == "tfim" else build_xy(spec)

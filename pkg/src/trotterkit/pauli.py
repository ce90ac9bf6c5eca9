"""Pauli-string algebra: products, commutators and nested commutator sums.

Strings are stored as text, one character per site from ``IXYZ`` with
site 1 leftmost (``"ZZI"``).  Everything here is exact symbolic algebra;
phases are tracked as powers of ``i``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

from .exceptions import CapabilityError, DimensionError, DomainError

AXES = "IXYZ"
_SORT_KEY = str.maketrans("IXYZ", "0123")

# (a, b) -> (power of i, product axis) for single-site a*b
_SITE_TABLE: dict[tuple[str, str], tuple[int, str]] = {}
for _p in AXES:
    _SITE_TABLE[("I", _p)] = (0, _p)
    _SITE_TABLE[(_p, "I")] = (0, _p)
    _SITE_TABLE[(_p, _p)] = (0, "I")
for _a, _b, _c in (("X", "Y", "Z"), ("Y", "Z", "X"), ("Z", "X", "Y")):
    _SITE_TABLE[(_a, _b)] = (1, _c)
    _SITE_TABLE[(_b, _a)] = (3, _c)

_I_POWERS = (1 + 0j, 1j, -1 + 0j, -1j)

DEFAULT_MAX_DEPTH = 4


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-site Pauli operators."""

    axes: str

    def __post_init__(self):
        if not self.axes:
            raise DimensionError("a Pauli string needs at least one site")
        bad = set(self.axes) - set(AXES)
        if bad:
            raise DomainError(f"invalid Pauli axes {sorted(bad)} in {self.axes!r}")

    @classmethod
    def identity(cls, n_sites: int) -> PauliString:
        return cls("I" * n_sites)

    @classmethod
    def from_sites(cls, n_sites: int, ops: dict[int, str]) -> PauliString:
        """Build a string from ``{site: axis}`` with 0-based sites."""
        axes = ["I"] * n_sites
        for site, op in ops.items():
            axes[site] = op
        return cls("".join(axes))

    @property
    def n_sites(self) -> int:
        return len(self.axes)

    @property
    def is_identity(self) -> bool:
        return set(self.axes) == {"I"}

    @cached_property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, a in enumerate(self.axes) if a != "I")

    def commutes_with(self, other: PauliString) -> bool:
        _check_sites(self, other)
        clashes = sum(
            1 for a, b in zip(self.axes, other.axes)
            if a != "I" and b != "I" and a != b
        )
        return clashes % 2 == 0

    def __str__(self) -> str:
        return self.axes


@dataclass(frozen=True)
class PauliTerm:
    """A complex coefficient times a Pauli string."""

    coeff: complex
    string: PauliString

    def __post_init__(self):
        c = complex(self.coeff)
        if not (np.isfinite(c.real) and np.isfinite(c.imag)):
            raise DomainError(f"non-finite coefficient {self.coeff!r}")
        object.__setattr__(self, "coeff", c)

    @classmethod
    def parse(cls, coeff: complex, axes: str) -> PauliTerm:
        return cls(coeff, PauliString(axes))

    @property
    def n_sites(self) -> int:
        return self.string.n_sites

    @property
    def is_zero(self) -> bool:
        return self.coeff == 0

    def __mul__(self, other):
        if isinstance(other, PauliTerm):
            phase, product = multiply(self.string, other.string)
            return PauliTerm(phase * self.coeff * other.coeff, product)
        return PauliTerm(self.coeff * complex(other), self.string)

    __rmul__ = __mul__

    def __neg__(self) -> PauliTerm:
        return PauliTerm(-self.coeff, self.string)

    def __str__(self) -> str:
        return f"({self.coeff:.6g})*{self.string.axes}"


@dataclass(frozen=True)
class PauliSum:
    """Canonical weighted sum of Pauli strings.

    Terms are sorted lexicographically with ``I < X < Y < Z``, duplicate
    strings are merged and exact zeros dropped.  Build instances with
    :meth:`from_terms`; the raw constructor assumes canonical input.
    """

    terms: tuple[PauliTerm, ...] = ()
    n_sites: int | None = field(default=None, compare=False)

    @classmethod
    def from_terms(cls, terms: Iterable[PauliTerm], n_sites: int | None = None) -> PauliSum:
        acc: dict[PauliString, complex] = defaultdict(complex)
        for term in terms:
            if n_sites is None:
                n_sites = term.n_sites
            elif term.n_sites != n_sites:
                raise DimensionError(
                    f"term on {term.n_sites} sites in a sum over {n_sites} sites")
            acc[term.string] += term.coeff
        merged = sorted(
            (PauliTerm(c, s) for s, c in acc.items() if c != 0),
            key=lambda t: t.string.axes.translate(_SORT_KEY),
        )
        return cls(tuple(merged), n_sites)

    @classmethod
    def zero(cls, n_sites: int | None = None) -> PauliSum:
        return cls((), n_sites)

    def canonical(self) -> PauliSum:
        return PauliSum.from_terms(self.terms, self.n_sites)

    def __iter__(self) -> Iterator[PauliTerm]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: PauliSum) -> PauliSum:
        return PauliSum.from_terms((*self.terms, *other.terms),
                                   self.n_sites or other.n_sites)

    def __neg__(self) -> PauliSum:
        return PauliSum(tuple(-t for t in self.terms), self.n_sites)

    def __sub__(self, other: PauliSum) -> PauliSum:
        return self + (-other)

    def __mul__(self, scalar) -> PauliSum:
        return PauliSum.from_terms((t * scalar for t in self.terms), self.n_sites)

    __rmul__ = __mul__

    def coefficient(self, axes: str) -> complex:
        for t in self.terms:
            if t.string.axes == axes:
                return t.coeff
        return 0j

    def to_labels(self) -> dict[str, complex]:
        return {t.string.axes: t.coeff for t in self.terms}


@dataclass(frozen=True)
class Hamiltonian:
    """Ordered list of real-weighted Pauli terms, ``H = sum_i H_i``.

    The term order is fixed at construction and is the factor order of
    every product formula built from this Hamiltonian.
    """

    n_sites: int
    terms: tuple[PauliTerm, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if self.n_sites < 1:
            raise DimensionError("n_sites must be >= 1")
        if not self.terms:
            raise DomainError("a Hamiltonian needs at least one term")
        for t in self.terms:
            if t.n_sites != self.n_sites:
                raise DimensionError(
                    f"term {t.string.axes} does not act on {self.n_sites} sites")
            if t.coeff.imag != 0:
                raise DomainError(f"Hamiltonian coefficient {t.coeff} is not real")

    @classmethod
    def from_labels(cls, pairs: Sequence[tuple[float, str]]) -> Hamiltonian:
        terms = tuple(PauliTerm.parse(c, axes) for c, axes in pairs)
        return cls(terms[0].n_sites, terms)

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    def as_sum(self) -> PauliSum:
        return PauliSum.from_terms(self.terms, self.n_sites)


def _check_sites(a: PauliString, b: PauliString) -> None:
    if a.n_sites != b.n_sites:
        raise DimensionError(f"length mismatch: {a.n_sites} vs {b.n_sites} sites")


def multiply(a: PauliString, b: PauliString) -> tuple[complex, PauliString]:
    """Return ``(phase, product)`` with ``a @ b == phase * product``."""
    _check_sites(a, b)
    power = 0
    out = []
    for x, y in zip(a.axes, b.axes):
        p, c = _SITE_TABLE[(x, y)]
        power += p
        out.append(c)
    return _I_POWERS[power % 4], PauliString("".join(out))


def commutator(a: PauliTerm, b: PauliTerm) -> PauliSum:
    """``[a, b] = ab - ba``; empty when the strings commute."""
    _check_sites(a.string, b.string)
    n = a.n_sites
    if a.is_zero or b.is_zero or a.string.commutes_with(b.string):
        return PauliSum.zero(n)
    phase, product = multiply(a.string, b.string)
    return PauliSum((PauliTerm(2 * a.coeff * b.coeff * phase, product),), n)


def _term_commutator(a: PauliTerm, b: PauliTerm) -> PauliTerm | None:
    if a.string.commutes_with(b.string):
        return None
    phase, product = multiply(a.string, b.string)
    c = 2 * a.coeff * b.coeff * phase
    return PauliTerm(c, product) if c != 0 else None


def commutator_sums(a: PauliSum, b: PauliSum) -> PauliSum:
    """Bilinear extension of :func:`commutator` to sums."""
    out = []
    for ta in a:
        for tb in b:
            c = _term_commutator(ta, tb)
            if c is not None:
                out.append(c)
    return PauliSum.from_terms(out, a.n_sites or b.n_sites)


def noncommuting_pairs(h: Hamiltonian) -> list[tuple[int, int, PauliTerm]]:
    """All ``(i, j, [H_i, H_j])`` with ``i < j`` and a non-zero commutator."""
    pairs = []
    for i, j in combinations(range(h.n_terms), 2):
        c = _term_commutator(h.terms[i], h.terms[j])
        if c is not None:
            pairs.append((i, j, c))
    return pairs


def first_order_commutator_sum(h: Hamiltonian) -> PauliSum:
    """``sum_{i<j} [H_i, H_j]``.

    The unordered sum over ``i != j`` vanishes by antisymmetry, so pairs are
    taken once in Hamiltonian order.  Use :func:`noncommuting_pairs` for the
    per-pair census.
    """
    return PauliSum.from_terms((c for _, _, c in noncommuting_pairs(h)), h.n_sites)


def nested_commutator_sum(h: Hamiltonian, k: int, max_depth: int = DEFAULT_MAX_DEPTH) -> PauliSum:
    """Sum of right-nested commutators ``[H_a, [H_b, ..., [H_c, H_d]]]``.

    Tuples have length ``k + 1``.  The innermost pair runs over ``c < d``
    (an unrestricted innermost sum cancels identically), the outer indices
    are unrestricted, and tuples whose inner commutator is already zero are
    pruned.  ``k = 1`` is :func:`first_order_commutator_sum`.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if k + 1 > max_depth:
        raise CapabilityError(f"tuple depth {k + 1} exceeds the limit {max_depth}")
    partial = [c for _, _, c in noncommuting_pairs(h)]
    for _ in range(k - 1):
        nxt = []
        for outer in h.terms:
            for inner in partial:
                c = _term_commutator(outer, inner)
                if c is not None:
                    nxt.append(c)
        partial = nxt
        if not partial:
            break
    return PauliSum.from_terms(partial, h.n_sites)


def one_norm(s: PauliSum) -> float:
    """Sum of absolute coefficients."""
    return float(sum(abs(t.coeff) for t in s.terms))


_SITE_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def string_matrix(s: PauliString) -> np.ndarray:
    """Dense matrix of a string, site 1 as the most significant factor."""
    out = np.ones((1, 1), dtype=complex)
    for a in s.axes:
        out = np.kron(out, _SITE_MATRICES[a])
    return out


def sum_matrix(s: PauliSum | Hamiltonian, n_sites: int | None = None) -> np.ndarray:
    n = n_sites or s.n_sites
    if n is None:
        raise DimensionError("cannot size the dense matrix of an empty sum")
    out = np.zeros((2**n, 2**n), dtype=complex)
    for t in s.terms:
        out += t.coeff * string_matrix(t.string)
    return out

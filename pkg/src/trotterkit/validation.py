"""Self-validation suite behind ``trotterkit validate``.

Each check compares a library path against an independent dense or
closed-form reference, or against frozen fixture values.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from itertools import product
from typing import Callable

import numpy as np

from .errors import GateErrorModel, TrotterErrorParams, total_error
from .exceptions import TrotterKitError
from .models import ModelSpec, build_tfim, build_xy
from .optimizer import CostPair, k_opt, log_grid, optimal_steps
from .pauli import (
    PauliString,
    first_order_commutator_sum,
    multiply,
    nested_commutator_sum,
    noncommuting_pairs,
    one_norm,
    string_matrix,
)
from .statevec import (
    apply_schedule,
    basis_state,
    dense_exact_operator,
    dense_operator,
    exact_evolve,
    infidelity_pair,
    operator_distance,
    plus_state,
)
from .trotter import build_schedule, merge_adjacent, split_coefficient


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def load_fixtures(path: str | None = None) -> dict:
    if path is None:
        text = resources.files("trotterkit").joinpath("data/fixtures.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return json.loads(text)


def _pauli_closure() -> None:
    for a, b in product("IXYZ", repeat=2):
        phase, c = multiply(PauliString(a), PauliString(b))
        lhs = string_matrix(PauliString(a)) @ string_matrix(PauliString(b))
        assert np.allclose(lhs, phase * string_matrix(c), atol=1e-12), (a, b)


def _census() -> None:
    for n in range(3, 9):
        pairs = noncommuting_pairs(build_tfim(ModelSpec("tfim", n)))
        assert len(pairs) == 2 * (n - 1), f"tfim N={n}: {len(pairs)} pairs"
        xy = noncommuting_pairs(build_xy(ModelSpec("xy", n)))
        mags = sorted(abs(c.coeff) for _, _, c in xy)
        assert mags == [2.0] * (2 * (n - 1) + 2 * (n - 2)), f"xy N={n}"


def _split_and_telescope() -> None:
    for k in range(2, 9):
        p = split_coefficient(k)
        assert abs(p**k + (1 - p) ** k) < 1e-12, k
    h = build_tfim(ModelSpec("tfim", 3))
    for k in range(1, 7):
        s = build_schedule(h, k, 2, 0.7)
        for sums in s.step_weight_sums():
            assert max(abs(w - 0.35) for w in sums) < 1e-12, k


def _order_scaling() -> None:
    h = build_tfim(ModelSpec("tfim", 3))
    u = dense_exact_operator(h, 0.4)
    ns = np.array([8, 16, 32])
    for k in (1, 2, 3):
        errs = [operator_distance(dense_operator(build_schedule(h, k, n, 0.4), h), u) for n in ns]
        slope = np.polyfit(np.log(ns), np.log(errs), 1)[0]
        assert abs(slope + k) <= 0.25, f"k={k} slope {slope:.3f}"


def _oracle_equivalence() -> None:
    h = build_tfim(ModelSpec("tfim", 3))
    psi = plus_state(3)
    for k in (1, 2, 3):
        s = build_schedule(h, k, 4, 0.6)
        got = apply_schedule(s, h, psi).amps
        ref = dense_operator(s, h) @ psi.amps
        assert np.max(np.abs(got - ref)) < 1e-10, k
    phi = exact_evolve(h, 0.7, basis_state("000")).amps
    ref = dense_exact_operator(h, 0.7)[:, 0]
    assert np.max(np.abs(phi - ref)) < 1e-10


def _optimal_steps() -> None:
    rep = optimal_steps(CostPair(10 * 5e-5, 5.0, 1))
    assert math.isclose(rep.n_star_real, 100, rel_tol=1e-12)
    assert math.isclose(rep.r_min_real, 10 * math.sqrt(2 * 5e-5), rel_tol=1e-12)


def _staircase() -> None:
    model = ModelSpec("tfim", 10)
    params = TrotterErrorParams()
    ks = [k_opt(model, params, GateErrorModel(p)).k for p in log_grid(1e-2, 1e-8, 25)]
    assert all(b >= a for a, b in zip(ks, ks[1:])), ks
    assert ks[0] == 1 and ks[-1] >= 2


def _fixtures(fx: dict) -> Callable[[], None]:
    def check() -> None:
        h2 = build_tfim(ModelSpec("tfim", 2))
        h3 = build_tfim(ModelSpec("tfim", 3))
        assert math.isclose(one_norm(nested_commutator_sum(h2, 2)),
                            fx["nested_k2_tfim_n2_one_norm"], rel_tol=1e-12)
        assert math.isclose(one_norm(first_order_commutator_sum(h3)),
                            fx["first_order_tfim_n3_one_norm"], rel_tol=1e-12)
        assert len(merge_adjacent(build_schedule(h2, 3, 2, 1.0))) == fx["merged_count_k3_K3_n2"]
        amps = apply_schedule(build_schedule(h2, 1, 1, 0.1), h2, basis_state("00")).amps
        ref = np.array([complex(a["re"], a["im"]) for a in fx["k1_n1_tfim_n2_t0.1_amps"]])
        assert np.max(np.abs(amps - ref)) < 1e-12
        sim = fx["simulate_tfim_n3_t0.5_k2_n16"]
        got = infidelity_pair(h3, build_schedule(h3, 2, 16, 0.5), basis_state("000"))
        want = (sim["infidelity_normalized"], sim["infidelity_raw"], sim["norm_deviation"])
        for g, w in zip(got, want):
            assert math.isclose(g, w, rel_tol=1e-6, abs_tol=1e-14), (g, w)
        b = total_error(GateErrorModel(5e-5, "eq6"), ModelSpec("tfim", 5), TrotterErrorParams(),
                        1, 100, 1.0)
        assert math.isclose(b.r_total, fx["total_error_tfim_n5_k1_n100"], rel_tol=1e-12)

    return check


def run_checks(fixtures_path: str | None = None) -> list[CheckResult]:
    try:
        fx = load_fixtures(fixtures_path)
    except (OSError, json.JSONDecodeError) as exc:
        return [CheckResult("fixtures", False, f"cannot load fixtures: {exc}")]
    checks: list[tuple[str, Callable[[], None]]] = [
        ("pauli_closure", _pauli_closure),
        ("commutator_census", _census),
        ("split_coefficient_and_telescoping", _split_and_telescope),
        ("order_scaling", _order_scaling),
        ("oracle_equivalence", _oracle_equivalence),
        ("optimal_steps_closed_form", _optimal_steps),
        ("k_opt_staircase", _staircase),
        ("fixtures", _fixtures(fx)),
    ]
    results = []
    for name, fn in checks:
        try:
            fn()
        except (AssertionError, KeyError, TypeError, TrotterKitError) as exc:
            results.append(CheckResult(name, False, str(exc) or type(exc).__name__))
        else:
            results.append(CheckResult(name, True))
    return results

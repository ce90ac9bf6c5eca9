"""Command-line interface: ``trotterkit <command> [flags]``.

Commands: simulate, kappa, kopt, sweep, export-schedule, validate.
Exit codes: 0 success, 2 argument error, 3 numeric or validation failure.
Flags override values from ``--config FILE`` which override built-in defaults.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, fields, replace
from typing import Sequence

from .errors import (
    F_MODES,
    GateErrorModel,
    TrotterErrorParams,
    gate_error,
    total_error,
)
from .exceptions import NumericError, TrotterKitError
from .models import MODEL_KINDS, ModelSpec, build_hamiltonian
from .optimizer import kappa_curve, log_grid, sweep_alpha, tfim_b_value
from .statevec import infidelity_pair, initial_state
from .trotter import COUNT_MODES, build_schedule, export_schedule, merge_adjacent

EXIT_OK, EXIT_ARGS, EXIT_NUMERIC = 0, 2, 3
MAX_SIM_SITES = 12
MAX_EMPIRICAL_SITES = 10


class ArgumentError(TrotterKitError, ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    model: str = "tfim"
    n_spins: int = 4
    j: float = 1.0
    gamma: float = 1.0
    time: float = 1.0
    order: int = 1
    steps: int = 10
    p0: str = "1e-3"
    p0_grid: str | None = None
    alpha: float | None = None
    alpha_grid: str | None = None
    a_const: float = 2.0
    f_mode: str = "inv_k"
    gate_count_mode: str | None = None
    state: str = "zeros"
    normalize: bool = True
    orders: str = "1,2,3"
    steps_list: str = "1,2,4,8,16,32,64,128"
    k_max: int = 8
    mode: str = "analytic"
    empirical: bool = False
    workers: int = 1
    fixtures: str | None = None
    out: str | None = None
    format: str | None = None

    def model_spec(self) -> ModelSpec:
        gamma = self.gamma if self.alpha is None else self.alpha * self.j
        return ModelSpec(self.model, self.n_spins, self.j, gamma)

    def params(self) -> TrotterErrorParams:
        return TrotterErrorParams(self.a_const, self.f_mode)


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError as exc:
        raise ArgumentError(f"bad number list {text!r}") from exc


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError as exc:
        raise ArgumentError(f"bad integer list {text!r}") from exc


def parse_grid(text: str) -> list[float]:
    """``lo:hi:count`` log-spaced, or a comma list."""
    if ":" not in text:
        return _floats(text)
    try:
        lo, hi, count = text.split(":")
        return log_grid(float(lo), float(hi), int(count))
    except ValueError as exc:
        raise ArgumentError(f"bad grid {text!r}, expected lo:hi:count") from exc


def validate_config(cfg: RunConfig) -> None:
    if cfg.model not in MODEL_KINDS:
        raise ArgumentError(f"--model must be one of {MODEL_KINDS}")
    if cfg.n_spins < 2:
        raise ArgumentError("--n-spins must be >= 2")
    if cfg.time <= 0:
        raise ArgumentError("--time must be positive")
    if cfg.order < 1 or cfg.steps < 1:
        raise ArgumentError("--order and --steps must be >= 1")
    if cfg.f_mode not in F_MODES:
        raise ArgumentError(f"--f-mode must be one of {F_MODES}")
    if cfg.gate_count_mode is not None and cfg.gate_count_mode not in COUNT_MODES:
        raise ArgumentError(f"--gate-count-mode must be one of {COUNT_MODES}")
    if cfg.a_const <= 1:
        raise ArgumentError("--a-const must exceed 1")
    if cfg.state not in ("zeros", "plus"):
        raise ArgumentError("--state must be zeros or plus")
    if cfg.format not in (None, "csv", "json"):
        raise ArgumentError("--format must be csv or json")
    if cfg.mode not in ("analytic", "numeric"):
        raise ArgumentError("--mode must be analytic or numeric")
    if not 1 <= cfg.k_max <= 8:
        raise ArgumentError("--k-max must lie in 1..8")
    for p in p0_values(cfg):
        if not 0 < p < 1:
            raise ArgumentError(f"P0 values must lie in (0, 1), got {p}")


def p0_values(cfg: RunConfig) -> list[float]:
    if cfg.p0_grid:
        return parse_grid(cfg.p0_grid)
    return _floats(cfg.p0)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format(v, ".12e")
    return str(v)


def render_table(rows: list[dict], columns: Sequence[str], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([{c: r[c] for c in columns} for r in rows], indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def cmd_simulate(cfg: RunConfig) -> dict:
    if cfg.n_spins > MAX_SIM_SITES:
        raise ArgumentError(f"simulate supports at most {MAX_SIM_SITES} spins")
    model = cfg.model_spec()
    h = build_hamiltonian(model)
    sched = build_schedule(h, cfg.order, cfg.steps, cfg.time)
    psi0 = initial_state(cfg.state, cfg.n_spins)
    normalized, raw, drift = infidelity_pair(h, sched, psi0)
    gate = GateErrorModel(_floats(cfg.p0)[0], cfg.gate_count_mode or "literal")
    r_gate = gate_error(gate, h.n_terms, cfg.steps, cfg.order, sched)
    r_trotter = normalized if cfg.normalize else raw
    return {
        "infidelity_normalized": normalized,
        "infidelity_raw": raw,
        "norm_deviation": drift,
        "gate_error": r_gate,
        "r_total": r_gate + r_trotter,
        "factor_count": len(merge_adjacent(sched)),
    }


KAPPA_COLUMNS = ("p0", "k", "kappa", "phi", "phi_norm")


def cmd_kappa(cfg: RunConfig) -> list[dict]:
    alpha = cfg.alpha if cfg.alpha is not None else cfg.gamma / cfg.j
    rows = []
    for p0 in sorted(p0_values(cfg)):
        curve = kappa_curve(tfim_b_value(p0, alpha, cfg.a_const), cfg.f_mode,
                            range(1, cfg.k_max + 1))
        rows += [{"p0": p0, "k": pt.k, "kappa": pt.kappa, "phi": pt.phi,
                  "phi_norm": pt.phi_normalized} for pt in curve.points]
    return rows


KOPT_COLUMNS = ("p0", "alpha", "k_opt", "n_opt", "r_min")


def cmd_kopt(cfg: RunConfig) -> list[dict]:
    model = cfg.model_spec()
    params = cfg.params()
    count_mode = cfg.gate_count_mode or "eq6"
    alphas = parse_grid(cfg.alpha_grid) if cfg.alpha_grid else [model.alpha]
    rows = []
    for p0 in sorted(p0_values(cfg)):
        rows += sweep_alpha(model, params, p0, sorted(alphas), count_mode, cfg.time,
                            cfg.mode, cfg.k_max, cfg.workers)
    return [{"p0": r.p0, "alpha": float(r.alpha), "k_opt": r.k_opt, "n_opt": r.n_opt,
             "r_min": r.r_min} for r in rows]


SWEEP_COLUMNS = ("k", "n", "r_gate", "r_trotter", "r_total", "source")


def cmd_sweep(cfg: RunConfig) -> tuple[list[dict], list[str]]:
    model = cfg.model_spec()
    params = cfg.params()
    gate = GateErrorModel(_floats(cfg.p0)[0], cfg.gate_count_mode or "literal")
    columns = list(SWEEP_COLUMNS)
    psi0 = None
    if cfg.empirical:
        if cfg.n_spins > MAX_EMPIRICAL_SITES:
            raise ArgumentError(f"empirical column needs at most {MAX_EMPIRICAL_SITES} spins")
        columns.append("r_empirical")
        psi0 = initial_state(cfg.state, cfg.n_spins)
    rows = []
    for k in sorted(_ints(cfg.orders)):
        for n in sorted(_ints(cfg.steps_list)):
            b = total_error(gate, model, params, k, n, cfg.time)
            row = b.to_json()
            if psi0 is not None:
                row["r_empirical"] = total_error(gate, model, params, k, n, cfg.time,
                                                 "empirical", psi0).r_trotter
            rows.append(row)
    return rows, columns


def cmd_export_schedule(cfg: RunConfig) -> dict:
    model = cfg.model_spec()
    h = build_hamiltonian(model)
    return export_schedule(build_schedule(h, cfg.order, cfg.steps, cfg.time), h, model)


def cmd_validate(cfg: RunConfig) -> tuple[bool, str]:
    from .validation import run_checks

    results = run_checks(cfg.fixtures)
    lines = [f"{'PASS' if r.passed else 'FAIL'} {r.name}" + ("" if r.passed else f": {r.detail}")
             for r in results]
    return all(r.passed for r in results), "\n".join(lines) + "\n"


def _add_common(p: argparse.ArgumentParser) -> None:
    s = argparse.SUPPRESS
    p.add_argument("--config", default=s, help="JSON file of flag values")
    p.add_argument("--model", choices=MODEL_KINDS, default=s)
    p.add_argument("--n-spins", type=int, default=s)
    p.add_argument("--j", type=float, default=s)
    p.add_argument("--gamma", type=float, default=s)
    p.add_argument("--time", type=float, default=s)
    p.add_argument("--order", type=int, default=s)
    p.add_argument("--steps", type=int, default=s)
    p.add_argument("--p0", default=s, help="gate error, or comma list")
    p.add_argument("--p0-grid", default=s, help="lo:hi:count, log-spaced")
    p.add_argument("--alpha", type=float, default=s, help="sets gamma = alpha * j")
    p.add_argument("--alpha-grid", default=s, help="lo:hi:count or comma list")
    p.add_argument("--a-const", type=float, default=s)
    p.add_argument("--f-mode", choices=F_MODES, default=s)
    p.add_argument("--gate-count-mode", choices=COUNT_MODES, default=s)
    p.add_argument("--state", choices=("zeros", "plus"), default=s)
    p.add_argument("--no-normalize", dest="normalize", action="store_false", default=s)
    p.add_argument("--orders", default=s, help="comma list of k for sweep")
    p.add_argument("--steps-list", default=s, help="comma list of n for sweep")
    p.add_argument("--k-max", type=int, default=s)
    p.add_argument("--mode", choices=("analytic", "numeric"), default=s)
    p.add_argument("--empirical", action="store_true", default=s)
    p.add_argument("--workers", type=int, default=s)
    p.add_argument("--fixtures", default=s, help="fixture file for validate")
    p.add_argument("--out", default=s)
    p.add_argument("--format", choices=("csv", "json"), default=s)


COMMANDS = ("simulate", "kappa", "kopt", "sweep", "export-schedule", "validate")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trotterkit",
        description="Trotter-Suzuki error budgets and optimal decomposition orders.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        _add_common(sub.add_parser(name))
    return parser


def resolve_config(ns: argparse.Namespace) -> RunConfig:
    values = vars(ns).copy()
    values.pop("command", None)
    merged: dict = {}
    path = values.pop("config", None)
    if path:
        try:
            with open(path) as fh:
                merged.update({k.replace("-", "_"): v for k, v in json.load(fh).items()})
        except (OSError, json.JSONDecodeError) as exc:
            raise ArgumentError(f"cannot read config {path}: {exc}") from exc
    merged.update(values)
    known = {f.name for f in fields(RunConfig)}
    unknown = set(merged) - known
    if unknown:
        raise ArgumentError(f"unknown config keys {sorted(unknown)}")
    cfg = replace(RunConfig(), **merged)
    validate_config(cfg)
    return cfg


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = resolve_config(ns)
        cmd = ns.command
        if cmd == "simulate":
            report = cmd_simulate(cfg)
            text = (render_table([report], list(report), "csv") if cfg.format == "csv"
                    else json.dumps(report, indent=1) + "\n")
        elif cmd == "kappa":
            text = render_table(cmd_kappa(cfg), KAPPA_COLUMNS, cfg.format or "csv")
        elif cmd == "kopt":
            text = render_table(cmd_kopt(cfg), KOPT_COLUMNS, cfg.format or "csv")
        elif cmd == "sweep":
            rows, columns = cmd_sweep(cfg)
            text = render_table(rows, columns, cfg.format or "csv")
        elif cmd == "export-schedule":
            text = json.dumps(cmd_export_schedule(cfg), indent=1) + "\n"
        else:
            ok, text = cmd_validate(cfg)
            _emit(text, cfg.out)
            return EXIT_OK if ok else EXIT_NUMERIC
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (TrotterKitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    _emit(text, cfg.out)
    return EXIT_OK


def main() -> None:
    sys.exit(run())

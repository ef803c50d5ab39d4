"""Experiment driver: the light-speed sweep and its reports.

Runs the ground-state solve over an increasing schedule of c values plus the
limit state, warm-starting each solve from the previous one, and assembles the
convergence table (H^1 distance to the limit state per c) together with the
uniform-bound diagnostics.  Output is plot-ready CSV/JSON plus raw field
snapshots; identical configurations produce byte-identical CSV.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .model import PhysParams, RealField, grad_norm_sq, make_grid, norm_hhalf, norm_l2
from .snapshot import save_field
from .solver import (
    GroundState,
    SolverConfig,
    h1_distance,
    radial_scatter,
    solve_ground_state,
    warm_config,
)
from .symbol import limit_multiplier, relativistic_multiplier

DEFAULT_SCHEDULE = (1.0, 2.0, 4.0, 8.0, 16.0, 32.0)

RECORD_FIELDS = ("c", "I", "lp", "l2_sq", "grad_sq", "hhalf", "err_h1",
                 "residual", "iterations", "radial_scatter", "min_over_max", "converged")


@dataclass(frozen=True)
class SweepRecord:
    """One row of the convergence table (c = inf for the limit state)."""

    c: float
    I: float
    lp: float
    l2_sq: float
    grad_sq: float
    hhalf: float
    err_h1: float
    residual: float
    iterations: int
    radial_scatter: float
    min_over_max: float
    converged: bool


@dataclass(frozen=True)
class RunConfig:
    """Sweep configuration: physics (without c), grid, schedule, solver, output."""

    m: float = 1.0
    mu: float = 1.0
    p: float = 3.0
    n: int = 2
    L: float = 32.0
    N: int = 256
    c_schedule: tuple[float, ...] = DEFAULT_SCHEDULE
    solver: SolverConfig = field(default_factory=SolverConfig)
    output_dir: str | None = None

    def __post_init__(self):
        sched = tuple(float(c) for c in self.c_schedule)
        if not sched:
            raise ValueError("c_schedule must not be empty")
        if any(b <= a for a, b in zip(sched, sched[1:])):
            raise ValueError("c_schedule must be strictly increasing")
        object.__setattr__(self, "c_schedule", sched)
        make_grid(self.n, self.L, self.N)
        for c in sched:
            self.params_at(c)  # validates c >= 1 and mu <= m c^2

    def params_at(self, c: float) -> PhysParams:
        return PhysParams(m=self.m, mu=self.mu, c=float(c), p=self.p, n=self.n)

    @property
    def limit_params(self) -> PhysParams:
        return PhysParams(m=self.m, mu=self.mu, c=math.inf, p=self.p, n=self.n)


def run_config_from_dict(raw: dict) -> RunConfig:
    """Build a RunConfig from the parsed configuration file (all keys optional)."""
    params = raw.get("params", {})
    grid = raw.get("grid", {})
    solver = raw.get("solver", {})
    known = {"tol_residual", "max_iter", "gamma", "init_width", "fallback_step"}
    unknown = set(solver) - known
    if unknown:
        raise ValueError(f"unknown solver keys: {sorted(unknown)}")
    return RunConfig(
        m=float(params.get("m", 1.0)),
        mu=float(params.get("mu", 1.0)),
        p=float(params.get("p", 3.0)),
        n=int(params.get("n", 2)),
        L=float(grid.get("L", 32.0)),
        N=int(grid.get("N", 256)),
        c_schedule=tuple(float(c) for c in raw.get("c_schedule", DEFAULT_SCHEDULE)),
        solver=SolverConfig(**{k: solver[k] for k in solver}),
        output_dir=raw.get("output_dir"),
    )


def load_run_config(path: str | Path) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return run_config_from_dict(json.load(fh))


@dataclass(frozen=True)
class SweepResult:
    records: tuple[SweepRecord, ...]       # one per c, schedule order
    limit_record: SweepRecord
    states: tuple[GroundState, ...]
    limit_state: GroundState

    def all_records(self) -> tuple[SweepRecord, ...]:
        return self.records + (self.limit_record,)


def make_record(c: float, gs: GroundState, reference: RealField) -> SweepRecord:
    v = gs.field.values
    peak = float(np.max(v))
    return SweepRecord(
        c=float(c),
        I=float(gs.report.I),
        lp=float(gs.report.lp),
        l2_sq=float(norm_l2(gs.field) ** 2),
        grad_sq=float(grad_norm_sq(gs.field)),
        hhalf=float(norm_hhalf(gs.field)),
        err_h1=float(h1_distance(gs.field, reference)),
        residual=float(gs.report.residual),
        iterations=int(gs.iterations),
        radial_scatter=float(radial_scatter(gs.field)),
        min_over_max=float(np.min(v) / peak) if peak > 0.0 else 0.0,
        converged=bool(gs.converged),
    )


def run_sweep(cfg: RunConfig) -> SweepResult:
    """Solve the limit state, then every c in the schedule (warm-started).

    Non-converged solves flag their row and the sweep continues.  When
    cfg.output_dir is set, the table and all snapshots are written atomically.
    """
    grid = make_grid(cfg.n, cfg.L, cfg.N)
    limit_gs = solve_ground_state(cfg.limit_params, grid,
                                  limit_multiplier(grid, cfg.limit_params), cfg.solver)
    states: list[GroundState] = []
    prev: GroundState | None = None
    for c in cfg.c_schedule:
        pc = cfg.params_at(c)
        Mc = relativistic_multiplier(grid, pc)
        scfg = cfg.solver if prev is None else warm_config(cfg.solver, prev.field)
        gs = solve_ground_state(pc, grid, Mc, scfg)
        states.append(gs)
        prev = gs
    records = tuple(make_record(c, gs, limit_gs.field)
                    for c, gs in zip(cfg.c_schedule, states))
    limit_record = make_record(math.inf, limit_gs, limit_gs.field)
    result = SweepResult(records=records, limit_record=limit_record,
                         states=tuple(states), limit_state=limit_gs)
    if cfg.output_dir is not None:
        out = Path(cfg.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        emit(result.all_records(), out)
        for c, gs in zip(cfg.c_schedule + (math.inf,), states + [limit_gs]):
            save_state(out, gs, c)
    return result


def save_state(out_dir: str | Path, gs: GroundState, c: float) -> tuple[Path, Path]:
    """Snapshot file plus a JSON side-car with the scalar diagnostics."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    label = f"{c:g}"
    snap = save_field(out / f"state_c{label}.f64", gs.field, gs.params)
    payload = {
        "c": _json_safe(float(c)),
        "params": {k: _json_safe(v) for k, v in dataclasses.asdict(gs.params).items()},
        "iterations": gs.iterations,
        "converged": gs.converged,
        "report": dataclasses.asdict(gs.report),
    }
    side = _write_atomic(out / f"state_c{label}.json",
                         json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return snap, side


@dataclass(frozen=True)
class BoundsReport:
    """Observed counterparts of the uniform estimates across the sweep."""

    lp_min: float
    lp_max: float
    lp_ratio: float
    sup_energy: float
    hhalf_max: float
    hhalf_limit: float | None
    #: per row: (c, 2m*lp - (grad_sq + 2*m*mu*l2_sq), same over 2m*lp)
    slacks: tuple[tuple[float, float, float], ...]


def check_uniform_bounds(records, m: float, mu: float) -> BoundsReport:
    """Evaluate the sweep against the uniform L^p / H^1 estimates.

    Needs at least two converged finite-c rows.  The slack column is
    2m ||u||_p^p - (||grad u||^2 + 2 m mu ||u||^2); it vanishes identically at
    the limit state and stays within an O(c^-2) margin below zero at finite c.
    """
    rows = [r for r in records if r.converged]
    finite = [r for r in rows if math.isfinite(r.c)]
    if len(finite) < 2:
        raise ValueError("need at least two converged finite-c records")
    lp_vals = [r.lp for r in finite]
    slacks = tuple(
        (r.c,
         2.0 * m * r.lp - (r.grad_sq + 2.0 * m * mu * r.l2_sq),
         (2.0 * m * r.lp - (r.grad_sq + 2.0 * m * mu * r.l2_sq)) / (2.0 * m * r.lp))
        for r in rows
    )
    limit_rows = [r for r in rows if math.isinf(r.c)]
    return BoundsReport(
        lp_min=min(lp_vals),
        lp_max=max(lp_vals),
        lp_ratio=max(lp_vals) / min(lp_vals),
        sup_energy=max(r.I for r in rows),
        hhalf_max=max(r.hhalf for r in finite),
        hhalf_limit=limit_rows[0].hhalf if limit_rows else None,
        slacks=slacks,
    )


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def records_to_csv(records) -> str:
    lines = [",".join(RECORD_FIELDS)]
    for r in records:
        lines.append(",".join(_fmt(getattr(r, name)) for name in RECORD_FIELDS))
    return "\n".join(lines) + "\n"


def _json_safe(value):
    # keep the output strict JSON: the limit row's c becomes the string "inf"
    if isinstance(value, float) and not math.isfinite(value):
        return "inf" if value > 0 else "-inf"
    return value


def records_to_json(records) -> str:
    rows = [{name: _json_safe(getattr(r, name)) for name in RECORD_FIELDS}
            for r in records]
    return json.dumps(rows, indent=2) + "\n"


def _write_atomic(path: Path, text: str) -> Path:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="ascii")
    os.replace(tmp, path)
    return path


def emit(records, out_dir: str | Path, formats=("csv", "json"),
         basename: str = "sweep") -> list[Path]:
    """Write the table in the requested formats; returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for fmt in formats:
        if fmt == "csv":
            written.append(_write_atomic(out / f"{basename}.csv", records_to_csv(records)))
        elif fmt == "json":
            written.append(_write_atomic(out / f"{basename}.json", records_to_json(records)))
        else:
            raise ValueError(f"unknown format {fmt!r}")
    return written

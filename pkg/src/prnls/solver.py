"""Ground-state computation for any kinetic multiplier.

The workhorse is the Petviashvili fixed-point iteration

    u_{k+1} = M_k^gamma * (A + mu)^{-1} (u_k)_+^{p-1},
    M_k = <(A + mu) u_k, u_k> / <(u_k)_+^{p-1}, u_k>,

with the stabilizing exponent gamma = (p-1)/(p-2).  (A + mu)^{-1} is exact in
spectral space.  A preconditioned, Nehari-projected gradient descent is kept
as an independent fallback; the two must agree on the default configuration.

Converged states are gauge-fixed: translated (including a sub-grid Fourier
shift) so the maximum sits at the box center, then rescaled onto the Nehari
manifold.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .model import (
    Grid,
    PhysParams,
    RealField,
    SpectralField,
    _derivative_freqs,
    gaussian_field,
    norm_h1,
    to_physical,
    to_spectral,
    warn_if_poorly_truncated,
)
from .symbol import Multiplier
from .variational import EnergyReport, _pos_pow, clamped_power, energy, nehari_project

BLOWUP_NORM = 1e12


class BlowUpError(RuntimeError):
    """The iterate left any plausible basin (L2 norm above 1e12)."""


@dataclass(frozen=True)
class SolverConfig:
    """Iteration controls; defaults match the desk-scale configuration."""

    tol_residual: float = 1e-9
    max_iter: int = 10000
    gamma: float | None = None          # None -> (p-1)/(p-2)
    init_width: float = 2.0
    init_field: RealField | None = None
    fallback_step: float = 0.5

    def __post_init__(self):
        if not self.tol_residual > 0.0:
            raise ValueError("tol_residual must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.gamma is not None and not self.gamma > 1.0:
            raise ValueError("gamma must exceed 1")
        if not self.fallback_step > 0.0:
            raise ValueError("fallback_step must be positive")

    def resolved_gamma(self, p: float) -> float:
        return self.gamma if self.gamma is not None else (p - 1.0) / (p - 2.0)


@dataclass(frozen=True)
class GroundState:
    """A converged (or best-effort) state plus its scalar diagnostics."""

    field: RealField
    report: EnergyReport
    iterations: int
    converged: bool
    params: PhysParams


def recenter(f: RealField) -> RealField:
    """Cyclic shift placing the (first, in row-major order) maximum at the box center.

    Degenerate plateaus are reported through a warning and resolved by the
    lexicographically smallest maximizer.
    """
    v = f.values
    peak = float(np.max(v))
    span = peak - float(np.min(v))
    if np.count_nonzero(v >= peak - 1e-12 * span) > 1:
        warnings.warn("degenerate maximum plateau; recentering on the first maximizer",
                      stacklevel=2)
    idx = np.unravel_index(int(np.argmax(v)), v.shape)
    shifts = tuple(f.grid.center_index - i for i in idx)
    if all(s == 0 for s in shifts):
        return f
    return RealField(f.grid, np.roll(v, shifts, axis=tuple(range(f.grid.n))))


def subgrid_recenter(f: RealField) -> RealField:
    """Fourier-shift the field so the centroid of (u_+)^2 lands exactly at the center.

    Integer recentering leaves a sub-cell offset whenever the true maximum
    falls between lattice points; the phase shift removes it with spectral
    accuracy (the Nyquist row is left unshifted).
    """
    w = np.maximum(f.values, 0.0) ** 2
    total = float(np.sum(w))
    if total == 0.0:
        return f
    x = f.grid.axis_coordinates()
    center = f.grid.center_coordinate
    deltas = []
    for axis in range(f.grid.n):
        shape = [1] * f.grid.n
        shape[axis] = f.grid.N
        deltas.append(center - float(np.sum(w * x.reshape(shape))) / total)
    if max(abs(d) for d in deltas) < 1e-14:
        return f
    F = to_spectral(f)
    kd = _derivative_freqs(f.grid)
    phase = np.ones(f.grid.shape, dtype=np.complex128)
    for axis, d in enumerate(deltas):
        shape = [1] * f.grid.n
        shape[axis] = f.grid.N
        phase = phase * np.exp(-1j * d * kd).reshape(shape)
    return to_physical(SpectralField(f.grid, phase * F.coeffs))


def radial_scatter(f: RealField) -> float:
    """Max spread of field values over lattice points at exactly equal radius.

    Points are grouped by the integer squared index-distance from the center,
    the thinnest nonempty radius bins the lattice admits, so an exactly radial
    function scores 0 and the result measures pure anisotropy.  Normalized by
    the global maximum modulus.
    """
    v = f.values
    scale = float(np.max(np.abs(v)))
    if scale == 0.0:
        return 0.0
    idx = np.arange(f.grid.N) - f.grid.center_index
    mesh = np.meshgrid(*([idx] * f.grid.n), indexing="ij")
    keys = sum(a * a for a in mesh).ravel()
    flat = v.ravel()
    top = np.full(int(keys.max()) + 1, -np.inf)
    bot = np.full(int(keys.max()) + 1, np.inf)
    np.maximum.at(top, keys, flat)
    np.minimum.at(bot, keys, flat)
    present = top > -np.inf
    return float(np.max(top[present] - bot[present])) / scale


def h1_distance(f: RealField, g: RealField) -> float:
    return norm_h1(RealField(f.grid, f.values - g.values))


def _initial_field(params: PhysParams, grid: Grid, M: Multiplier, cfg: SolverConfig) -> RealField:
    if cfg.init_field is not None:
        if not cfg.init_field.grid.same_layout(grid):
            raise ValueError("init_field grid does not match the solve grid")
        f = cfg.init_field
    else:
        f = gaussian_field(grid, cfg.init_width)
    _, f = nehari_project(f, M, params)
    return f


def petviashvili_step(u: RealField, M: Multiplier, params: PhysParams,
                      gamma: float | None = None) -> RealField:
    """One stabilized fixed-point update."""
    if gamma is None:
        gamma = (params.p - 1.0) / (params.p - 2.0)
    grid = u.grid
    D = M.table + params.mu
    U = to_spectral(u)
    q = grid.spectral_weight * np.sum(D * (U.coeffs.real**2 + U.coeffs.imag**2))
    nl = clamped_power(u.values, params.p)
    pairing = grid.cell_volume * np.sum(nl * u.values)
    if pairing <= 0.0:
        raise RuntimeError("iteration collapsed: nonlinearity lost all positive mass")
    factor = (q / pairing) ** gamma
    NL = to_spectral(RealField(grid, nl))
    return to_physical(SpectralField(grid, factor * NL.coeffs / D))


def _finalize(values: np.ndarray, grid: Grid, M: Multiplier, params: PhysParams,
              cfg: SolverConfig, iterations: int) -> GroundState:
    f = recenter(RealField(grid, values))
    f = subgrid_recenter(f)
    f = recenter(f)
    try:
        _, f = nehari_project(f, M, params)
    except ValueError:
        pass  # zero field: leave as is, reported non-converged below
    report = energy(f, M, params)
    converged = math.isfinite(report.residual) and report.residual <= cfg.tol_residual
    if converged:
        warn_if_poorly_truncated(f)
    return GroundState(field=f, report=report, iterations=iterations,
                       converged=converged, params=params)


def solve_ground_state(params: PhysParams, grid: Grid, M: Multiplier,
                       cfg: SolverConfig | None = None) -> GroundState:
    """Petviashvili iteration to the relative-residual target.

    Deterministic for a fixed configuration.  Raises BlowUpError when the
    iterate's norm passes 1e12; plain non-convergence is returned as
    converged=False with the last iterate.
    """
    cfg = cfg or SolverConfig()
    if not M.grid.same_layout(grid):
        raise ValueError("multiplier grid does not match the solve grid")
    gamma = cfg.resolved_gamma(params.p)
    D = M.table + params.mu
    w_spec = grid.spectral_weight
    vol = grid.cell_volume

    u = _initial_field(params, grid, M, cfg).values
    U = to_spectral(RealField(grid, u)).coeffs
    iterations = 0
    for it in range(cfg.max_iter + 1):
        nl = clamped_power(u, params.p)
        NL = to_spectral(RealField(grid, nl)).coeffs
        diff = D * U - NL
        res_sq = w_spec * np.sum(diff.real**2 + diff.imag**2)
        u_sq = vol * np.sum(u * u)
        if u_sq > BLOWUP_NORM**2:
            raise BlowUpError(f"iterate norm exceeded {BLOWUP_NORM:.0e}")
        if u_sq > 0.0 and math.sqrt(res_sq / u_sq) <= 0.5 * cfg.tol_residual:
            iterations = it
            break
        if it == cfg.max_iter:
            iterations = it
            break
        q = w_spec * np.sum(D * (U.real**2 + U.imag**2))
        pairing = vol * np.sum(nl * u)
        if pairing <= 0.0 or not math.isfinite(pairing):
            iterations = it + 1
            break
        with np.errstate(over="ignore", invalid="ignore"):  # blow-up is caught below
            U = (q / pairing) ** gamma * NL / D
        if not np.all(np.isfinite(U)):
            raise BlowUpError("iterate became non-finite")
        u = to_physical(SpectralField(grid, U)).values
        iterations = it + 1
    return _finalize(u, grid, M, params, cfg, iterations)


def projected_gradient_solve(params: PhysParams, grid: Grid, M: Multiplier,
                             cfg: SolverConfig | None = None) -> GroundState:
    """Fallback: preconditioned descent on the energy, renormalized onto the
    Nehari manifold after every step.

    v <- project(v - tau * (v - (A + mu)^{-1} v_+^{p-1}))
    """
    cfg = cfg or SolverConfig()
    if not M.grid.same_layout(grid):
        raise ValueError("multiplier grid does not match the solve grid")
    tau = cfg.fallback_step
    D = M.table + params.mu
    w_spec = grid.spectral_weight
    vol = grid.cell_volume
    e = 1.0 / (params.p - 2.0)

    v = _initial_field(params, grid, M, cfg).values
    V = to_spectral(RealField(grid, v)).coeffs
    iterations = 0
    for it in range(cfg.max_iter + 1):
        nl = clamped_power(v, params.p)
        NL = to_spectral(RealField(grid, nl)).coeffs
        diff = D * V - NL
        res_sq = w_spec * np.sum(diff.real**2 + diff.imag**2)
        v_sq = vol * np.sum(v * v)
        if v_sq > BLOWUP_NORM**2:
            raise BlowUpError(f"iterate norm exceeded {BLOWUP_NORM:.0e}")
        if v_sq > 0.0 and math.sqrt(res_sq / v_sq) <= 0.5 * cfg.tol_residual:
            iterations = it
            break
        if it == cfg.max_iter:
            iterations = it
            break
        step = to_physical(SpectralField(grid, NL / D)).values
        cand = v - tau * (v - step)
        if not np.all(np.isfinite(cand)):
            iterations = it + 1
            break  # oversized step wrecked the iterate; report non-convergence
        C = to_spectral(RealField(grid, cand)).coeffs
        q = w_spec * np.sum(D * (C.real**2 + C.imag**2))
        lp = vol * np.sum(_pos_pow(np.abs(cand), params.p))
        if lp <= 0.0 or not (math.isfinite(q) and math.isfinite(lp)):
            iterations = it + 1
            break
        t_star = (q / lp) ** e
        v = t_star * cand
        V = t_star * C
        iterations = it + 1
    return _finalize(v, grid, M, params, cfg, iterations)


def warm_config(cfg: SolverConfig, init_field: RealField) -> SolverConfig:
    """Copy of cfg that starts from a given field (used by the c-sweep)."""
    return replace(cfg, init_field=init_field)

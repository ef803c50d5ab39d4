"""Energy, Nehari functional, Nehari projection, equation residual, Rayleigh quotient.

All quantities refer to the standing-wave equation

    A u + mu u = |u|^{p-2} u,

where A is a kinetic multiplier (relativistic or limit).  The energy is
I(u) = Q(u)/2 - ||u||_p^p / p with Q(u) the (A + mu)-weighted quadratic form,
and J(u) = Q(u) - ||u||_p^p is the Nehari functional whose zero set carries
the ground states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import PhysParams, RealField, SpectralField, norm_l2, to_physical, to_spectral
from .symbol import Multiplier


@dataclass(frozen=True)
class EnergyReport:
    """Scalar diagnostics of a candidate state."""

    Q: float
    lp: float
    I: float
    J: float
    residual: float
    identity_gap: float


def _pos_pow(base: np.ndarray, q: float) -> np.ndarray:
    # base >= 0; small integer exponents dominate in practice
    if q == 1.0:
        return base
    if q == 2.0:
        return base * base
    if q == 3.0:
        return base * base * base
    return base**q


def odd_power(values: np.ndarray, p: float) -> np.ndarray:
    """|u|^{p-2} u for real exponents, i.e. sign(u) |u|^{p-1}."""
    return np.sign(values) * _pos_pow(np.abs(values), p - 1.0)


def clamped_power(values: np.ndarray, p: float) -> np.ndarray:
    """max(u, 0)^{p-1}; the solver's positivity-constrained nonlinearity."""
    return _pos_pow(np.maximum(values, 0.0), p - 1.0)


def lp_integral(u: RealField, p: float) -> float:
    return float(u.grid.cell_volume * np.sum(_pos_pow(np.abs(u.values), p)))


def quadratic_form(u: RealField, M: Multiplier, params: PhysParams) -> float:
    """Q(u) = sum over the lattice of (a(xi) + mu) |u_hat|^2, Parseval-weighted."""
    if not M.grid.same_layout(u.grid):
        raise ValueError("grid mismatch")
    F = to_spectral(u)
    power = F.coeffs.real**2 + F.coeffs.imag**2
    return float(u.grid.spectral_weight * np.sum((M.table + params.mu) * power))


def residual(u: RealField, M: Multiplier, params: PhysParams) -> float:
    """Relative L2 residual ||A u + mu u - |u|^{p-2} u|| / ||u||."""
    scale = norm_l2(u)
    if scale == 0.0:
        raise ValueError("residual is undefined for the zero field")
    F = to_spectral(u)
    lhs = to_physical(SpectralField(u.grid, (M.table + params.mu) * F.coeffs))
    r = lhs.values - odd_power(u.values, params.p)
    return float(np.sqrt(u.grid.cell_volume * np.sum(r * r))) / scale


def energy(u: RealField, M: Multiplier, params: PhysParams) -> EnergyReport:
    """Full scalar report; for the zero field the residual entry is set to 0."""
    Q = quadratic_form(u, M, params)
    lp = lp_integral(u, params.p)
    I = 0.5 * Q - lp / params.p
    J = Q - lp
    res = residual(u, M, params) if norm_l2(u) > 0.0 else 0.0
    gap = abs(I - (0.5 - 1.0 / params.p) * lp)
    return EnergyReport(Q=Q, lp=lp, I=I, J=J, residual=res, identity_gap=gap)


def nehari_project(u: RealField, M: Multiplier, params: PhysParams) -> tuple[float, RealField]:
    """Scalar rescaling t* u with J(t* u) = 0; t* = (Q / ||u||_p^p)^{1/(p-2)}."""
    if norm_l2(u) == 0.0:
        raise ValueError("Nehari projection is undefined for the zero field")
    Q = quadratic_form(u, M, params)
    lp = lp_integral(u, params.p)
    t_star = float((Q / lp) ** (1.0 / (params.p - 2.0)))
    return t_star, RealField(u.grid, t_star * u.values)


def rayleigh_quotient(u: RealField, M: Multiplier, params: PhysParams) -> float:
    """Scale-invariant ratio Q^{p/(p-2)} / (||u||_p^p)^{2/(p-2)}.

    Its minimum over nonzero fields is the Nehari level times (1/2 - 1/p)^{-1},
    attained at the ground state.
    """
    if norm_l2(u) == 0.0:
        raise ValueError("Rayleigh quotient is undefined for the zero field")
    Q = quadratic_form(u, M, params)
    lp = lp_integral(u, params.p)
    e = 1.0 / (params.p - 2.0)
    return float(Q ** (params.p * e) / lp ** (2.0 * e))

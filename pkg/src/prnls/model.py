"""Periodic-box discretization, spectral transforms, and the norms used everywhere else.

The continuum problem lives on R^n; here it is truncated to a periodic box
[0, L)^n sampled on N points per axis.  All operators downstream are diagonal
in the discrete Fourier basis, so the box + FFT combination gives spectral
accuracy as long as the fields decay well inside the box (checked, with a
warning otherwise).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi

#: fields whose boundary values exceed this fraction of their maximum trigger
#: a truncation warning
BOUNDARY_DECAY_TOL = 1e-10


class BoundaryDecayWarning(UserWarning):
    """The box is too small for the field to decay below tolerance at the seam."""


@dataclass(frozen=True)
class PhysParams:
    """Model parameters: mass m, frequency shift mu, light speed c, power p, dimension n.

    The admissible range is m, mu > 0, c >= 1, 2 < p < 2n/(n-1) and mu <= m*c^2.
    c = inf is allowed and selects the nonrelativistic regime exactly.
    """

    m: float
    mu: float
    c: float
    p: float
    n: int

    def __post_init__(self):
        if not (self.m > 0.0 and math.isfinite(self.m)):
            raise ValueError("m must be positive and finite")
        if not (self.mu > 0.0 and math.isfinite(self.mu)):
            raise ValueError("mu must be positive and finite")
        if not self.c >= 1.0:
            raise ValueError("c must be >= 1")
        if self.n < 2 or int(self.n) != self.n:
            raise ValueError("n must be an integer >= 2")
        p_max = 2.0 * self.n / (self.n - 1.0)
        if not (2.0 < self.p < p_max):
            raise ValueError(f"p must lie in (2, {p_max}) for n = {self.n}")
        # mu <= m c^2 keeps the shifted kinetic symbol plus mu comparable to the
        # free one; equality (e.g. m = mu = c = 1) is fine since the discrete
        # quadratic form only needs mu > 0.
        if self.mu > self.m * self.c**2:
            raise ValueError("mu must not exceed m*c^2")


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform periodic grid on [0, L)^n with N points (a power of two) per axis."""

    n: int
    L: float
    N: int
    h: float = field(init=False, repr=False)
    freqs: np.ndarray = field(init=False, repr=False)
    xi_sq: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.n not in (2, 3):
            raise ValueError("n must be 2 or 3")
        if not (self.L > 0.0 and math.isfinite(self.L)):
            raise ValueError("L must be positive and finite")
        if self.N < 16 or (self.N & (self.N - 1)) != 0:
            raise ValueError("N must be a power of two >= 16")
        object.__setattr__(self, "h", self.L / self.N)
        freqs = TWO_PI * np.fft.fftfreq(self.N, d=self.h)
        object.__setattr__(self, "freqs", freqs)
        mesh = np.meshgrid(*([freqs] * self.n), indexing="ij")
        object.__setattr__(self, "xi_sq", sum(a * a for a in mesh))

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.N,) * self.n

    @property
    def cell_volume(self) -> float:
        """Quadrature weight h^n for physical-space integrals."""
        return self.h**self.n

    @property
    def spectral_weight(self) -> float:
        """Quadrature weight (2*pi/L)^n for Fourier-space integrals."""
        return (TWO_PI / self.L) ** self.n

    @property
    def fourier_scale(self) -> float:
        """Scale turning the raw DFT into the continuum-normalized transform."""
        return self.h**self.n * (TWO_PI) ** (-self.n / 2.0)

    @property
    def center_index(self) -> int:
        return self.N // 2

    @property
    def center_coordinate(self) -> float:
        return self.h * (self.N // 2)

    def axis_coordinates(self) -> np.ndarray:
        return self.h * np.arange(self.N)

    def radius_sq(self) -> np.ndarray:
        """Squared distance of every lattice point from the box center."""
        d = self.axis_coordinates() - self.center_coordinate
        mesh = np.meshgrid(*([d] * self.n), indexing="ij")
        return sum(a * a for a in mesh)

    def same_layout(self, other: "Grid") -> bool:
        return (self.n, self.L, self.N) == (other.n, other.L, other.N)


def make_grid(n: int, L: float, N: int) -> Grid:
    """Build a periodic grid; rejects n outside {2, 3} and non-power-of-two N."""
    return Grid(n=n, L=float(L), N=int(N))


@dataclass(frozen=True, eq=False)
class RealField:
    """Real samples of a function on a Grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != self.grid.shape:
            raise ValueError(f"values shape {v.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        object.__setattr__(self, "values", v)


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Discrete Fourier coefficients of a field, continuum-normalized."""

    grid: Grid
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.shape != self.grid.shape:
            raise ValueError(f"coeffs shape {c.shape} does not match grid {self.grid.shape}")
        object.__setattr__(self, "coeffs", c)


def to_spectral(f: RealField) -> SpectralField:
    """Forward transform, normalized so that the discrete Parseval identity

        h^n * sum(f^2) == (2*pi/L)^n * sum(|coeffs|^2)

    holds exactly (up to roundoff)."""
    return SpectralField(f.grid, f.grid.fourier_scale * np.fft.fftn(f.values))


def to_physical(F: SpectralField) -> RealField:
    """Inverse transform back to real samples.

    The coefficients must be (numerically) Hermitian-symmetric; a residual
    imaginary part above 1e-8 of the field scale is rejected.
    """
    out = np.fft.ifftn(F.coeffs) / F.grid.fourier_scale
    scale = np.max(np.abs(out.real))
    imag = np.max(np.abs(out.imag))
    if imag > 1e-8 * max(scale, 1e-300):
        raise ValueError("coefficients do not represent a real field")
    return RealField(F.grid, np.ascontiguousarray(out.real))


def norm_l2(f: RealField) -> float:
    return float(np.sqrt(f.grid.cell_volume * np.sum(f.values * f.values)))


def norm_lp(f: RealField, p: float) -> float:
    return float((f.grid.cell_volume * np.sum(np.abs(f.values) ** p)) ** (1.0 / p))


def inner_l2(f: RealField, g: RealField) -> float:
    if not f.grid.same_layout(g.grid):
        raise ValueError("grid mismatch")
    return float(f.grid.cell_volume * np.sum(f.values * g.values))


def norm_h1(f: RealField) -> float:
    """Sobolev norm with weight (1 + |xi|^2) on the spectral side."""
    F = to_spectral(f)
    s = np.sum((1.0 + f.grid.xi_sq) * (F.coeffs.real**2 + F.coeffs.imag**2))
    return float(np.sqrt(f.grid.spectral_weight * s))


def norm_hhalf(f: RealField) -> float:
    """Sobolev norm with weight sqrt(1 + |xi|^2) on the spectral side."""
    F = to_spectral(f)
    s = np.sum(np.sqrt(1.0 + f.grid.xi_sq) * (F.coeffs.real**2 + F.coeffs.imag**2))
    return float(np.sqrt(f.grid.spectral_weight * s))


def grad_norm_sq(f: RealField) -> float:
    """|| grad f ||_{L2}^2 evaluated spectrally (weight |xi|^2)."""
    F = to_spectral(f)
    s = np.sum(f.grid.xi_sq * (F.coeffs.real**2 + F.coeffs.imag**2))
    return float(f.grid.spectral_weight * s)


def _derivative_freqs(grid: Grid) -> np.ndarray:
    # the Nyquist row has no well-defined odd derivative on a real grid; the
    # standard convention zeroes it
    kd = grid.freqs.copy()
    kd[grid.N // 2] = 0.0
    return kd


def spectral_gradient(f: RealField) -> list[RealField]:
    """Gradient components via the Fourier multiplier i*xi (Nyquist row zeroed)."""
    F = to_spectral(f)
    kd = _derivative_freqs(f.grid)
    out = []
    for axis in range(f.grid.n):
        shape = [1] * f.grid.n
        shape[axis] = f.grid.N
        mult = 1j * kd.reshape(shape)
        out.append(to_physical(SpectralField(f.grid, mult * F.coeffs)))
    return out


def gaussian_field(grid: Grid, width: float = 1.0, amplitude: float = 1.0) -> RealField:
    """Centered Gaussian amplitude * exp(-r^2 / (2 width^2))."""
    if width <= 0:
        raise ValueError("width must be positive")
    return RealField(grid, amplitude * np.exp(-grid.radius_sq() / (2.0 * width * width)))


def boundary_max_ratio(f: RealField) -> float:
    """max |f| over the periodic seam (index-0 faces) relative to max |f|."""
    v = np.abs(f.values)
    peak = float(np.max(v))
    if peak == 0.0:
        return 0.0
    edge = max(float(np.max(np.take(v, 0, axis=ax))) for ax in range(f.grid.n))
    return edge / peak


def warn_if_poorly_truncated(f: RealField) -> float:
    ratio = boundary_max_ratio(f)
    if ratio > BOUNDARY_DECAY_TOL:
        warnings.warn(
            f"field boundary values are {ratio:.2e} of the maximum; "
            "increase L for the stated accuracy",
            BoundaryDecayWarning,
            stacklevel=2,
        )
    return ratio


def interpolate_to(f: RealField, N_new: int) -> RealField:
    """Spectral (zero-padding) interpolation onto a finer grid with N_new points per axis.

    The coarse Nyquist row is dropped. Coefficient values are N-independent in
    this normalization, so padding is an exact embedding for band-limited fields.
    """
    g = f.grid
    if N_new < g.N:
        raise ValueError("N_new must not be smaller than the source N")
    if N_new == g.N:
        return RealField(g, f.values.copy())
    fine = make_grid(g.n, g.L, N_new)
    coarse = np.fft.fftshift(to_spectral(f).coeffs)
    padded = np.zeros(fine.shape, dtype=np.complex128)
    off = (N_new - g.N) // 2
    src = (slice(1, g.N),) * g.n      # drop the coarse Nyquist plane (index 0 after shift)
    dst = (slice(off + 1, off + g.N),) * g.n
    padded[dst] = coarse[src]
    return to_physical(SpectralField(fine, np.fft.ifftshift(padded)))

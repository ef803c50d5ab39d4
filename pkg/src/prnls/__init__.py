"""Pseudo-spectral ground states of the pseudo-relativistic nonlinear
Schrodinger equation, their nonrelativistic limit, and the verification
harness around both."""

from .model import (
    Grid,
    PhysParams,
    RealField,
    SpectralField,
    gaussian_field,
    grad_norm_sq,
    inner_l2,
    interpolate_to,
    make_grid,
    norm_h1,
    norm_hhalf,
    norm_l2,
    norm_lp,
    to_physical,
    to_spectral,
)
from .radial_oracle import (
    RadialProfile,
    compare_profiles,
    find_ground_u0,
    ground_profile,
    profile_to_field,
    shoot,
)
from .extension import (
    ModeExtension,
    mode_energy,
    mode_extension,
    neumann_consistency,
    perturbed_mode_energy,
)
from .snapshot import load_field, save_field
from .solver import (
    BlowUpError,
    GroundState,
    SolverConfig,
    h1_distance,
    petviashvili_step,
    projected_gradient_solve,
    radial_scatter,
    recenter,
    solve_ground_state,
    subgrid_recenter,
)
from .sweep import (
    RunConfig,
    SweepRecord,
    SweepResult,
    check_uniform_bounds,
    emit,
    run_sweep,
)
from .symbol import (
    Multiplier,
    apply_multiplier,
    eval_limit_symbol,
    eval_relativistic_symbol,
    limit_multiplier,
    multiplier_convergence_test,
    relativistic_multiplier,
    sandwich_holds,
    symbol_gap,
    symbol_gap_bound,
)
from .variational import (
    EnergyReport,
    energy,
    nehari_project,
    quadratic_form,
    rayleigh_quotient,
    residual,
)

__version__ = "0.1.0"

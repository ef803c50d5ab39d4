import math
import time

import pytest

import prnls as P
from prnls.sweep import RunConfig, run_sweep

DEFAULTS = dict(m=1.0, mu=1.0, p=3.0, n=2)


@pytest.fixture(scope="session")
def grid():
    return P.make_grid(2, 32.0, 256)


@pytest.fixture(scope="session")
def make_params():
    def _make(c=1.0, **over):
        kw = dict(DEFAULTS)
        kw.update(over)
        return P.PhysParams(c=c, **kw)
    return _make


@pytest.fixture(scope="session")
def params_inf(make_params):
    return make_params(c=math.inf)


@pytest.fixture(scope="session")
def limit_mult(grid, params_inf):
    return P.limit_multiplier(grid, params_inf)


@pytest.fixture(scope="session")
def sweep_outcome():
    """Full default sweep, computed once; (result, wall time in seconds)."""
    t0 = time.perf_counter()
    result = run_sweep(RunConfig())
    return result, time.perf_counter() - t0


@pytest.fixture(scope="session")
def sweep_result(sweep_outcome):
    return sweep_outcome[0]


@pytest.fixture(scope="session")
def limit_state(sweep_result):
    return sweep_result.limit_state


@pytest.fixture(scope="session")
def state_c1(sweep_result):
    return sweep_result.states[0]


@pytest.fixture(scope="session")
def oracle_profile(params_inf):
    return P.ground_profile(params_inf)


@pytest.fixture(scope="session")
def asym_state(grid, params_inf, limit_mult):
    """Converged limit state started from a 5%-asymmetric initial guess."""
    import numpy as np

    base = P.gaussian_field(grid, 2.0)
    x = grid.axis_coordinates() - grid.center_coordinate
    skew = (1.0 + 0.05 * np.sin(2 * np.pi * (x[:, None] + 0.37) / grid.L)
            + 0.05 * x[:, None] * x[None, :] / grid.L**2)
    init = P.RealField(grid, base.values * skew)
    return P.solve_ground_state(params_inf, grid, limit_mult,
                                P.SolverConfig(init_field=init))

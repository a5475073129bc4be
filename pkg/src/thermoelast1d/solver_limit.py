"""Direct integrator for the limit system (eps = 0)

    u_tt    = u_xx - (f(Theta))_x
    Theta_t = Theta_xx - f(Theta) u_xt

written as a first-order system in (v, u, Theta) with v = u_t.  The wave
part is advanced by a kick-drift-kick leapfrog (explicit, CFL-restricted),
the heat part by an unconditionally stable implicit step with the
constitutive factor lagged.  Supports rough initial data: H1 displacement
with strain jumps, bounded discontinuous velocity, L2 temperature.
"""

from __future__ import annotations

from typing import Optional

from .errors import ContractError, PositivityError
from .grid import Grid
from .initial_data import ROUGH_KINDS, prepare_rough_data  # re-exported surface
from .materials import Material
from .state import SolverConfig, State, Trajectory, make_state
from .stepping import Forcing, LimitStepper, run_simulation

__all__ = [
    "step_limit",
    "run_limit",
    "prepare_rough_data",
    "ROUGH_KINDS",
]


def step_limit(state: State, material: Material, cfg: SolverConfig, grid: Grid) -> State:
    """One leapfrog/implicit-heat step; requires cfg.epsilon = 0."""
    cfg.check_cfl(grid)
    stepper = LimitStepper(grid, material, cfg)
    v, u, th = stepper.advance(
        state.v.values.copy(), state.u.values.copy(), state.theta.values.copy(), state.t
    )
    t_new = state.t + cfg.dt
    if float(th.min()) < -cfg.positivity_tol:
        raise PositivityError(
            f"theta reached {th.min():.3e} < -positivity_tol at t = {t_new:.6g}",
            t=t_new,
        )
    return make_state(t_new, v, u, th)


def run_limit(
    init: State,
    material: Material,
    cfg: SolverConfig,
    grid: Grid,
    recorder=None,
    record_every: int = 1,
    forcing: Optional[Forcing] = None,
) -> Trajectory:
    """Integrate the limit system from t = 0 to cfg.t_end.

    ``forcing`` is a pair of callables (S_v(x, t), S_theta(x, t)) used by
    the manufactured-solution study; production runs leave it None.
    """
    if cfg.epsilon != 0.0:
        raise ContractError(f"run_limit requires epsilon = 0, got {cfg.epsilon}")
    stepper = LimitStepper(grid, material, cfg, forcing=forcing)
    return run_simulation(
        stepper, init, material, cfg, grid, record_every=record_every, recorder=recorder
    )

"""Shared time-stepping machinery.

The stiff linear parts (the fourth-order velocity regularization and every
second-order diffusion) are treated implicitly through sparse LU
factorizations cached per (grid, dt, epsilon); the wave/constitutive
coupling is explicit under the CFL-type restriction dt <= cfl_safety * h.

Raw-array stencils below mirror the public operators in :mod:`.grid`; they
skip Field construction in the hot loop but use identical closures, so the
summation-by-parts cancellations the diagnostics rely on hold exactly.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .diagnostics import compute_record
from .errors import ContractError, PositivityError, SchemeError
from .grid import Grid
from .materials import Material, eval_f
from .state import SolverConfig, State, Trajectory, make_state

Forcing = Tuple[Callable[[np.ndarray, float], np.ndarray],
                Callable[[np.ndarray, float], np.ndarray]]


# ---------------------------------------------------------------------------
# raw-array stencils (interior central; bc-specific boundary closures)
# ---------------------------------------------------------------------------


def dx_neumann(f: np.ndarray, h: float) -> np.ndarray:
    out = np.empty_like(f)
    out[1:-1] = (f[2:] - f[:-2]) / (2.0 * h)
    out[0] = 0.0
    out[-1] = 0.0
    return out


def dx_hinged(f: np.ndarray, h: float) -> np.ndarray:
    out = np.empty_like(f)
    out[1:-1] = (f[2:] - f[:-2]) / (2.0 * h)
    out[0] = f[1] / h
    out[-1] = -f[-2] / h
    return out


def dxx_dirichlet(f: np.ndarray, h: float) -> np.ndarray:
    h2 = h * h
    out = np.empty_like(f)
    out[1:-1] = (f[:-2] - 2.0 * f[1:-1] + f[2:]) / h2
    out[0] = -2.0 * f[0] / h2
    out[-1] = -2.0 * f[-1] / h2
    return out


# ---------------------------------------------------------------------------
# implicit system matrices (boundary rows encode the boundary conditions)
# ---------------------------------------------------------------------------


def heat_system_dirichlet(grid: Grid, c: float) -> sp.csc_matrix:
    """I - c*D2 with identity boundary rows (value pinned)."""
    n = grid.n_nodes
    r = c / grid.h ** 2
    main = np.full(n, 1.0 + 2.0 * r)
    main[0] = main[-1] = 1.0
    lower = np.full(n - 1, -r)
    upper = np.full(n - 1, -r)
    upper[0] = 0.0
    lower[-1] = 0.0
    return sp.diags([lower, main, upper], [-1, 0, 1], format="csc")


def heat_system_neumann(grid: Grid, c: float) -> sp.csc_matrix:
    """I - c*D2 with reflected-ghost rows (zero boundary flux)."""
    n = grid.n_nodes
    r = c / grid.h ** 2
    main = np.full(n, 1.0 + 2.0 * r)
    lower = np.full(n - 1, -r)
    upper = np.full(n - 1, -r)
    upper[0] = -2.0 * r
    lower[-1] = -2.0 * r
    return sp.diags([lower, main, upper], [-1, 0, 1], format="csc")


def biharmonic_system_hinged(grid: Grid, c: float) -> sp.csc_matrix:
    """I + c*D4 with identity rows at the ends and antisymmetric-ghost
    closures next to them (value and curvature pinned to zero)."""
    n = grid.n_nodes
    if n < 5:
        raise ContractError("fourth-order operator needs n_cells >= 4")
    q = c / grid.h ** 4
    m = sp.lil_matrix((n, n))
    for i in range(2, n - 2):
        m[i, i - 2] = q
        m[i, i - 1] = -4.0 * q
        m[i, i] = 1.0 + 6.0 * q
        m[i, i + 1] = -4.0 * q
        m[i, i + 2] = q
    # hinged closure: ghost v[-1] = -v[1] folds onto the diagonal
    m[1, 0] = -4.0 * q
    m[1, 1] = 1.0 + 5.0 * q
    m[1, 2] = -4.0 * q
    m[1, 3] = q
    m[n - 2, n - 1] = -4.0 * q
    m[n - 2, n - 2] = 1.0 + 5.0 * q
    m[n - 2, n - 3] = -4.0 * q
    m[n - 2, n - 4] = q
    m[0, 0] = 1.0
    m[n - 1, n - 1] = 1.0
    return m.tocsc()


@lru_cache(maxsize=64)
def _cached_factors(grid: Grid, dt: float, epsilon: float, scheme: str):
    """LU factorizations reused across every step of a run."""
    try:
        if scheme == "imex1":
            lu_th = splu(heat_system_neumann(grid, dt))
            lu_v = lu_u = None
            if epsilon > 0.0:
                lu_v = splu(biharmonic_system_hinged(grid, epsilon * dt))
                lu_u = splu(heat_system_dirichlet(grid, epsilon * dt))
            return {"lu_v": lu_v, "lu_u": lu_u, "lu_th": lu_th}
        if scheme == "imex2":
            c = 0.25 * dt
            out = {
                "lu_th": splu(heat_system_neumann(grid, c)),
                "mul_th": heat_system_neumann(grid, -c).tocsr(),
                "lu_v": None,
                "mul_v": None,
                "lu_u": None,
                "mul_u": None,
            }
            if epsilon > 0.0:
                out["lu_v"] = splu(biharmonic_system_hinged(grid, epsilon * c))
                out["mul_v"] = biharmonic_system_hinged(grid, -epsilon * c).tocsr()
                out["lu_u"] = splu(heat_system_dirichlet(grid, epsilon * c))
                out["mul_u"] = heat_system_dirichlet(grid, -epsilon * c).tocsr()
            return out
        if scheme == "limit":
            return {"lu_th": splu(heat_system_neumann(grid, dt))}
    except RuntimeError as exc:  # SuperLU failures (singular factor)
        raise SchemeError(f"linear solve factorization failed: {exc}") from exc
    raise ContractError(f"unknown scheme {scheme!r}")


def _pin(arr: np.ndarray) -> np.ndarray:
    arr[0] = 0.0
    arr[-1] = 0.0
    return arr


def _f_of(material: Material, th: np.ndarray) -> np.ndarray:
    # undershoots within the positivity tolerance are evaluated as f(0) = 0
    return eval_f(material, np.maximum(th, 0.0))


class ImexStepper:
    """First-order splitting: explicit coupling at the old level, then
    backward-Euler solves for the stiff linear parts."""

    temporal_order = 1
    label = "imex1"

    def __init__(self, grid: Grid, material: Material, cfg: SolverConfig):
        self.grid = grid
        self.material = material
        self.cfg = cfg
        self.f = _cached_factors(grid, cfg.dt, cfg.epsilon, "imex1")

    def advance(self, v, u, th, t):
        dt = self.cfg.dt
        h = self.grid.h
        fth = _f_of(self.material, th)
        rhs_v = _pin(v + dt * (dxx_dirichlet(u, h) - dx_neumann(fth, h)))
        rhs_u = _pin(u + dt * v)
        rhs_th = th - dt * fth * dx_hinged(v, h)
        v1 = self.f["lu_v"].solve(rhs_v) if self.f["lu_v"] is not None else rhs_v
        u1 = self.f["lu_u"].solve(rhs_u) if self.f["lu_u"] is not None else rhs_u
        th1 = self.f["lu_th"].solve(rhs_th)
        return _pin(v1), _pin(u1), th1


class Imex2Stepper:
    """Strang arrangement: half Crank-Nicolson diffusion, full explicit
    coupling step with the constitutive terms at the half level, half
    Crank-Nicolson diffusion."""

    temporal_order = 2
    label = "imex2"

    def __init__(self, grid: Grid, material: Material, cfg: SolverConfig):
        self.grid = grid
        self.material = material
        self.cfg = cfg
        self.f = _cached_factors(grid, cfg.dt, cfg.epsilon, "imex2")

    def _diffuse_half(self, v, u, th):
        f = self.f
        th = f["lu_th"].solve(f["mul_th"] @ th)
        if f["lu_v"] is not None:
            v = _pin(f["lu_v"].solve(f["mul_v"] @ v))
            u = _pin(f["lu_u"].solve(f["mul_u"] @ u))
        return v, u, th

    def _couple(self, v, u, th):
        dt = self.cfg.dt
        h = self.grid.h
        m = self.material
        fth = _f_of(m, th)
        v_half = _pin(v + 0.5 * dt * (dxx_dirichlet(u, h) - dx_neumann(fth, h)))
        u1 = _pin(u + dt * v_half)
        g = dx_hinged(v_half, h)
        th_mid = th - 0.5 * dt * fth * g
        th1 = th - dt * _f_of(m, th_mid) * g
        v1 = _pin(
            v_half + 0.5 * dt * (dxx_dirichlet(u1, h) - dx_neumann(_f_of(m, th1), h))
        )
        return v1, u1, th1

    def advance(self, v, u, th, t):
        v, u, th = self._diffuse_half(v, u, th)
        v, u, th = self._couple(v, u, th)
        return self._diffuse_half(v, u, th)


class LimitStepper:
    """Leapfrog (kick-drift-kick) wave part, backward-Euler heat part with
    the constitutive factor lagged; optional manufactured-solution forcing
    (S_v added to the velocity equation, S_theta to the heat equation)."""

    temporal_order = 1
    label = "limit"

    def __init__(self, grid: Grid, material: Material, cfg: SolverConfig,
                 forcing: Optional[Forcing] = None):
        if cfg.epsilon != 0.0:
            raise ContractError(
                f"limit integrator requires epsilon = 0, got {cfg.epsilon}"
            )
        self.grid = grid
        self.material = material
        self.cfg = cfg
        self.forcing = forcing
        self.f = _cached_factors(grid, cfg.dt, 0.0, "limit")
        self.nodes = grid.nodes

    def _force(self, which, t):
        if self.forcing is None:
            return 0.0
        return self.forcing[which](self.nodes, t)

    def advance(self, v, u, th, t):
        dt = self.cfg.dt
        h = self.grid.h
        m = self.material
        fth = _f_of(m, th)
        v_half = _pin(
            v + 0.5 * dt * (dxx_dirichlet(u, h) - dx_neumann(fth, h) + self._force(0, t))
        )
        u1 = _pin(u + dt * v_half)
        rhs_th = th + dt * (-fth * dx_hinged(v_half, h) + self._force(1, t + dt))
        th1 = self.f["lu_th"].solve(rhs_th)
        v1 = _pin(
            v_half
            + 0.5
            * dt
            * (
                dxx_dirichlet(u1, h)
                - dx_neumann(_f_of(m, th1), h)
                + self._force(0, t + dt)
            )
        )
        return v1, u1, th1


def make_eps_stepper(grid: Grid, material: Material, cfg: SolverConfig):
    if cfg.scheme == "imex2":
        return Imex2Stepper(grid, material, cfg)
    return ImexStepper(grid, material, cfg)


def run_simulation(
    stepper,
    init: State,
    material: Material,
    cfg: SolverConfig,
    grid: Grid,
    record_every: int = 1,
    recorder=None,
) -> Trajectory:
    """March ``init`` to t_end, streaming per-step diagnostics.

    Deterministic: identical inputs produce bit-identical trajectories.
    Step failures propagate with the failing time attached.
    """
    if init.t != 0.0:
        raise ContractError(f"runs start at t = 0, got init.t = {init.t}")
    if init.n_nodes != grid.n_nodes:
        raise ContractError("initial state does not live on the run grid")
    if record_every < 1:
        raise ContractError(f"record_every must be >= 1, got {record_every}")
    cfg.check_cfl(grid)
    n_steps = cfg.n_steps()

    traj = Trajectory(grid, cfg.epsilon, getattr(stepper, "label", cfg.scheme))
    rec = compute_record(init, material, grid, cfg.epsilon, None)
    traj.records.append(rec)
    traj.states.append(init)
    if recorder is not None:
        recorder(init, rec)

    v = init.v.values.copy()
    u = init.u.values.copy()
    th = init.theta.values.copy()
    for k in range(1, n_steps + 1):
        t_new = k * cfg.dt
        v, u, th = stepper.advance(v, u, th, (k - 1) * cfg.dt)
        if not np.all(np.isfinite(th)) or not np.all(np.isfinite(v)):
            raise SchemeError(f"non-finite state at t = {t_new:.6g}")
        th_min = float(th.min())
        if th_min < -cfg.positivity_tol:
            raise PositivityError(
                f"theta reached {th_min:.3e} < -positivity_tol at t = {t_new:.6g}",
                t=t_new,
            )
        state = make_state(t_new, v, u, th)
        rec = compute_record(state, material, grid, cfg.epsilon, rec)
        traj.records.append(rec)
        if k % record_every == 0 or k == n_steps:
            traj.states.append(state)
        if recorder is not None:
            recorder(state, rec)
    return traj

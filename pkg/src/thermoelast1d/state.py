"""Simulation state, solver configuration, and trajectory containers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .errors import ContractError, StructuralError
from .grid import BC_DIRICHLET, BC_HINGED, BC_NEUMANN, Field, Grid

SCHEME_IMEX1 = "imex1"
SCHEME_IMEX2 = "imex2"
SCHEMES = (SCHEME_IMEX1, SCHEME_IMEX2)

#: nominal temporal convergence order of each integrator
TEMPORAL_ORDER = {SCHEME_IMEX1: 1, SCHEME_IMEX2: 2, "limit": 1}


@dataclass(frozen=True)
class State:
    """Time-stamped nodal triple (v ~ u_t, u, Theta)."""

    t: float
    v: Field
    u: Field
    theta: Field

    def __post_init__(self):
        if self.v.bc_kind != BC_HINGED:
            raise ContractError(f"v must be hinged, got {self.v.bc_kind}")
        if self.u.bc_kind != BC_DIRICHLET:
            raise ContractError(f"u must be dirichlet_zero, got {self.u.bc_kind}")
        if self.theta.bc_kind != BC_NEUMANN:
            raise ContractError(f"theta must be neumann_zero, got {self.theta.bc_kind}")
        n = len(self.v)
        if len(self.u) != n or len(self.theta) != n:
            raise StructuralError("state fields live on different grids")

    @property
    def n_nodes(self) -> int:
        return len(self.v)


def make_state(t, v, u, theta) -> State:
    """State from raw arrays, pinning the zero-value boundary entries."""
    return State(
        t=float(t),
        v=Field.clamped(v, BC_HINGED),
        u=Field.clamped(u, BC_DIRICHLET),
        theta=Field(np.asarray(theta, dtype=float), BC_NEUMANN),
    )


@dataclass(frozen=True)
class SolverConfig:
    """Time-integration parameters.

    ``newton_tol`` / ``newton_max_iters`` are validated and reserved for
    fully implicit coupling variants; the two shipped schemes are IMEX and
    never iterate.
    """

    dt: float
    t_end: float
    epsilon: float = 0.0
    scheme: str = SCHEME_IMEX1
    cfl_safety: float = 0.5
    positivity_tol: float = 1e-12
    newton_tol: float = 1e-10
    newton_max_iters: int = 25

    def __post_init__(self):
        problems = []
        if not self.dt > 0.0:
            problems.append(f"dt must be > 0, got {self.dt}")
        if not self.t_end > 0.0:
            problems.append(f"t_end must be > 0, got {self.t_end}")
        if self.dt > 0.0 and self.t_end > 0.0 and self.dt > self.t_end * (1 + 1e-12):
            problems.append(f"dt={self.dt} exceeds t_end={self.t_end}")
        if self.epsilon < 0.0:
            problems.append(f"epsilon must be >= 0, got {self.epsilon}")
        if self.scheme not in SCHEMES:
            problems.append(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if not self.cfl_safety > 0.0:
            problems.append(f"cfl_safety must be > 0, got {self.cfl_safety}")
        if not self.positivity_tol >= 0.0:
            problems.append(f"positivity_tol must be >= 0, got {self.positivity_tol}")
        if not self.newton_tol > 0.0:
            problems.append(f"newton_tol must be > 0, got {self.newton_tol}")
        if self.newton_max_iters < 1:
            problems.append(f"newton_max_iters must be >= 1, got {self.newton_max_iters}")
        if problems:
            raise ContractError("; ".join(problems))

    def n_steps(self) -> int:
        """Number of steps; t_end must be an integer multiple of dt."""
        n = int(round(self.t_end / self.dt))
        if n < 1 or abs(n * self.dt - self.t_end) > 1e-9 * max(self.t_end, 1.0):
            raise ContractError(
                f"t_end={self.t_end} is not an integer multiple of dt={self.dt}"
            )
        return n

    def check_cfl(self, grid: Grid) -> None:
        limit = self.cfl_safety * grid.h
        if self.dt > limit * (1 + 1e-12):
            from .errors import ConfigError

            raise ConfigError(
                [
                    f"dt={self.dt:g} violates the wave CFL restriction "
                    f"dt <= cfl_safety*h = {limit:g}"
                ]
            )


@dataclass(frozen=True)
class DiagnosticsRecord:
    """Per-step scalars tracked along every run.

    ``energy``  E = 1/2 |v|^2 + 1/2 |u_x|^2 + int Theta
    ``hfunc``   y = 1 + 1/2 |v_x|^2 + 1/2 |u_xx|^2 + 1/2 int rho(Theta) Theta_x^2,
                None (with ``hfunc_valid=False``) whenever min Theta dips
                below the material's rho floor
    ``dissipation_accum``      int_0^t |Theta_x|^2
    ``eps_dissipation_accum``  eps int_0^t (|v_xx|^2 + |u_xx|^2)
    both accumulated by the trapezoid rule over the recorded steps.
    """

    t: float
    energy: float
    theta_mass: float
    theta_min: float
    theta_max: float
    hfunc: Optional[float]
    hfunc_valid: bool
    thetax_l2sq: float
    thetaxx_l2sq: float
    vx_l2sq: float
    vxx_l2sq: float
    uxx_l2sq: float
    dissipation_accum: float
    eps_dissipation_accum: float


class Trajectory:
    """Recorded run: per-step diagnostics plus state snapshots.

    ``records`` has one entry per time step (including t=0); ``states``
    holds snapshots at every ``record_every``-th step plus the final one.
    Stored states are immutable and safe to share across threads.
    """

    def __init__(self, grid: Grid, epsilon: float, scheme: str):
        self.grid = grid
        self.epsilon = float(epsilon)
        self.scheme = scheme
        self.states: List[State] = []
        self.records: List[DiagnosticsRecord] = []

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.states])

    @property
    def record_times(self) -> np.ndarray:
        return np.array([r.t for r in self.records])

    @property
    def final_state(self) -> State:
        return self.states[-1]

    def record_series(self, name: str) -> np.ndarray:
        vals = [getattr(r, name) for r in self.records]
        return np.array([np.nan if v is None else v for v in vals], dtype=float)

    def __len__(self):
        return len(self.states)

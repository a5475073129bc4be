"""Trajectory diagnostics: the identities and functionals every run is
checked against.

Conventions

* All spatial integrals use the trapezoid rule on the run's grid.
* All time integrals over trajectories use the trapezoid rule on the
  recorded time grid.
* Quantities whose displays are squared norms are reported squared; the
  CSV/report headers say so.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np

from .errors import ContractError, StructuralError
from .grid import Grid, dx, dxx, integrate, l2_norm_sq
from .materials import Material, eval_f, eval_fp, rho
from .state import DiagnosticsRecord, State, Trajectory


def energy(state: State, grid: Grid) -> float:
    """E = 1/2 |v|_2^2 + 1/2 |u_x|_2^2 + int Theta."""
    ke = 0.5 * l2_norm_sq(state.v.values, grid)
    pe = 0.5 * l2_norm_sq(dx(state.u, grid).values, grid)
    return ke + pe + integrate(state.theta.values, grid)


def hfunc(state: State, material: Material, grid: Grid) -> Optional[float]:
    """y = 1 + 1/2 |v_x|^2 + 1/2 |u_xx|^2 + 1/2 int rho(Theta) Theta_x^2.

    Returns None when min Theta is below the rho floor: the weight f'/f is
    then uncontrolled and the value must be flagged, not fabricated.
    """
    th = state.theta.values
    if float(th.min()) < material.rho_floor:
        return None
    vx2 = l2_norm_sq(dx(state.v, grid).values, grid)
    uxx2 = l2_norm_sq(dxx(state.u, grid).values, grid)
    thx = dx(state.theta, grid).values
    weighted = integrate(rho(material, th) * thx ** 2, grid)
    return 1.0 + 0.5 * vx2 + 0.5 * uxx2 + 0.5 * weighted


def compute_record(
    state: State,
    material: Material,
    grid: Grid,
    epsilon: float,
    prev: Optional[DiagnosticsRecord] = None,
) -> DiagnosticsRecord:
    """One diagnostics row; accumulators continue from ``prev`` by trapezoid."""
    th = state.theta.values
    thx_sq = l2_norm_sq(dx(state.theta, grid).values, grid)
    thxx_sq = l2_norm_sq(dxx(state.theta, grid).values, grid)
    vx_sq = l2_norm_sq(dx(state.v, grid).values, grid)
    vxx_sq = l2_norm_sq(dxx(state.v, grid).values, grid)
    uxx_sq = l2_norm_sq(dxx(state.u, grid).values, grid)
    y = hfunc(state, material, grid)

    if prev is None:
        diss = 0.0
        eps_diss = 0.0
    else:
        half_dt = 0.5 * (state.t - prev.t)
        diss = prev.dissipation_accum + half_dt * (prev.thetax_l2sq + thx_sq)
        eps_diss = prev.eps_dissipation_accum + epsilon * half_dt * (
            (prev.vxx_l2sq + prev.uxx_l2sq) + (vxx_sq + uxx_sq)
        )

    return DiagnosticsRecord(
        t=state.t,
        energy=energy(state, grid),
        theta_mass=integrate(th, grid),
        theta_min=float(th.min()),
        theta_max=float(th.max()),
        hfunc=y,
        hfunc_valid=y is not None,
        thetax_l2sq=thx_sq,
        thetaxx_l2sq=thxx_sq,
        vx_l2sq=vx_sq,
        vxx_l2sq=vxx_sq,
        uxx_l2sq=uxx_sq,
        dissipation_accum=diss,
        eps_dissipation_accum=eps_diss,
    )


def energy_identity_residual(traj: Trajectory) -> np.ndarray:
    """r(t) = E(t) - E(0) + eps int_0^t (|v_xx|^2 + |u_xx|^2).

    For eps = 0 this is the plain energy drift E(t) - E(0).
    """
    e = traj.record_series("energy")
    return e - e[0] + traj.record_series("eps_dissipation_accum")


def mass_identity_residual(traj: Trajectory, material: Material) -> np.ndarray:
    """r(t) = int Theta(t) - int Theta_0 - int_0^t int f'(Theta) Theta_x v.

    Evaluated on the snapshot timeline (the space-time source term needs
    the full fields).
    """
    grid = traj.grid
    times = traj.times
    mass = np.empty(times.shape)
    source = np.empty(times.shape)
    for j, s in enumerate(traj.states):
        mass[j] = integrate(s.theta.values, grid)
        integrand = (
            eval_fp(material, np.maximum(s.theta.values, 0.0))
            * dx(s.theta, grid).values
            * s.v.values
        )
        source[j] = integrate(integrand, grid)
    acc = _cumtrapz(source, times)
    return mass - mass[0] - acc


def _cumtrapz(y: np.ndarray, t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(y)
    if len(y) > 1:
        out[1:] = np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(t))
    return out


# ---------------------------------------------------------------------------
# Weak-form residuals
# ---------------------------------------------------------------------------


def _bump(xi: np.ndarray) -> np.ndarray:
    """C^infinity bump on (-1, 1), equal to 1 at 0, identically 0 outside."""
    xi = np.asarray(xi, dtype=float)
    out = np.zeros_like(xi)
    inside = np.abs(xi) < 1.0
    z = xi[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - z * z))
    return out


def _bump_prime(xi: np.ndarray) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    out = np.zeros_like(xi)
    inside = np.abs(xi) < 1.0
    z = xi[inside]
    w = 1.0 - z * z
    out[inside] = np.exp(1.0 - 1.0 / w) * (-2.0 * z / (w * w))
    return out


@dataclass(frozen=True)
class SpaceTimeTestFunction:
    """Separable test function phi(x, t) = X(x) T(t).

    ``target`` is ``"wu"`` (displacement identity: X compactly supported in
    the open interval, T and T' vanish at the horizon) or ``"wt"``
    (temperature identity: X free at the boundary, T vanishes at the
    horizon).
    """

    target: str
    X: Callable[[np.ndarray], np.ndarray]
    Xp: Callable[[np.ndarray], np.ndarray]
    T: Callable[[float], float]
    Tp: Callable[[float], float]
    Tpp: Callable[[float], float]
    t_end: float
    label: str = ""


def _poly_test_function(target: str, t_end: float, p_coef, q_coef, a: float, b: float,
                        label: str = "") -> SpaceTimeTestFunction:
    p = np.polynomial.Polynomial(p_coef)
    pp = p.deriv()
    q = np.polynomial.Polynomial(q_coef)
    qp = q.deriv()
    qpp = qp.deriv()
    scale = 2.0 / (b - a)

    def to_xi(x):
        return (np.asarray(x, dtype=float) - a) * scale - 1.0

    if target == "wu":
        def X(x):
            xi = to_xi(x)
            return p(xi) * _bump(xi)

        def Xp(x):
            xi = to_xi(x)
            return (pp(xi) * _bump(xi) + p(xi) * _bump_prime(xi)) * scale
    else:
        def X(x):
            return p(to_xi(x))

        def Xp(x):
            return pp(to_xi(x)) * scale

    # time part q(tau) (1 - tau)^2 with tau = t / t_end:
    # vanishes at the horizon together with its first derivative, so the
    # double time integration by parts in the displacement identity closes
    def T(t):
        tau = t / t_end
        return q(tau) * (1.0 - tau) ** 2

    def Tp(t):
        tau = t / t_end
        return (qp(tau) * (1.0 - tau) ** 2 - 2.0 * q(tau) * (1.0 - tau)) / t_end

    def Tpp(t):
        tau = t / t_end
        return (
            qpp(tau) * (1.0 - tau) ** 2 - 4.0 * qp(tau) * (1.0 - tau) + 2.0 * q(tau)
        ) / t_end ** 2

    return SpaceTimeTestFunction(
        target=target, X=X, Xp=Xp, T=T, Tp=Tp, Tpp=Tpp, t_end=t_end, label=label
    )


def default_test_bank(grid: Grid, t_end: float, n: int = 10, seed: int = 1234,
                      max_time_degree: int = 2) -> List[SpaceTimeTestFunction]:
    """Reproducible bank of smooth separable test functions.

    Alternates displacement-type and temperature-type members; fixed seed
    so residual regressions are reproducible.
    """
    rng = np.random.default_rng(seed)
    bank = []
    for k in range(n):
        target = "wu" if k % 2 == 0 else "wt"
        p_coef = rng.uniform(-1.0, 1.0, size=rng.integers(1, 4))
        if not np.any(np.abs(p_coef) > 0.2):
            p_coef[0] = 0.5
        q_coef = rng.uniform(-1.0, 1.0, size=rng.integers(1, max_time_degree + 1))
        if not np.any(np.abs(q_coef) > 0.2):
            q_coef[0] = 1.0
        bank.append(
            _poly_test_function(
                target, t_end, p_coef, q_coef, grid.a, grid.b, label=f"{target}-{k}"
            )
        )
    return bank


def _validate_test_function(tf: SpaceTimeTestFunction, grid: Grid, t_end: float):
    if tf.target not in ("wu", "wt"):
        raise ContractError(f"unknown test-function target {tf.target!r}")
    if abs(tf.t_end - t_end) > 1e-12 * max(t_end, 1.0):
        raise ContractError(
            f"test function horizon {tf.t_end} does not match trajectory {t_end}"
        )
    edge = np.array([grid.a, grid.b])
    scale = max(1.0, float(np.max(np.abs(tf.X(grid.nodes)))))
    if tf.target == "wu" and np.any(np.abs(tf.X(edge)) > 1e-12 * scale):
        raise ContractError("displacement test function must vanish at the boundary")
    tscale = max(1.0, abs(tf.T(0.0)))
    if abs(tf.T(t_end)) > 1e-12 * tscale:
        raise ContractError("test function must vanish at the time horizon")
    if tf.target == "wu" and abs(tf.Tp(t_end)) > 1e-12 * tscale / max(t_end, 1e-300):
        raise ContractError(
            "displacement test function needs vanishing time derivative at the horizon"
        )


@dataclass(frozen=True)
class WeakFormResiduals:
    r_wu: np.ndarray
    r_wt: np.ndarray

    @property
    def max_wu(self) -> float:
        return float(np.max(self.r_wu)) if self.r_wu.size else 0.0

    @property
    def max_wt(self) -> float:
        return float(np.max(self.r_wt)) if self.r_wt.size else 0.0


def weak_form_residual(
    traj: Trajectory,
    material: Material,
    test_bank: Sequence[SpaceTimeTestFunction],
) -> WeakFormResiduals:
    """Quadrature residuals of the two integral identities of the limit
    system against each member of the test bank.

    The displacement identity tests u (twice integrated by parts in time),
    the temperature identity tests Theta with the advective flux terms.
    """
    grid = traj.grid
    w = grid.quad_weights()
    times = traj.times
    t_end = float(times[-1])
    if len(traj.states) < 2:
        raise StructuralError("weak-form residuals need at least two snapshots")

    wt_time = np.diff(times)
    tw = np.zeros_like(times)
    tw[1:] += 0.5 * wt_time
    tw[:-1] += 0.5 * wt_time

    nodes = grid.nodes
    r_wu = []
    r_wt = []
    for tf in test_bank:
        _validate_test_function(tf, grid, t_end)
        Xv = tf.X(nodes)
        Xpv = tf.Xp(nodes)
        Tv = np.array([tf.T(t) for t in times])
        Tpv = np.array([tf.Tp(t) for t in times])
        Tppv = np.array([tf.Tpp(t) for t in times])

        if tf.target == "wu":
            acc = 0.0
            for j, s in enumerate(traj.states):
                ux = dx(s.u, grid).values
                fp_thx = eval_fp(material, np.maximum(s.theta.values, 0.0)) * dx(
                    s.theta, grid
                ).values
                acc += tw[j] * (
                    Tppv[j] * float(w @ (s.u.values * Xv))
                    + Tv[j] * float(w @ (ux * Xpv))
                    + Tv[j] * float(w @ (fp_thx * Xv))
                )
            s0 = traj.states[0]
            acc -= Tv[0] * float(w @ (s0.v.values * Xv))
            acc += Tpv[0] * float(w @ (s0.u.values * Xv))
            r_wu.append(abs(acc))
        else:
            acc = 0.0
            for j, s in enumerate(traj.states):
                th = s.theta.values
                thx = dx(s.theta, grid).values
                v = s.v.values
                fpv = eval_fp(material, np.maximum(th, 0.0))
                fv = eval_f(material, np.maximum(th, 0.0))
                acc += tw[j] * (
                    -Tpv[j] * float(w @ (th * Xv))
                    + Tv[j] * float(w @ (thx * Xpv))
                    - Tv[j] * float(w @ (fpv * thx * v * Xv))
                    - Tv[j] * float(w @ (fv * v * Xpv))
                )
            acc -= Tv[0] * float(w @ (traj.states[0].theta.values * Xv))
            r_wt.append(abs(acc))

    return WeakFormResiduals(r_wu=np.array(r_wu), r_wt=np.array(r_wt))


# ---------------------------------------------------------------------------
# Difference norms between trajectories
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DifferenceNorms:
    """The four stability quantities, reported squared:

    sup-in-time of |vA - vB|^2, |u_xA - u_xB|^2, |ThetaA - ThetaB|^2, and
    the space-time integral of |Theta_xA - Theta_xB|^2.
    """

    sup_v_l2: float
    sup_ux_l2: float
    sup_theta_l2: float
    thetax_l2l2: float

    def total(self) -> float:
        return self.sup_v_l2 + self.sup_ux_l2 + self.sup_theta_l2 + self.thetax_l2l2


def difference_norms(traj_a: Trajectory, traj_b: Trajectory) -> DifferenceNorms:
    ga, gb = traj_a.grid, traj_b.grid
    if (ga.a, ga.b, ga.n_cells) != (gb.a, gb.b, gb.n_cells):
        raise StructuralError("trajectories live on different grids")
    ta, tb = traj_a.times, traj_b.times
    if ta.shape != tb.shape or not np.allclose(ta, tb, rtol=0.0, atol=1e-12):
        raise StructuralError("trajectories were recorded at different times")

    sup_v = sup_ux = sup_th = 0.0
    thx_sq = np.empty(ta.shape)
    for j, (sa, sb) in enumerate(zip(traj_a.states, traj_b.states)):
        dv = sa.v.values - sb.v.values
        dux = dx(sa.u, ga).values - dx(sb.u, ga).values
        dth = sa.theta.values - sb.theta.values
        dthx = dx(sa.theta, ga).values - dx(sb.theta, ga).values
        sup_v = max(sup_v, l2_norm_sq(dv, ga))
        sup_ux = max(sup_ux, l2_norm_sq(dux, ga))
        sup_th = max(sup_th, l2_norm_sq(dth, ga))
        thx_sq[j] = l2_norm_sq(dthx, ga)
    return DifferenceNorms(
        sup_v_l2=sup_v,
        sup_ux_l2=sup_ux,
        sup_theta_l2=sup_th,
        thetax_l2l2=float(np.trapezoid(thx_sq, ta)),
    )

import numpy as np
import pytest

from thermoelast1d.diagnostics import (
    DifferenceNorms,
    compute_record,
    default_test_bank,
    difference_norms,
    energy,
    energy_identity_residual,
    hfunc,
    mass_identity_residual,
    weak_form_residual,
)
from thermoelast1d.errors import ContractError, StructuralError
from thermoelast1d.grid import Grid
from thermoelast1d.initial_data import equilibrium, standing_wave
from thermoelast1d.materials import identity_material
from thermoelast1d.solver_eps import run_eps
from thermoelast1d.solver_limit import run_limit
from thermoelast1d.state import SolverConfig, Trajectory, make_state

MAT = identity_material()


def small_run(n=64, t_end=0.25, epsilon=0.0, scheme="imex1", dt=None, amplitude=0.3,
              theta_amplitude=0.2, record_every=1):
    g = Grid(0.0, 1.0, n)
    cfg = SolverConfig(
        dt=g.h / 2 if dt is None else dt, t_end=t_end, epsilon=epsilon, scheme=scheme
    )
    init = standing_wave(g, amplitude=amplitude, theta_amplitude=theta_amplitude)
    if epsilon > 0:
        return g, cfg, run_eps(init, MAT, cfg, g, record_every=record_every)
    return g, cfg, run_limit(init, MAT, cfg, g, record_every=record_every)


def test_equilibrium_energy_residual_exact_zero():
    g = Grid(0.0, 1.0, 64)
    cfg = SolverConfig(dt=g.h / 2, t_end=0.5, epsilon=0.0)
    traj = run_limit(equilibrium(g, 0.7), MAT, cfg, g)
    r = energy_identity_residual(traj)
    assert np.max(np.abs(r)) <= 1e-13


def test_linear_wave_residual_through_verlet_invariant():
    """The continuous E oscillates at O(dt^2) for the leapfrog wave; the
    residual must stay at that level and show no secular drift."""
    g = Grid(0.0, 1.0, 128)
    cfg = SolverConfig(dt=g.h / 2, t_end=1.0, epsilon=0.0)
    init = standing_wave(g, amplitude=1.0, theta_base=0.0, theta_amplitude=0.0)
    traj = run_limit(init, MAT, cfg, g)
    r = energy_identity_residual(traj)
    assert np.max(np.abs(r)) <= 0.5 * cfg.dt**2 * traj.records[0].energy * 50
    # no drift: residual at T comparable to its running maximum
    assert abs(r[-1]) <= np.max(np.abs(r)) + 1e-15


def test_eps_residual_decays_with_dt():
    out = []
    for dt in (1e-3, 5e-4, 2.5e-4):
        g, cfg, traj = small_run(n=64, t_end=0.25, epsilon=1e-2, dt=dt)
        out.append(np.max(np.abs(energy_identity_residual(traj))))
    assert out[2] < out[1] < out[0]
    order = np.log2(out[0] / out[1])
    assert order > 0.7


# --- mass identity -----------------------------------------------------------


def test_mass_residual_zero_theta():
    g = Grid(0.0, 1.0, 64)
    cfg = SolverConfig(dt=g.h / 2, t_end=0.25, epsilon=0.0)
    init = standing_wave(g, amplitude=0.4, theta_base=0.0, theta_amplitude=0.0)
    traj = run_limit(init, MAT, cfg, g)
    assert np.max(np.abs(mass_identity_residual(traj, MAT))) == 0.0


def test_mass_residual_equilibrium_single_step():
    g = Grid(0.0, 1.0, 64)
    dt = 1e-3
    cfg = SolverConfig(dt=dt, t_end=dt, epsilon=0.0)
    traj = run_limit(equilibrium(g, 1.0), MAT, cfg, g)
    r = mass_identity_residual(traj, MAT)
    assert np.max(np.abs(r)) <= dt**2


def test_mass_residual_refines():
    out = []
    for dt in (1e-3, 5e-4):
        g, cfg, traj = small_run(n=128, t_end=0.25, dt=dt)
        out.append(np.max(np.abs(mass_identity_residual(traj, MAT))))
    assert out[1] <= out[0] / 1.7  # order >= ~1


# --- weak form ---------------------------------------------------------------


def test_weak_form_zero_solution():
    g = Grid(0.0, 1.0, 32)
    cfg = SolverConfig(dt=g.h / 2, t_end=0.25, epsilon=0.0)
    init = standing_wave(g, amplitude=0.0, theta_base=0.0, theta_amplitude=0.0)
    traj = run_limit(init, MAT, cfg, g)
    res = weak_form_residual(traj, MAT, default_test_bank(g, 0.25, n=6))
    assert res.max_wu == 0.0
    assert res.max_wt == 0.0


def test_weak_form_equilibrium_quadrature_tolerance():
    g = Grid(0.0, 1.0, 32)
    cfg = SolverConfig(dt=4e-5, t_end=0.5, epsilon=0.0)
    traj = run_limit(equilibrium(g, 0.7), MAT, cfg, g)
    res = weak_form_residual(traj, MAT, default_test_bank(g, 0.5, n=10))
    assert max(res.max_wu, res.max_wt) <= 1e-8


def test_weak_form_refines():
    out = []
    for n in (64, 128):
        g, cfg, traj = small_run(n=n, t_end=0.25)
        bank = default_test_bank(g, 0.25, n=6)
        res = weak_form_residual(traj, MAT, bank)
        out.append(max(res.max_wu, res.max_wt))
    assert np.log2(out[0] / out[1]) >= 0.9


def test_weak_form_support_validation():
    g, cfg, traj = small_run(n=32, t_end=0.25)
    bad_horizon = default_test_bank(g, 0.5, n=2)
    with pytest.raises(ContractError, match="horizon"):
        weak_form_residual(traj, MAT, bad_horizon)
    from thermoelast1d.diagnostics import SpaceTimeTestFunction

    bad_space = SpaceTimeTestFunction(
        target="wu",
        X=lambda x: np.ones_like(x),
        Xp=lambda x: np.zeros_like(x),
        T=lambda t: 1.0 - t / 0.25,
        Tp=lambda t: -4.0,
        Tpp=lambda t: 0.0,
        t_end=0.25,
    )
    with pytest.raises(ContractError, match="vanish"):
        weak_form_residual(traj, MAT, [bad_space])


# --- difference norms --------------------------------------------------------


def test_difference_norms_self_is_zero():
    g, cfg, traj = small_run(n=32, t_end=0.1, dt=1e-3)
    d = difference_norms(traj, traj)
    assert d.total() == 0.0


def test_difference_norms_vs_zero_gives_self_norms():
    g, cfg, traj = small_run(n=32, t_end=0.1, dt=1e-3)
    zero = Trajectory(g, 0.0, "limit")
    n = g.n_nodes
    for s in traj.states:
        zero.states.append(make_state(s.t, np.zeros(n), np.zeros(n), np.zeros(n)))
    d = difference_norms(traj, zero)
    from thermoelast1d.grid import dx, l2_norm_sq

    sup_v = max(l2_norm_sq(s.v.values, g) for s in traj.states)
    assert d.sup_v_l2 == pytest.approx(sup_v, rel=1e-12)


def test_difference_norms_symmetry_and_triangle():
    rng = np.random.default_rng(0)
    g = Grid(0.0, 1.0, 24)
    times = np.linspace(0.0, 0.2, 6)

    def synth(seed):
        r = np.random.default_rng(seed)
        traj = Trajectory(g, 0.0, "limit")
        for t in times:
            vals = [r.normal(size=g.n_nodes) for _ in range(3)]
            th = np.abs(vals[2])
            traj.states.append(make_state(t, vals[0], vals[1], th))
        return traj

    a, b, c = synth(1), synth(2), synth(3)
    dab = difference_norms(a, b)
    dba = difference_norms(b, a)
    assert dab == dba
    dac = difference_norms(a, c)
    dbc = difference_norms(b, c)
    for name in ("sup_v_l2", "sup_ux_l2", "sup_theta_l2", "thetax_l2l2"):
        # triangle inequality in the non-squared interpretation
        assert np.sqrt(getattr(dac, name)) <= (
            np.sqrt(getattr(dab, name)) + np.sqrt(getattr(dbc, name)) + 1e-12
        )


def test_difference_norms_grid_mismatch():
    _, _, ta = small_run(n=32, t_end=0.1, dt=1e-3)
    _, _, tb = small_run(n=64, t_end=0.1, dt=1e-3)
    with pytest.raises(StructuralError):
        difference_norms(ta, tb)


def test_difference_norms_timeline_mismatch():
    _, _, ta = small_run(n=32, t_end=0.1, dt=1e-3)
    _, _, tb = small_run(n=32, t_end=0.1, dt=5e-4)
    with pytest.raises(StructuralError):
        difference_norms(ta, tb)


def test_state_rejects_wrong_bc_kinds():
    from thermoelast1d.errors import ContractError
    from thermoelast1d.grid import BC_DIRICHLET, BC_HINGED, BC_NEUMANN, Field
    from thermoelast1d.state import State

    n = 9
    v = Field(np.zeros(n), BC_HINGED)
    u = Field(np.zeros(n), BC_DIRICHLET)
    th = Field(np.ones(n), BC_NEUMANN)
    State(0.0, v, u, th)  # valid triple
    with pytest.raises(ContractError):
        State(0.0, u, u, th)  # v must be hinged
    with pytest.raises(ContractError):
        State(0.0, v, u, Field(np.zeros(n), BC_DIRICHLET))  # theta bc wrong
    with pytest.raises(StructuralError):
        State(0.0, v, u, Field(np.ones(n + 2), BC_NEUMANN))


# --- record bookkeeping ------------------------------------------------------


def test_dissipation_accumulator_matches_trapezoid():
    g, cfg, traj = small_run(n=64, t_end=0.25, epsilon=1e-2)
    t = traj.record_times
    s = traj.record_series("thetax_l2sq")
    acc = np.concatenate([[0.0], np.cumsum(0.5 * (s[1:] + s[:-1]) * np.diff(t))])
    assert np.max(np.abs(acc - traj.record_series("dissipation_accum"))) <= 1e-12


def test_hfunc_flagged_below_floor():
    g = Grid(0.0, 1.0, 16)
    n = g.n_nodes
    s = make_state(0.0, np.zeros(n), np.zeros(n), np.zeros(n))  # theta = 0 < floor
    rec = compute_record(s, MAT, g, 0.0, None)
    assert rec.hfunc is None
    assert not rec.hfunc_valid
    ok = make_state(0.0, np.zeros(n), np.zeros(n), np.ones(n))
    rec2 = compute_record(ok, MAT, g, 0.0, None)
    assert rec2.hfunc_valid
    assert rec2.hfunc == pytest.approx(1.0)


def test_energy_and_hfunc_values():
    g = Grid(0.0, 1.0, 256)
    init = standing_wave(g, amplitude=0.3, theta_amplitude=0.0, theta_base=2.0)
    # E = 1/2 |u_x|^2 + int Theta = 0.09 pi^2 / 4 + 2
    assert energy(init, g) == pytest.approx(0.09 * np.pi**2 / 4 + 2.0, rel=1e-4)
    y = hfunc(init, MAT, g)
    # y = 1 + 1/2 |u_xx|^2 = 1 + 0.09 pi^4 / 4
    assert y == pytest.approx(1.0 + 0.09 * np.pi**4 / 4, rel=1e-3)

"""Tests for the implicit stepper, adaptive runs and blow-up detection."""

from __future__ import annotations

import numpy as np
import pytest

from mmrd.graphs import (
    dirichlet_graph,
    extended_neumann_graph,
    extended_power_graph,
    obstacle_graph,
    zero_graph,
)
from mmrd.mesh import build_mesh, sup_norm
from mmrd.reactions import (
    custom_reaction,
    nuclear_reaction,
    power_reaction,
    zero_reaction,
)
from mmrd.stepper import (
    ProblemSpec,
    TimeControl,
    Trajectory,
    detect_blowup,
    local_existence_horizon,
    run,
    step,
)


def scalar_problem(n=51, reaction=None, boundary=None, interior=None, u0=None, a=1.0):
    mesh = build_mesh(1, [1.0], [n])
    reaction = reaction or zero_reaction()
    boundary = boundary or zero_graph()
    interior = interior or zero_graph()
    if u0 is None:
        u0 = np.ones(mesh.shape)
    elif callable(u0):
        u0 = u0(mesh.axes[0])
    return ProblemSpec(mesh, (a,), reaction, (interior,), (boundary,), np.asarray([u0]))


@pytest.mark.parametrize("n", [10, 11, 24, 33])
@pytest.mark.parametrize("bc_kind", ["neumann", "dirichlet"])
def test_step_matches_dense_linear_solve(n, bc_kind):
    """For linear boundary laws the implicit step is a linear system; the
    Gauss-Seidel result must match a direct dense solve."""
    mesh = build_mesh(1, [1.0], [n])
    a, dt = 0.7, 3e-3
    h = mesh.spacing[0]
    mu = a * dt / h**2
    rng = np.random.default_rng(n)
    u0 = rng.random(n) + 0.5
    bc = zero_graph() if bc_kind == "neumann" else dirichlet_graph()
    P = ProblemSpec(mesh, (a,), zero_reaction(), (zero_graph(),), (bc,), np.asarray([u0]))
    got = step(P, P.initial_state(), dt)[0]

    M = np.zeros((n, n))
    rhs = P.initial_state()[0].copy()
    for i in range(1, n - 1):
        M[i, i - 1] = M[i, i + 1] = -mu
        M[i, i] = 1.0 + 2.0 * mu
    if bc_kind == "neumann":
        M[0, 0] = M[-1, -1] = 1.0 + 2.0 * mu
        M[0, 1] = M[-1, -2] = -2.0 * mu
    else:
        M[0, 0] = M[-1, -1] = 1.0
        rhs[0] = rhs[-1] = 0.0
    expect = np.linalg.solve(M, rhs)
    np.testing.assert_allclose(got, expect, atol=5e-10)


def test_constant_state_is_equilibrium_to_machine_precision():
    P = scalar_problem(u0=lambda x: np.full_like(x, 3.7))
    S = P.initial_state()
    for _ in range(5):
        S = step(P, S, 1e-2)
    assert np.max(np.abs(S - 3.7)) <= 1e-14


def test_heat_decay_rate_matches_principal_eigenvalue():
    n = 201
    mesh = build_mesh(1, [1.0], [n])
    u0 = np.sin(np.pi * mesh.axes[0])
    P = ProblemSpec(mesh, (1.0,), zero_reaction(), (zero_graph(),), (dirichlet_graph(),),
                    np.asarray([u0]))
    dt = 1e-4
    S = P.initial_state()
    sups = [sup_norm(S[0])]
    for _ in range(200):
        S = step(P, S, dt)
        sups.append(sup_norm(S[0]))
    sups = np.asarray(sups)
    assert np.all(np.diff(sups) < 0)  # monotone decay
    rate = -np.polyfit(dt * np.arange(len(sups)), np.log(sups), 1)[0]
    assert rate == pytest.approx(np.pi**2, rel=0.02)


def test_obstacle_interior_graph_clamps_states():
    # constant forcing pushes up; the obstacle graph absorbs it at level M
    F = custom_reaction(1, lambda U: np.full_like(U, 5.0))
    P = scalar_problem(
        reaction=F, interior=obstacle_graph(1.0), boundary=extended_neumann_graph(),
        u0=lambda x: np.full_like(x, 0.5),
    )
    S = P.initial_state()
    for _ in range(80):
        S = step(P, S, 1e-2)
    assert np.max(S) <= 1.0 + 1e-12
    assert np.max(S) >= 1.0 - 1e-6  # it actually reaches the obstacle


def test_step_preserves_nodewise_ordering():
    mesh = build_mesh(1, [1.0], [101])
    x = mesh.axes[0]
    P = ProblemSpec(
        mesh, (1.0,), power_reaction(3.0), (zero_graph(),),
        (extended_power_graph(1.0, 2.5),), np.asarray([np.sin(np.pi * x) + 0.2]),
    )
    rng = np.random.default_rng(0)
    S1 = np.asarray([np.sin(np.pi * x) + 0.2])
    S2 = S1 + np.asarray([0.3 * rng.random(x.shape)])
    dt = 1e-4
    for _ in range(20):
        S1 = step(P, S1, dt)
        S2 = step(P, S2, dt)
        assert float(np.max(S1 - S2)) <= 1e-12


def test_backward_euler_sup_norm_nonincreasing_without_reaction():
    for bc in (extended_neumann_graph(), dirichlet_graph(), extended_power_graph(1.0, 2.0)):
        P = scalar_problem(boundary=bc, u0=lambda x: 1.0 + np.sin(2 * np.pi * x) ** 2)
        S = P.initial_state()
        prev = sup_norm(S[0])
        for _ in range(10):
            S = step(P, S, 5e-3)
            cur = sup_norm(S[0])
            assert cur <= prev + 1e-12
            prev = cur


def test_initial_data_projected_onto_graph_domains():
    # Dirichlet boundary forces boundary nodes to 0 at t=0
    P = scalar_problem(boundary=dirichlet_graph(), u0=lambda x: np.ones_like(x))
    assert P.initial[0][0] == 0.0 and P.initial[0][-1] == 0.0
    assert P.initial[0][1] == 1.0
    # obstacle interior law truncates everywhere
    P = scalar_problem(interior=obstacle_graph(0.5), u0=lambda x: np.ones_like(x))
    assert np.max(P.initial) <= 0.5


def test_run_trivial_zero_solution():
    P = scalar_problem(reaction=power_reaction(3.0), boundary=extended_power_graph(1.0, 2.5),
                       u0=lambda x: np.zeros_like(x))
    traj = run(P, TimeControl(t_end=0.1))
    assert traj.status == "completed"
    assert np.max(traj.sup_norms) == 0.0


def test_run_blowup_supercritical_dirichlet():
    mesh = build_mesh(1, [1.0], [51])
    phi = np.sin(np.pi * mesh.axes[0])
    phi /= np.trapezoid(phi, mesh.axes[0])
    P = ProblemSpec(mesh, (1.0,), power_reaction(3.0), (zero_graph(),),
                    (dirichlet_graph(),), np.asarray([12.0 * phi]))
    traj = run(P, TimeControl(t_end=2.0, blowup_threshold=1e3))
    assert traj.status == "blowup"
    verdict = detect_blowup(traj)
    assert verdict.kind == "blowup"
    assert 0.0 < verdict.t_blowup < 0.5
    assert verdict.ci_width < 0.05


def test_run_nuclear_a_zero_growth_bound():
    mesh = build_mesh(1, [1.0], [31])
    ones = np.ones(mesh.shape)
    P = ProblemSpec(mesh, (1.0, 1.0), nuclear_reaction(0.0, 0.01),
                    (zero_graph(), zero_graph()),
                    (extended_neumann_graph(), extended_neumann_graph()),
                    np.asarray([ones, ones]))
    traj = run(P, TimeControl(t_end=2.0))
    assert traj.status == "completed"
    bound = np.exp(traj.times)  # ||u10|| * exp(||u20|| t)
    assert np.all(traj.sup_norms[:, 0] <= 1.05 * bound)


def test_positivity_preserved_for_nonnegative_data():
    P = scalar_problem(
        n=41, reaction=power_reaction(3.0), boundary=extended_power_graph(1.0, 2.5),
        u0=lambda x: np.sin(np.pi * x) ** 2,
    )
    traj = run(P, TimeControl(t_end=0.02, blowup_threshold=1e3))
    assert np.min(traj.min_values) >= -1e-12


def test_detect_blowup_reciprocal_samples():
    times = np.linspace(0.8, 0.99, 20)
    sups = 1.0 / (1.0 - times)
    traj = Trajectory(
        times=times, dts=np.diff(times, prepend=times[0]),
        sup_norms=sups[:, None], min_values=np.zeros_like(sups)[:, None],
        status="blowup", final_state=np.zeros((1, 3)),
    )
    v = detect_blowup(traj)
    assert v.t_blowup == pytest.approx(1.0, abs=1e-6)
    assert v.ci_width <= 1e-6


def test_detect_blowup_none_for_completed_and_failed():
    traj = Trajectory(
        times=np.asarray([0.0, 1.0]), dts=np.asarray([0.0, 1.0]),
        sup_norms=np.ones((2, 1)), min_values=np.zeros((2, 1)),
        status="completed", final_state=np.zeros((1, 3)),
    )
    assert detect_blowup(traj).kind == "none"
    traj.status = "solver_failure"
    traj.note = "dt collapsed below dt_min without sup-norm growth"
    v = detect_blowup(traj)
    assert v.kind == "none" and "dt collapsed" in v.note


def test_local_existence_horizon_values():
    assert local_existence_horizon(1.0, power_reaction(3.0)) == pytest.approx(1.0 / 12.0)
    assert local_existence_horizon(2.0, nuclear_reaction(1.0, 1.0)) == pytest.approx(1.0 / 24.0)
    F = power_reaction(3.0)
    horizons = [local_existence_horizon(s, F) for s in (0.0, 0.5, 1.0, 2.0, 5.0)]
    assert all(a > b for a, b in zip(horizons, horizons[1:]))


def test_sup_norm_envelope_up_to_horizon():
    P = scalar_problem(n=51, reaction=power_reaction(3.0), boundary=dirichlet_graph())
    t0 = local_existence_horizon(1.0, P.reaction)
    traj = run(P, TimeControl(t_end=t0))
    assert traj.status == "completed"
    assert np.max(traj.sup_norms) <= 2.0 + 1e-6


def test_2d_constant_equilibrium_and_positivity():
    mesh = build_mesh(2, [1.0, 1.0], [9, 9])
    P = ProblemSpec(mesh, (1.0,), zero_reaction(), (zero_graph(),),
                    (extended_neumann_graph(),), np.asarray([np.full(mesh.shape, 2.0)]))
    S = P.initial_state()
    for _ in range(5):
        S = step(P, S, 1e-2)
    assert np.max(np.abs(S - 2.0)) <= 1e-13


def test_2d_dirichlet_decay():
    mesh = build_mesh(2, [1.0, 1.0], [17, 17])
    x, y = mesh.coords
    u0 = np.sin(np.pi * x) * np.sin(np.pi * y)
    P = ProblemSpec(mesh, (1.0,), zero_reaction(), (zero_graph(),),
                    (dirichlet_graph(),), np.asarray([u0]))
    S = P.initial_state()
    dt = 2e-4
    for _ in range(50):
        S = step(P, S, dt)
    # backward-Euler decay of the principal 2D mode, rate ~ 2 pi^2
    expected = 1.0 / (1.0 + dt * 2.0 * np.pi**2) ** 50
    assert sup_norm(S[0]) == pytest.approx(expected, rel=0.05)

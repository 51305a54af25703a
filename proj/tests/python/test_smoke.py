import math

import numpy as np
import pytest

import graphon_sync as gs


def test_two_oscillators_match_closed_form():
    net = gs.erdos_renyi(2, 1.0, 0)
    traj = gs.simulate_sds(net, np.array([0.0, 1.0]), step=1e-3, horizon=1.0, store_stride=1000)
    final = traj["states"][-1]
    closed = 2 * math.atan(math.tan(0.5) * math.exp(-1))
    assert abs((final[1] - final[0]) - closed) < 1e-6
    assert traj["times"][0] == 0.0 and traj["times"][-1] == pytest.approx(1.0)


def test_graphon_and_sampling():
    cells = gs.discretize(gs.Graphon.product_sine(), 5)
    expected = (25 / math.pi**2) * (math.cos(2 * math.pi / 5) - math.cos(3 * math.pi / 5)) ** 2
    assert cells(2, 2) == pytest.approx(expected, abs=1e-10)
    assert cells.to_array().shape == (5, 5)
    a = gs.sample_network(cells, 0.7, 11)
    assert a == gs.sample_network(cells, 0.7, 11)
    assert gs.is_connected(gs.erdos_renyi(10, 1.0, 1))


def test_python_kernels_work():
    tent = gs.Graphon("tent", lambda x, y: 1 - abs(x - y) / 2)
    theta0 = np.linspace(0, 1, 16, endpoint=False)
    traj = gs.simulate_cds(tent, theta0, step=0.05, horizon=0.5, store_stride=10)
    assert traj["states"].shape == (2, 16)


def test_order_parameter_and_theory():
    r, psi = gs.order_parameter(np.linspace(0, 1, 4096, endpoint=False))
    assert r == pytest.approx(2 * math.sin(0.5), abs=1e-4)
    r0, psi0 = gs.order_parameter(np.array([0, 2 * math.pi / 3, 4 * math.pi / 3]))
    assert psi0 is None
    assert gs.g_bar(100, 0.1, 1.0) == pytest.approx(0.152018, abs=1e-6)
    p, feasible = gs.beta_threshold_p(math.pi / 25)
    assert p == pytest.approx(0.254667, abs=1e-5) and feasible
    assert gs.max_beta_for(0.5, 100) == pytest.approx(0.15803, abs=1e-4)
    assert gs.positive_system_bound(1, 1, 1, 1) == pytest.approx(3.194528, abs=1e-6)


def test_frame_solve():
    sol = gs.solve_initial_frame(np.arange(512) / 512)
    assert 0 < sol["gamma"] < 1
    assert max(sol["residuals"]) <= 1e-8
    with pytest.raises(gs.InputError):
        gs.solve_initial_frame(np.full(16, 0.3))


def test_phase_diagram_and_errors():
    cells, records = gs.run_phase_diagram(
        '{"n_grid": [2], "p_grid": [1.0], "trials": 2, "integrator": {"horizon": 50}}'
    )
    assert cells[0]["phase_sync_fraction"] == 1.0
    assert [r.trial_index for r in records] == [0, 1]
    with pytest.raises(gs.ConfigError):
        gs.run_phase_diagram('{"trials": 0}')
    with pytest.raises(ValueError):
        gs.erdos_renyi(5, 2.0, 0)

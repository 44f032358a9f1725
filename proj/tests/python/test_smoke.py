import math

import pytest

import anisopt


def test_mesh_layout():
    mesh = anisopt.build_mesh(1, 4)
    assert mesh.n_cells == 4
    assert mesh.n_vertices == 5
    assert mesh.cell_volume == pytest.approx(0.25)

    square = anisopt.build_mesh(2, 2)
    assert square.n_cells == 8
    assert square.n_vertices == 9

    with pytest.raises(ValueError):
        anisopt.build_mesh(1, 1)


def test_truncation_values():
    reg = anisopt.RegParams(0.01, 1.0)
    assert anisopt.truncation(0.5, reg) == 0.5
    assert anisopt.truncation(5.0, reg) == 2.0
    band = anisopt.truncation(1.5, reg)
    assert 1.5 <= band <= 1.5 + reg.delta


def test_linear_state_matches_closed_form():
    mesh = anisopt.build_mesh(1, 8)
    control = anisopt.identity_control(mesh)
    y, report = anisopt.solve_state(control, anisopt.RegParams(1.0, 1.0), 2.0, 1.0, mesh)
    assert report["converged"]
    for (x, _), value in zip(mesh.vertices(), y):
        assert value == pytest.approx(0.5 * x * (1.0 - x), abs=1e-10)


def test_hammerstein_bound_and_uniqueness():
    mesh = anisopt.build_mesh(1, 16)
    kernel = anisopt.make_kernel(mesh, "gaussian", c=-1.0, sigma=0.25, p=3.0)
    assert kernel.c1 == pytest.approx(1.0)
    y_cells = [math.sin(3.0 * x) for x, _ in mesh.barycenters()]
    z, report = anisopt.solve_hammerstein(y_cells, kernel, 3.0)
    assert report["converged"]
    w = mesh.cell_volume
    l2 = lambda values: math.sqrt(sum(w * v * v for v in values))
    assert l2(z) <= l2(y_cells) + 1e-9
    assert anisopt.uniqueness_probe(y_cells, kernel, 3.0, None, 5, mesh) <= 1e-8


def test_poincare_constants():
    est = anisopt.estimate_poincare(anisopt.build_mesh(1, 128))
    assert est["c_omega"] == pytest.approx(1.0 / math.pi, rel=0.01)


def test_inequality_battery_passes():
    battery = anisopt.inequality_battery(seed=42)
    assert len(battery) == 5
    assert all(case["passed"] for case in battery)
    assert all(case["worst_violation"] >= -1e-12 for case in battery)


def test_minimize_self_target():
    mesh = anisopt.build_mesh(1, 8)
    bounds = anisopt.ControlBounds(0.5, 2.0, 0.5, 10.0)
    kernel = anisopt.make_kernel(mesh, "gaussian", c=-1.0, sigma=0.25, p=2.0)
    instance = anisopt.OcpInstance(mesh, 2.0, 1.0, bounds, kernel,
                                   [0.0] * mesh.n_cells, reg=None)
    target = anisopt.evaluate_cost(instance, [1.5, 1.0])
    instance.z_d = target["z"]
    result = anisopt.minimize(instance, [1.0, 1.0], budget=80)
    assert result["within_budget"]
    assert result["cost_opt"] <= 1e-8

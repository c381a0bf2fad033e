import math

import numpy as np
import pytest

import wgsd


def test_mesh_counts():
    m = wgsd.mesh("example1", 4)
    assert m["points"].shape[1] == 2
    assert m["triangles"].shape == (64, 3)
    assert int(np.sum(m["subdomain"] == 0)) == 32
    assert m["edge_counts"]["interface"] == 4


def test_quadrature_integrates_monomial():
    bary, w = wgsd.quadrature(6)
    x, y = bary[:, 1], bary[:, 2]
    # int x^2 y^3 over the reference triangle = 2! 3! / 7!
    assert np.dot(w, x**2 * y**3) == pytest.approx(2 * 6 / 5040, rel=1e-13)


def test_solve_matches_reference_value():
    r = wgsd.solve("example1", k=2, n=8)
    assert r["errors"][0] == pytest.approx(1.6371e-01, rel=0.01)
    assert r["relative_residual"] < 1e-9
    assert r["divergence_defect"] < 1e-9


def test_zero_velocity_example_is_exact():
    r = wgsd.solve("example2", k=1, n=4)
    assert max(r["errors"]) < 1e-10


def test_velocity_is_viscosity_independent():
    a = wgsd.solve("example1", k=1, n=4, mu=1.0)
    b = wgsd.solve("example1", k=1, n=4, mu=1e3)
    for i in (0, 1, 3, 4):
        assert b["errors"][i] == pytest.approx(a["errors"][i], rel=1e-8)
    assert b["errors"][2] == pytest.approx(1e3 * a["errors"][2], rel=1e-6)


def test_convergence_orders_first_row_blank():
    t = wgsd.convergence_table("example2", 1, [2, 4, 8], algorithm="standard")
    assert math.isnan(t["orders"][0][0])
    assert t["orders"][2][0] == pytest.approx(1.917, abs=0.01)


def test_interface_residuals_vanish():
    assert max(wgsd.interface_residuals("example1", mu=1e-6)) < 1e-10


def test_bad_algorithm_raises():
    with pytest.raises(ValueError):
        wgsd.solve("example1", 1, 2, algorithm="fastest")


def test_run_rejects_empty_mesh_list(tmp_path):
    code, log = wgsd.run({"n": [], "out_dir": str(tmp_path)})
    assert code == 1
    assert "empty" in log


def test_run_writes_table(tmp_path):
    code, _ = wgsd.run({"example": "example1", "k": 1, "n": [2, 4], "out_dir": str(tmp_path), "jobs": 1})
    assert code == 0
    csv = tmp_path / "table_example1_k1_robust_mu1.csv"
    assert csv.read_text().startswith("# config: ")
    ok, dev, _ = wgsd.compare_csv(str(csv), str(csv))
    assert ok and dev == 0.0

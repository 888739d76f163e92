import math

import numpy as np
import pytest

import viscoflow as vf


def test_grid_and_state_layout():
    g = vf.Grid(2, 16)
    assert g.shape == [16, 16]
    assert g.spacing[0] == pytest.approx(2 * math.pi / 16)
    s = vf.equilibrium_state(g)
    assert s.rho.shape == (16, 16)
    assert s.u.shape == (2, 16, 16)
    assert s.F.shape == (2, 2, 16, 16)
    np.testing.assert_array_equal(s.F[0, 0], 1.0)
    np.testing.assert_array_equal(s.F[0, 1], 0.0)


def test_acoustic_state_follows_the_first_axis():
    g = vf.Grid(2, 16)
    s = vf.acoustic_state(g, 0.1, 1)
    x0 = np.arange(16) * 2 * math.pi / 16
    np.testing.assert_allclose(s.rho[:, 3], 1 + 0.1 * np.sin(x0), atol=1e-14)


def test_state_round_trips_through_numpy():
    g = vf.Grid(3, 8)
    s = vf.random_smooth_state(g, 0.2, 4)
    t = vf.State(g, s.rho, s.u, s.F, t=0.25)
    assert t.t == 0.25
    t.t = s.t
    assert t == s
    with pytest.raises(vf.ViscoflowError):
        vf.State(g, np.zeros(10), s.u, s.F)


def test_equilibrium_is_a_fixed_point():
    s = vf.equilibrium_state(vf.Grid(2, 16))
    r = vf.simulate(s, 0.5, dt=0.05)
    assert r["steps"] == 10
    assert r["monitors_passed"]
    assert len(r["reports"]) == 11
    assert r["state"].t == pytest.approx(0.5)
    np.testing.assert_array_equal(r["state"].rho, s.rho)
    np.testing.assert_array_equal(r["state"].F, s.F)
    np.testing.assert_array_equal(r["state"].u, 0.0)


def test_smooth_run_conserves_mass():
    s = vf.add_cell_flow(vf.random_smooth_state(vf.Grid(2, 32), 0.2, 7), 0.3)
    r = vf.simulate(s, 0.2, physics=vf.Physics(mu=0.1, lam=0.05), dt=0.05)
    masses = [row["mass"] for row in r["reports"]]
    assert max(masses) - min(masses) <= 1e-3 * masses[0]
    assert all(row["volume_defect"] is not None for row in r["reports"][1:])


def test_compatibility_monitors():
    s = vf.compatible_deformation_state(vf.Grid(2, 16), 0.2)
    assert vf.elastic_compatibility_divergence(s) <= 1e-12
    assert vf.curl_defect(vf.equilibrium_state(vf.Grid(2, 8))) == 0.0
    assert vf.curl_defect(vf.incompatible_state(vf.Grid(2, 16), 0.2)) > 1e-3


def test_hookean_stress_is_identity_map():
    rng = np.random.default_rng(3)
    for d in (2, 3):
        f = rng.uniform(-2, 2, (d, d))
        np.testing.assert_array_equal(vf.piola_stress(f), f)
        np.testing.assert_allclose(vf.piola_stress_numeric(f), f, rtol=1e-6, atol=1e-8)


def test_configuration_errors_carry_exit_code():
    with pytest.raises(vf.ViscoflowError) as info:
        vf.parse_config("[grid]\nn = 12\n")
    assert info.value.code == 2
    assert info.value.kind == "config"
    canonical = vf.parse_config("[grid]\nn = 16\n")
    assert vf.parse_config(canonical) == canonical
    assert vf.initial_state(canonical).grid.shape == [16, 16]


def test_snapshot_round_trip(tmp_path):
    s = vf.random_smooth_state(vf.Grid(2, 8), 0.1, 2)
    d = vf.write_snapshot(s, tmp_path, 0)
    assert vf.read_snapshot(d) == s


def test_cli_run_and_exit_codes(tmp_path):
    cfg = tmp_path / "case.cfg"
    cfg.write_text(f"[grid]\nn = 16\n[stepping]\ndt = 0.05\nt_final = 0.2\n[output]\ndirectory = {tmp_path / 'out'}\n")
    code, out, err = vf.run_cli(["run", "--config", str(cfg)])
    assert code == 0, err
    assert "steps = 4" in out.splitlines()
    assert (tmp_path / "out" / "monitors.csv").read_text().count("\n") == 6
    code, _, err = vf.run_cli(["run", "--config", str(tmp_path / "missing.cfg")])
    assert code == 5
    assert err.startswith("error: code=5 kind=io")


def test_manufactured_convergence_orders():
    assert "traveling-wave" in vf.manufactured_cases()
    t = vf.convergence_study("traveling-wave", 2, [8, 16, 32], [0.1, 0.05, 0.025])
    assert len(t["levels"]) == 3
    assert t["csv"].startswith("case,")
    for order in t["orders"]:
        assert 0.7 <= order[1] <= 1.3

import json
import math

import numpy as np
import pytest

import phasecon as pc


def test_builtins_listed():
    names = pc.builtin_scenarios()
    assert len(names) == 8
    assert "cyclotron" in names


def test_free_run_shape():
    sc = pc.resolve_scenario("free")
    sc.tau_max = 1.0
    sc.step = 0.1
    r = pc.run(sc)
    assert r.status == "completed"
    assert r.samples.shape == (11, 10)
    np.testing.assert_allclose(r.samples[:, 1], r.samples[:, 0])
    assert r.to_csv().splitlines()[0] == pc.CSV_COLUMNS


def test_cyclotron_oracle():
    r = pc.run(pc.resolve_scenario("cyclotron"))
    assert r.summary["oracle_radius_error"] < 1e-6
    assert r.summary["oracle_period_error"] < 1e-6
    assert np.max(np.abs(r.samples[:, 9])) < 1e-8
    doc = json.loads(r.to_json())
    assert doc["status"] == "completed"


def test_circular_orbit_frequency():
    r = pc.run(pc.resolve_scenario("schwarzschild-circular"))
    assert r.summary["oracle_omega_error"] < 1e-6


def test_checkers():
    assert pc.check(pc.resolve_scenario("cyclotron"), "minimal-substitution").summary["passed"] == 1.0
    with pytest.raises(pc.IncompatibleChecker):
        pc.check(pc.resolve_scenario("free"), "closure")


def test_bad_config_raises():
    with pytest.raises(pc.ParseError):
        pc.load_scenario("[metric]\ntype = minkowski\nmass = 2\n")
    with pytest.raises(pc.ValidationError):
        pc.load_scenario("[particle]\nm = 0\n")


def test_christoffel_closed_form():
    M, r, th = 1.0, 10.0, 1.0
    G = pc.christoffel(pc.Metric.schwarzschild(M), [0.0, r, th, 0.0])
    assert G.shape == (4, 4, 4)
    f = 1 - 2 * M / r
    assert G[1, 0, 0] == pytest.approx(M * f / r**2, rel=1e-10)
    assert G[3, 2, 3] == pytest.approx(math.cos(th) / math.sin(th), rel=1e-10)


def test_vacuum_and_identities():
    g = pc.Metric.schwarzschild(1.0)
    x = [0.0, 8.0, 1.2, 0.3]
    assert np.max(np.abs(pc.ricci(g, x))) < 1e-5
    assert pc.bianchi_residual(g, x) < 1e-4
    assert pc.closure_residual(pc.Potential.uniform([0.1, 0, 0], [0, 0, 1]), x) < 1e-8


def test_plunge_reports_domain_exit():
    sc = pc.load_scenario(
        "[metric]\ntype = schwarzschild\n[initial]\nposition = 0, 4, pi/2, 0\n[integrator]\ntau_max = 100\n"
    )
    r = pc.run(sc)
    assert r.status == "domain_exit"
    assert r.failed

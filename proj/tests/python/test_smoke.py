import math

import numpy as np
import pytest

import hamext


def test_kernels_round_trip():
    rng = np.random.default_rng(1)
    x = 0.1 * rng.standard_normal((4, 4))
    assert np.allclose(hamext.mat_log(hamext.mat_exp(x)), x, atol=1e-12)
    assert np.allclose(hamext.mat_exp(np.zeros((2, 2))), np.eye(2))
    j = hamext.structure_matrix(2)
    assert np.array_equal(j @ j, -np.eye(4))
    px = hamext.project_sp(x)
    assert np.allclose(hamext.project_sp(px), px)
    assert hamext.symplectic_residual(2 * np.eye(4)) == pytest.approx(3 * np.linalg.norm(j))


def test_dexp_matches_finite_difference():
    rng = np.random.default_rng(2)
    x = 0.3 * rng.standard_normal((4, 4))
    y = rng.standard_normal((4, 4))
    s = 1e-5
    fd = (hamext.mat_exp(x + s * y) - hamext.mat_exp(x - s * y)) / (2 * s)
    assert np.allclose(hamext.dexp(x, y) @ hamext.mat_exp(x), fd, atol=1e-6)


def test_hamiltonian_examples():
    prob = hamext.Problem.oscillator(4, 0.1, 0.123)
    q, p = np.array([1.0, 2, 3, 4]), np.array([4.0, 1, 2, 3])
    assert hamext.hamiltonian(prob, q, p, 0.0) == pytest.approx(30.0)
    assert hamext.extended_hamiltonian(prob, q, p, 0.0, -30.0) == pytest.approx(0.0)


def test_method_table():
    ids = [d["id"] for d in hamext.methods()]
    assert "lie_gauss" in ids and "kahan_triple_jump" in ids
    d = hamext.describe("lie_gauss")
    assert (d["order"], d["properties"]) == (4, "CSE")
    with pytest.raises(hamext.Error):
        hamext.describe("rk4")


def test_step_advances_time_and_is_exact_when_autonomous():
    a = np.array([[0.0, 1.0], [-1.0, 0.0]])
    prob = hamext.Problem.autonomous(a)
    q, p, t, u = hamext.step("lie_gauss", prob, np.array([1.0]), np.array([0.0]), 0.0, 0.0, 0.3)
    assert t == 0.3
    assert q[0] == pytest.approx(math.cos(0.3), abs=1e-14)
    assert p[0] == pytest.approx(-math.sin(0.3), abs=1e-14)


def test_python_coefficient_functions():
    w = 0.7

    def a(t):
        s = 1 + 0.2 * math.sin(w * t)
        return np.array([[0.0, 1.0], [-s, 0.0]])

    def da(t):
        return np.array([[0.0, 0.0], [-0.2 * w * math.cos(w * t), 0.0]])

    custom = hamext.Problem(1, a, da)
    builtin = hamext.Problem.oscillator(1, 0.2, w)
    args = (np.array([1.0]), np.array([0.5]), 0.0, 0.0, 0.1, 50)
    for x, y in zip(hamext.integrate("lie_gauss", custom, *args),
                    hamext.integrate("lie_gauss", builtin, *args)):
        assert np.allclose(x, y, atol=1e-13)


def test_checks():
    prob = hamext.Problem.oscillator(2, 0.1, 0.123)
    q, p = np.array([1.0, 2.0]), np.array([3.0, 4.0])
    r = hamext.check_canonicity("lie_gauss", prob, q, p, 0.0, 0.0, 0.3)
    assert r["symplectic_residual"] < 1e-6 and r["extended_residual"] < 1e-6
    assert hamext.check_canonicity("symplectic_euler", prob, q, p, 0.0, 0.0, 0.3)["w_residual"] is None
    assert hamext.check_symmetry("midpoint", prob, q, p, 0.0, 0.0, 0.3) < 1e-12
    assert hamext.check_symmetry("lie_euler", prob, q, p, 0.0, 0.0, 0.3) > 1e-4
    est = hamext.estimate_order("lie_gauss", hamext.Problem.oscillator(2, 0.8, 2.0), q, p, 0.0, 10.0, 0.025)
    assert abs(est["order"] - 4) < 0.2


def test_config_and_short_table():
    cfg = hamext.ExperimentConfig.parse("t_end = 60\nmethods = lie_gauss, radau2a\n")
    assert cfg.step_count() == 200
    cfg.set("h", "0.3")
    with pytest.raises(hamext.ConfigError):
        cfg.set("nope", "1")
    run = hamext.run_trajectory(cfg, "lie_gauss", reference=True)
    assert run["t"].shape == (201,)
    assert np.max(np.abs(run["H"] - run["H_ref"])) < 1e-3
    table = hamext.table(cfg)
    assert [r["id"] for r in table["rows"]][0] == "lie_gauss"
    assert table["phase_ceiling"] > 0.1

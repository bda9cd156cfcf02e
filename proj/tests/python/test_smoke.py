import math
import os
from pathlib import Path

import numpy as np
import pytest

import bearing_swarm as bs

SCENARIOS = Path(os.environ.get("BSWARM_SCENARIO_DIR", Path(__file__).resolve().parents[2] / "scenarios"))


def test_graph_matrices():
    g = bs.build_graph(3, [(0, 1), (1, 2)])
    assert g.n == 3
    assert g.lambda2 == pytest.approx(1.0, abs=1e-14)
    assert np.array_equal(g.incidence @ g.incidence.T, 2 * g.laplacian)
    ok, dev = bs.verify_projector_identities(g)
    assert ok and dev < 1e-10
    assert np.allclose(bs.projector_M(2), [[0.5, -0.5], [-0.5, 0.5]])


def test_graph_errors():
    with pytest.raises(bs.GraphError, match="not connected"):
        bs.build_graph(3, [(0, 1)])
    with pytest.raises(bs.GraphError):
        bs.build_graph(3, [(0, 1), (1, 0)])
    g = bs.build_graph(2, [], allow_disconnected=True)
    assert not g.connected
    assert bs.algebraic_connectivity(g) == 0.0


def test_bearing_and_information():
    m = bs.bearing([0.0, 2.0], [0.0, 0.0])
    assert m.theta == pytest.approx(math.pi / 2)
    assert np.allclose(m.phi_perp, [-1.0, 0.0])
    li = bs.local_information(bs.bearing([2.0, 2.0], [1.0, 0.0]), [1.0, 0.0])
    assert li.h @ np.array([2.0, 2.0]) == pytest.approx(li.z, abs=1e-12)
    P, q = bs.unpack_phi(li.phi6)
    assert np.array_equal(P, li.P) and np.array_equal(q, li.q)
    with pytest.raises(bs.SingularGeometryError):
        bs.bearing([0.0, 0.0], [0.0, 0.0])


def test_gain_and_bounds():
    assert bs.beta_from_bound(100.0, 5, 0.4) == pytest.approx(560.017, rel=1e-6)
    x = np.zeros((3, 6))
    x[0, 0] = 2.0
    assert bs.finite_time_bound(x, 4.0) == (1.0, 0.5)
    with pytest.raises(bs.ParameterError):
        bs.beta_from_bound(1.0, 4, 0.0)


def test_solvers():
    H = np.eye(2)
    assert np.allclose(bs.centralized_solution(H, np.array([3.0, -2.0])), [3.0, -2.0])
    p, valid, cond = bs.local_solution(bs.pack_phi(0.5 * np.eye(2), np.array([0.5, 1.0])))
    assert valid and np.allclose(p, [1.0, 2.0]) and cond == pytest.approx(1.0)
    with pytest.raises(bs.ObservabilityError):
        bs.centralized_solution(np.array([[1.0, 0.0], [1.0, 0.0]]), np.array([0.0, 0.0]))
    assert bs.observability_check([[-1.0, 0.0], [0.0, -1.0]], [0.0, 0.0]) == pytest.approx(1.0)


def test_validate_bundled():
    report = bs.validate(bs.load_scenario(str(SCENARIOS / "fig1_like.json")))
    assert report["ok"]
    assert report["beta"] == pytest.approx(560.017, rel=1e-6)


def test_run_static_target():
    cfg = bs.load_scenario(str(SCENARIOS / "static_target.json"))
    out = bs.run(cfg, decimate=50)
    summary, rec = out["summary"], out["records"]
    assert summary["converged"]
    assert summary["max_conservation_residual"] <= 1e-10
    assert rec["p"].shape == (len(rec["t"]), 4, 2)
    assert np.allclose(rec["pstar"], rec["ptrue"], atol=1e-9)
    late = rec["t"] >= summary["t_star"]
    assert np.all(rec["msce"][late] <= summary["chatter_floor"])


def test_run_rejects_invalid_config():
    cfg = bs.parse_scenario(
        """{"graph": {"n": 3, "edges": [[0, 1], [1, 2]]},
            "sensors": [[-2, 0], [2, 0], [0, 3]],
            "trajectory": {"kind": "sinusoid", "origin": [0, 1]},
            "sim": {"h": 0.001, "t0": 0, "tf": 0.2},
            "bounds": {"n_hat": 2, "lambda2_hat": 1}}"""
    )
    with pytest.raises(bs.ValidationFailed, match="n_hat"):
        bs.run(cfg)
    with pytest.raises(bs.ScenarioError):
        bs.parse_scenario('{"graph": 1}')


def test_sweep_order():
    cfg = bs.parse_scenario(
        """{"graph": {"n": 3, "edges": [[0, 1], [1, 2]]},
            "sensors": [[-2, 0], [2, 0], [0, 3]],
            "trajectory": {"kind": "sinusoid", "origin": [0, 1]},
            "sim": {"h": 0.001, "t0": 0, "tf": 0.5},
            "bounds": {"n_hat": 3, "lambda2_hat": 1}}"""
    )
    rows = bs.sweep(cfg, "h", [2e-3, 1e-3])
    assert [r["value"] for r in rows] == [2e-3, 1e-3]
    with pytest.raises(bs.ParameterError):
        bs.sweep(cfg, "gain", [1.0])

import math

import pytest

import rou


def s0():
    return rou.OUParams(0.0, 1.0, math.sqrt(2.0)), rou.BoundarySpec(lower=0.0)


def test_half_normal_constants():
    p, b = s0()
    assert rou.boundary_rate(p, b) == pytest.approx(0.79788456080286536, rel=1e-12)
    assert rou.stationary_mean(p, b) == pytest.approx(0.79788456080286536, rel=1e-12)
    assert rou.asymptotic_variance(p, b) == pytest.approx(0.88254240061060637, rel=1e-9)
    assert rou.h_prime(p, b, 1.0) == pytest.approx(0.52315658373024674, rel=1e-12)


def test_doubly_rate():
    p, _ = s0()
    assert rou.doubly_loss_rate(p, 1.0) == pytest.approx(0.70887490522720679, rel=1e-10)


def test_invalid_parameters_raise():
    with pytest.raises(rou.RouError, match="NonPositiveGamma"):
        rou.OUParams(0.0, 0.0, 1.0)
    with pytest.raises(rou.RouError, match="NoBoundary"):
        rou.BoundarySpec()


def test_simulated_path_respects_barrier():
    p, b = s0()
    path = rou.simulate_path(p, b, x0=0.5, dt=1e-3, horizon=2.0, seed=7)
    assert len(path["y"]) == len(path["t"]) == 2001
    assert min(path["y"]) >= 0.0
    assert all(x <= y for x, y in zip(path["l"], path["l"][1:]))


def test_batch_is_deterministic_across_workers():
    p, b = s0()
    a = rou.batch_simulate(p, b, 0.0, 1e-2, 5.0, 16, 3, workers=1)
    c = rou.batch_simulate(p, b, 0.0, 1e-2, 5.0, 16, 3, workers=4)
    assert a == c


def test_small_experiment_report():
    cfg = rou.default_config("stationary")
    cfg["simulation"].update({"horizon": 20.0, "paths": 4, "levels": 1, "dt": 0.01})
    report = rou.run_experiment(cfg)
    assert {c["metric"] for c in report["checks"]} == {"rate_abs_err", "mean_abs_err", "ks_stationary"}
    assert report["analytic"]["q"] == pytest.approx(0.7978845608, rel=1e-9)

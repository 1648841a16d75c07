import math

import numpy as np
import pytest

import quadsim


def test_rotation_matrix_is_orthonormal():
    r = quadsim.rotation_matrix(0.3, -0.2, 1.1)
    assert np.allclose(r @ r.T, np.eye(3), atol=1e-12)
    assert np.allclose(quadsim.rotation_matrix(0, 0, math.pi / 2),
                       [[0, 1, 0], [-1, 0, 0], [0, 0, 1]], atol=1e-15)


def test_mix_unmix_round_trip():
    p = quadsim.QuadrotorParams()
    w = [210.0, 230.0, 250.0, 240.0]
    back, clamped = quadsim.unmix(quadsim.mix(w, p), p)
    assert not clamped
    assert np.allclose(back, w, rtol=1e-9)


def test_hover_fixed_point():
    p = quadsim.QuadrotorParams()
    d = quadsim.state_derivative([0.0] * 12, [p.mass * p.gravity, 0, 0, 0], 0.0, p)
    assert max(abs(v) for v in d) < 1e-15


def test_euler_rate_matrix_rejects_vertical_pitch():
    with pytest.raises(quadsim.DomainError):
        quadsim.euler_rate_matrix(0.0, math.pi / 2)


def test_noise_slope_and_stddev():
    x = quadsim.noise_samples("pink", 1 << 16, seed=3)
    assert abs(quadsim.psd_slope(x, 0.1) + 10) <= 3
    w = quadsim.noise_samples("white", 100000, seed=3)
    assert abs(w.std() - 0.3162) < 0.01


def test_metrics():
    t = np.arange(0, 10.0005, 1e-3)
    y = 1 - np.exp(-t)
    assert abs(quadsim.rise_time(t, y, 0, 1) - math.log(9)) < 1e-3
    assert abs(quadsim.settling_time(t, y, 0, 1, 2) - math.log(50)) < 1e-3
    assert quadsim.overshoot([0, 1, 2, 3, 4], [0, 0.5, 1.2, 0.95, 1.0], 0, 1) == 20.0
    assert quadsim.rise_time([0, 1], [0, 0], 0, 1) is None


def test_simulate_default_run():
    cfg = quadsim.Config()
    out = quadsim.simulate(cfg, "backstepping", "white", 1)
    assert out["error"] is None
    assert out["trace"].shape == (2001, len(quadsim.TRACE_COLUMNS.split(",")))
    assert out["metrics"]["altitude"]["settling_time"] is not None
    again = quadsim.simulate(cfg, "backstepping", "white", 1)
    assert np.array_equal(out["trace"], again["trace"])


def test_config_errors():
    with pytest.raises(quadsim.ConfigError, match="nope"):
        quadsim.Config.parse("nope = 1\n")
    cfg = quadsim.Config.parse("quadrotor.mass = -1\n")
    with pytest.raises(quadsim.ConfigError, match="mass"):
        cfg.validate()
    assert "quadrotor.mass = -1" in cfg.resolved()


def test_sweep_summary_shape():
    cfg = quadsim.Config.parse("run.seeds = 1..2\n")
    fraction, settling_ok, csv = quadsim.sweep_summary(cfg)
    assert 0.0 <= fraction <= 1.0
    assert isinstance(settling_ok, bool)
    assert len(csv.strip().splitlines()) == 21

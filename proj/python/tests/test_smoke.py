import json
import math

import numpy as np
import pytest
from scipy import integrate, stats

import sparsepde as sp


def test_config_and_benchmark():
    cfg = sp.make_config(1e-3, 0.5)
    v = 0.5 / 1.5
    assert cfg.v == pytest.approx(v)
    assert cfg.lam == pytest.approx(math.sqrt(2 * v * math.log(1e3)))
    assert sp.benchmark(1e-3, 0.5) == pytest.approx(math.log(1e3) / 1.5)


def test_bad_config_raises_value_error():
    with pytest.raises(ValueError):
        sp.make_config(2.0, 1.0)
    with pytest.raises(ValueError):
        sp.risk("nope", 0.1, 1.0, 0.0)


def test_priors_are_normalized():
    cfg = sp.make_config(1e-3, 0.25)
    for prior in (sp.grid_prior(cfg, 10.0), sp.bigrid_prior(cfg, 10.0)[0], sp.spike_slab_prior(1e-3, 4.0)):
        assert prior.total_mass() == pytest.approx(1.0, abs=1e-13)
    prior, spec = sp.bigrid_prior(cfg, 10.0)
    assert spec.b == pytest.approx(sp.b_of_r(0.25))
    assert prior.atoms[0][0] == pytest.approx(cfg.lam)


def test_plugin_matches_direct_integral():
    eta, r = 1e-3, 0.5
    cfg = sp.make_config(eta, r)
    tau = cfg.lam / math.sqrt(cfg.v)
    thetas = np.array([0.0, 1.0, tau, 6.0])
    got = sp.rho_plugin(eta, r, thetas)
    for t, g in zip(thetas, got):
        inner, _ = integrate.quad(lambda x: t * t * stats.norm.pdf(x - t), -tau, tau)
        lo, _ = integrate.quad(lambda x: (t - x) ** 2 * stats.norm.pdf(x - t), -np.inf, -tau)
        hi, _ = integrate.quad(lambda x: (t - x) ** 2 * stats.norm.pdf(x - t), tau, np.inf)
        assert g == pytest.approx((inner + lo + hi) / (2 * r), rel=1e-7)


def test_e_log_N_matches_scipy_quad():
    cfg = sp.make_config(0.1, 1.0)
    prior = sp.grid_prior(cfg, 8.0)
    theta = 2.0
    value, err = sp.e_log_N(prior, cfg, theta, cfg.v)
    ref, _ = integrate.quad(lambda z: sp.log_N(prior, cfg, theta, cfg.v, z) * stats.norm.pdf(z), -14, 14, limit=200)
    assert value == pytest.approx(ref, abs=1e-9)
    assert err < 1e-8
    assert value <= sp.log_mean_N(prior, cfg, theta, cfg.v) + 1e-12


def test_risk_sandwich_at_zero():
    out = sp.risk("grid", 0.1, 1.0, 0.0)
    assert 0.0 <= out["rho"] <= math.log(1 / 0.9) + 1e-9
    assert math.isnan(sp.risk("plugin", 0.1, 1.0, 1.0)["e_log_N"])


def test_predictive_density_integrates_to_one():
    cfg = sp.make_config(1e-3, 0.5)
    prior, _ = sp.bigrid_prior(cfg, 10.0)
    y = np.linspace(-30.0, 30.0, 6001)
    dens = sp.predictive_density(prior, cfg, 2.5, y)
    assert np.all(dens >= 0.0)
    assert np.trapezoid(dens, y) == pytest.approx(1.0, abs=1e-9)


def test_risk_curve_shape():
    c = sp.risk_curve("bigrid", 1e-3, 1.0, points=128)
    assert c["theta"].shape == (128,) and c["rho"].shape == (128,)
    assert c["max_rho"] >= c["rho"].max()
    assert c["ratio"] == pytest.approx(c["max_rho"] / c["benchmark"])


def test_phase_constant_and_sigma():
    h, h_plus = sp.h_r(0.1)
    assert h == pytest.approx(1.2 * 0.76 / (4 * 1.21))
    s = sp.sigma_surface("grid", 0.1, 0.1, omega_steps=64)
    assert s["max_sigma"] == pytest.approx(1.0 + h_plus, abs=1e-12)
    assert sp.sigma_surface("bigrid", 0.1, 0.1, omega_steps=64)["max_sigma"] == pytest.approx(1.0, abs=1e-12)
    assert sp.h_r(1.0)[1] == 0.0


def test_cli_in_process():
    code, out, err = sp.run_cli(["max-risk", "--estimator", "plugin", "--eta", "1e-10", "--r", "0.5"])
    assert code == 0, err
    doc = json.loads(out)
    assert list(doc)[:3] == ["eta", "r", "estimator"]
    assert doc["argmax_theta"] == pytest.approx(5.93, abs=0.01)
    code, _, _ = sp.run_cli(["max-risk", "--estimator", "grid", "--eta", "2", "--r", "1"])
    assert code == 2

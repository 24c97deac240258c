import math

import numpy as np
import pytest

import windlab


def small(beta=1.0):
    return windlab.GridSpec(M=16, steps=100, J=4, beta=beta)


def test_kernel_shape_and_positivity():
    k, log_norm = windlab.unit_kernel(small(), 7)
    assert k.shape == (9, 16, 16)
    assert np.all(k > 0)
    assert math.isfinite(log_norm)


def test_free_kernel_matches_heat_reference():
    spec = small(beta=0.0)
    k, log_norm = windlab.unit_kernel(spec, 1)
    torus = k.sum(axis=0) * math.exp(log_norm)
    ref = windlab.heat_reference(1.0, spec)
    assert np.max(np.abs(torus - ref) / ref) < 1e-6


def test_same_seed_same_kernel():
    a, _ = windlab.unit_kernel(small(), 3)
    b, _ = windlab.unit_kernel(small(), 3)
    assert np.array_equal(a, b)


def test_sigma_annealed_free_close_to_one():
    r = windlab.sigma_annealed(small(beta=0.0), N=8, replicas=20, seed=2)
    assert abs(r["value"] - 1.0) < 0.1
    assert r["replicas"] == 20
    assert len(r["config_hash"]) == 16


def test_run_experiment_reports_checks():
    r = windlab.run_experiment("kernel-check", replicas=2, M=16)
    assert r["passed"]
    assert r["csv"].startswith("config_hash,")
    assert "max_periodization_error" in r["summary"]


def test_clt_csv_has_scaled_column():
    r = windlab.run_experiment("sigma", replicas=4, N=4, M=16, beta=0.5)
    header = r["csv"].splitlines()[0].split(",")
    assert "Y_over_sqrtN" in header


def test_bad_config_raises():
    with pytest.raises(windlab.ConfigError):
        windlab.GridSpec(M=2)
    with pytest.raises(windlab.ConfigError):
        windlab.run_experiment("nope")
    with pytest.raises(windlab.ConfigError):
        windlab.run_experiment("sigma", beta=-1)

import math
import os

import numpy as np
import pytest

import gpe

BASE = """mode = inviscid
N = 3
tau0 = 0.5
rho = 1
M = 0.5
r = 3
ic.norm = 0.2
"""


def test_mode_counts_match_brute_force():
    for n in range(4):
        want = sum(
            1
            for a in range(-n, n + 1)
            for b in range(-n, n + 1)
            for c in range(0, n + 1)
            if a * a + b * b + c * c <= n * n
        )
        assert len(gpe.build_mode_set(n)) == want


def test_random_field_shape_and_d0():
    f = gpe.random_field(3, seed=4)
    assert f.shape == (len(gpe.build_mode_set(3)), 2)
    assert np.max(np.abs(gpe.project_d0(f, 3) - f)) < 1e-16


def test_norm_matches_numpy():
    n = 3
    f = gpe.random_field(n, mu=0.2, q=2.0, seed=1)
    k = np.array([2 * math.pi * math.sqrt(a * a + b * b + c * c) for a, b, c in gpe.build_mode_set(n)])
    amp = (np.abs(f) ** 2).sum(axis=1)
    tau, r = 0.1, 3.0
    want = math.sqrt(((1 + k ** (2 * r)) * np.exp(2 * tau * k) * amp).sum())
    assert gpe.norm(f, n, tau=tau, r=r) == pytest.approx(want, rel=1e-13)


def test_q_methods_agree():
    f = gpe.random_field(3, seed=1)
    g = gpe.random_field(3, seed=2)
    a = gpe.nonlinear_q(f, g, 3, "direct")
    b = gpe.nonlinear_q(f, g, 3)
    assert np.max(np.abs(a - b)) < 1e-12


def test_schedule_and_cutoff():
    s = gpe.radius_schedule("viscous", 0.5, 1.0, 0.5, nu_z=0.5)
    assert s["tau_T"] == 0.25
    assert s["gamma_rate"] == 0.0625
    assert gpe.cutoff_theta(0.4, 1.0) == 1.0
    assert gpe.cutoff_theta(1.0, 1.0) == 0.0


def test_config_resolution_and_rejection():
    resolved = gpe.parse_config(BASE)
    assert resolved["mode"] == "inviscid"
    assert float(resolved["ic.mu"]) == 1.0
    with pytest.raises(gpe.ConfigError, match="r > 5/2"):
        gpe.parse_config(BASE.replace("r = 3", "r = 2"))


def test_simulate_is_deterministic():
    text = BASE + "noise.kind = multiplicative\nnoise.amplitude = 0.5\ndt = 0.01\nseed = 3\n"
    a = gpe.simulate(text, 1)
    b = gpe.simulate(text, 1)
    assert a["stop_reason"] == "horizon_T"
    assert np.array_equal(a["gevrey"], b["gevrey"])
    assert a["t"][0] == 0.0
    assert np.all(a["theta"] == 1.0)


def test_run_ensemble_writes_outputs(tmp_path):
    out = tmp_path / "ens"
    text = BASE + f"dt = 0.02\nensemble_size = 2\noutput_dir = {out}\n"
    s = gpe.run_ensemble(text)
    assert s["ensemble_size"] == 2
    assert s["failed"] == 0
    for name in ("config.json", "summary.json", "summary.csv", "traj_0.jsonl", "traj_1.jsonl"):
        assert os.path.exists(out / name)

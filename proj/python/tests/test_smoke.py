import numpy as np
import pytest

import l4u


def test_dft_and_bounds():
    f = l4u.dft_matrix(8)
    assert f.shape == (8, 8)
    assert np.allclose(f.conj().T @ f, np.eye(8), atol=1e-12)
    assert abs(f[1, 1] - np.exp(-2j * np.pi / 8) / np.sqrt(8)) < 1e-14
    assert abs(l4u.l4_norm4(f) - 1.0) < 1e-12
    a = l4u.random_unitary(6, seed=3)
    assert 1 - 1e-9 <= l4u.l4_norm4(a) <= 6 + 1e-9


def test_projection_matches_numpy_polar_factor():
    rng = np.random.default_rng(0)
    m = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    u, _, vh = np.linalg.svd(m)
    assert np.allclose(l4u.project_unitary(m), u @ vh, atol=1e-10)


def test_objective_and_gradient():
    y = l4u.sample_multipath(4, l=2, n=50, seed=1)
    a = l4u.random_unitary(4, seed=2)
    x = a @ y
    assert l4u.g_det(a, y) == pytest.approx(np.sum(np.abs(x) ** 4), rel=1e-12)
    grad = 2 * (np.abs(x) ** 2 * x) @ y.conj().T
    assert np.allclose(l4u.grad_gdet(a, y), grad, rtol=1e-12, atol=1e-12)
    assert l4u.g_analytic_l1(l4u.dft_matrix(2)) == pytest.approx(3.0, rel=1e-14)


def test_learners_are_monotone():
    y = l4u.sample_multipath(6, l=2, n=300, seed=4)
    init = l4u.random_unitary(6, seed=5)
    a, trace = l4u.msp_run(y, init)
    objs = [it["objective"] for it in trace["iterations"]]
    assert all(b >= a_ - 1e-12 * abs(a_) for a_, b in zip(objs, objs[1:]))
    assert np.allclose(a.conj().T @ a, np.eye(6), atol=1e-9)
    a2, trace2 = l4u.ca_run(y, init, max_sweeps=5)
    assert trace2["iterations"][-1]["objective"] >= trace2["iterations"][0]["objective"]


def test_verify_and_derivatives():
    assert l4u.verify("dft-ca", range(2, 9))["passed"]
    assert l4u.verify("dct-scan", [3, 4, 5])["passed"]
    rep = l4u.ca_derivatives_analytic(l4u.dft_matrix(2))
    assert rep["pairs"][0]["second"] == pytest.approx(-8.0)
    with pytest.raises(ValueError):
        l4u.verify("dct-scan", [2])


def test_ber_sweep_full_density_le_equals_lmmse():
    hs = l4u.scene_channels(b=16, u=2, scenes=5, seed=1)
    base = l4u.ber_sweep(hs, trials=500, seed=2)
    le = l4u.ber_sweep(hs, det="le", density=1.0, transform=l4u.dft_matrix(16), trials=500, seed=2)
    assert base["bit_errors"] == le["bit_errors"]
    assert base["bit_count"] == [2000, 2000, 2000]

"""Unitary l4-norm sparsifying transforms (Python front end of the C++ core).

Matrices are numpy complex128 arrays. Learners return the learned matrix and
the trace as a dict; verification and BER helpers return plain dicts.
"""

import json as _json

try:
    from . import _l4u as _core
except ImportError:  # build tree: the extension sits next to, not inside, the package
    import _l4u as _core

from numpy import asarray as _asarray

L4uError = _core.L4uError
dft_matrix = _core.dft_matrix
dct2_matrix = _core.dct2_matrix
random_unitary = _core.random_unitary
l4_norm4 = _core.l4_norm4
project_unitary = _core.project_unitary
nearest_cp = _core.nearest_cp
sample_multipath = _core.sample_multipath
sample_sinusoid = _core.sample_sinusoid
scene_channels = _core.scene_channels
g_det = _core.g_det
grad_gdet = _core.grad_gdet
g_analytic_l1 = _core.g_analytic_l1


def ca_derivatives_analytic(a, c=1.0):
    """First and second CA derivatives of the single-path expectation at `a`."""
    return _json.loads(_core._ca_derivatives_analytic(a, c))


def msp_run(y, init, max_iters=500):
    a, trace = _core._msp_run(y, init, max_iters)
    return a, _json.loads(trace)


def ca_run(y, init, max_sweeps=100):
    a, trace = _core._ca_run(y, init, max_sweeps)
    return a, _json.loads(trace)


def verify(claim, b):
    """Run 'dft-msp' (analytic, one path), 'dft-ca' or 'dct-scan' over sizes `b`."""
    return _json.loads(_core._verify(claim, list(b)))


def ber_sweep(channels, det="lmmse", density=0.125, transform=None, snr_db=(0, 5, 10), trials=1000,
              constellation="qpsk", seed=0):
    chans = [_asarray(h, dtype=complex) for h in channels]
    return _json.loads(_core._ber_sweep(chans, det, density, transform, list(snr_db), trials, constellation, seed))


__all__ = [name for name in dir() if not name.startswith("_")]

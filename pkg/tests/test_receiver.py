import numpy as np
import pytest

from latinia import linalg
from latinia.beamform import BeamformerSpace, all_choices
from latinia.latin import build_schemes
from latinia.receiver import (batch_amplitudes, batch_kappa, batch_ocn,
                              batch_signal_spaces, normalize_columns, ocn,
                              signal_space, stream_metrics, stream_snr,
                              sum_rate, zero_forcing)

from conftest import crandn


def test_zero_forcing_nulls(rng):
    A = crandn(rng, 6, 6)
    R = zero_forcing(A)
    G = R @ A
    assert np.allclose(np.linalg.norm(R, axis=1), 1)
    assert np.allclose(G - np.diag(np.diag(G)), 0, atol=1e-12)
    assert zero_forcing(A, 3).shape == (3, 6)


def test_zero_forcing_orthogonal_matrix_gain_one(rng):
    Q, _ = np.linalg.qr(crandn(rng, 4, 4))
    R = zero_forcing(Q)
    assert np.allclose(np.abs(np.diag(R @ Q)), 1)


def test_ocn_orthonormal_is_one(rng):
    Q, _ = np.linalg.qr(crandn(rng, 6, 6))
    assert np.isclose(ocn(Q, 3), 1.0)
    assert np.isclose(linalg.cond_number(Q), 1.0)


def test_ocn_ignores_interference_angles(rng):
    # desired block orthonormal and orthogonal to the interference span;
    # skewed interference columns hurt CN but not OCN
    Q, _ = np.linalg.qr(crandn(rng, 6, 6))
    skew = Q[:, 3:] @ np.array([[1, 0.99, 0], [0, 0.1, 0.5], [0, 0, 0.8]])
    A = normalize_columns(np.column_stack([Q[:, :3], skew]))
    assert linalg.cond_number(A) > 5
    assert np.isclose(ocn(A, 3), 1.0)


def test_snr_and_rate():
    assert stream_snr(np.array([1, 0]), np.eye(2), np.array([0.6, 0.8]), 10) == pytest.approx(3.6)
    assert sum_rate([0, 1, 3]) == pytest.approx(0 + 1 + 2)


def test_signal_space_layout(ch3):
    scheme = build_schemes(3, 'first')[0]
    bset = BeamformerSpace(scheme, ch3).build((1, 2, 3))
    sp = signal_space(bset, scheme, ch3, 0)
    assert sp.A.shape == (6, 6) and not sp.degenerate
    assert np.allclose(sp.A[:, 0], ch3.H[0, 0] @ bset.vectors[0, 0])
    assert np.allclose(np.linalg.norm(sp.A_bar, axis=0), 1)
    assert sp.kappa >= 1 and sp.ocn >= 1


def test_zf_separates_all_streams(ch3):
    # each decoder row sees only its own stream among all 9 received signals
    scheme = build_schemes(3, 'first')[0]
    bset = BeamformerSpace(scheme, ch3).build((0, 3, 5))
    for i in range(3):
        sp = signal_space(bset, scheme, ch3, i)
        for j in range(3):
            row = sp.zf_rows[j]
            for r in range(3):
                for t in range(3):
                    g = abs(row @ ch3.H[i, t] @ bset.vectors[r, t])
                    if (r, t) == (i, j):
                        assert g > 1e-6
                    else:
                        assert g < 1e-9


def test_batch_matches_single(ch3):
    scheme = build_schemes(3, 'first')[0]
    space = BeamformerSpace(scheme, ch3)
    choices = all_choices(3)[::23]
    A = batch_signal_spaces(space, space.vectors(choices))
    amps = batch_amplitudes(A, 3)
    kappa = batch_kappa(A)
    o = batch_ocn(A, 3)
    for n, c in enumerate(choices):
        bset = space.build(c)
        spaces = [signal_space(bset, scheme, ch3, i) for i in range(3)]
        assert np.allclose(A[n], [s.A for s in spaces])
        assert np.allclose(amps[n], stream_metrics(bset, scheme, ch3, spaces).amplitudes)
        assert np.allclose(kappa[n], [s.kappa for s in spaces])
        assert np.allclose(o[n], [s.ocn for s in spaces])


def test_batch_singular_gives_zero_gain(rng):
    A = crandn(rng, 2, 4, 4)
    A[1, :, 3] = A[1, :, 0]
    amps = batch_amplitudes(A, 2)
    kappa = batch_kappa(A)
    assert np.all(amps[0] > 0)
    assert np.isinf(kappa[1]) or kappa[1] > 1e12


def test_stream_metrics_rates(ch3):
    scheme = build_schemes(3, 'first')[0]
    m = stream_metrics(BeamformerSpace(scheme, ch3).build((0, 0, 0)), scheme, ch3)
    assert m.amplitudes.shape == (3, 3)
    assert m.sum_rate(0.0) == 0.0
    assert np.isclose(m.sum_rate(5.0), m.receiver_rates(5.0).sum())
    assert m.min_amplitude == m.amplitudes.min()

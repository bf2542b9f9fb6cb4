"""
Receiver-side quantities: signal-space matrices, zero-forcing decoders,
post-ZF stream SNRs, sum-rate and the CN / OCN orthogonality surrogates.

Column layout of the signal space at receiver ``i``: the K desired
directions ``H[i, j] v_ij`` followed by one direction per aligned
interference pair, taken from the pair's smaller member, pairs in order of
that member.

Functions with a ``batch_`` prefix work on stacks ``(N, 3, M, M)`` and are
what the selection loops use; the unprefixed ones handle a single set.
"""

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import LatinIAError
from .latin import alignment_pairs

__all__ = ['ReceiverSpaces', 'StreamMetrics', 'signal_space', 'zero_forcing',
           'stream_snr', 'stream_metrics', 'sum_rate', 'ocn',
           'normalize_columns', 'batch_signal_spaces', 'batch_amplitudes',
           'batch_kappa', 'batch_ocn']


def normalize_columns(a):
    a = np.asarray(a, dtype=complex)
    return a / np.linalg.norm(a, axis=-2, keepdims=True)


def zero_forcing(A, n_rows=None):
    """Unit-norm ZF decoder rows.

    Row ``j`` is row ``j`` of ``inv(A)`` scaled to unit norm, so it nulls
    every column of `A` except column ``j``. Returns the first `n_rows`
    rows (all by default).
    """
    A = linalg.as_matrix(A, square=True)
    inv = linalg.inverse(A)
    rows = inv if n_rows is None else inv[:n_rows]
    return rows / np.linalg.norm(rows, axis=1, keepdims=True)


def stream_snr(R, H, v, p_stream):
    """``p_stream * |R H v|**2`` for a unit-norm row `R` and unit noise."""
    return float(p_stream * abs(np.asarray(R) @ np.asarray(H) @ np.asarray(v)) ** 2)


def sum_rate(snrs):
    """Sum of ``log2(1 + snr)`` over all streams, in bits/s/Hz."""
    return float(np.sum(np.log2(1.0 + np.asarray(snrs, dtype=float))))


def ocn(A_bar, K, strict=False):
    """Condition number after orthonormalizing the interference block.

    The last `K` columns of `A_bar` are replaced by a Gram-Schmidt basis of
    their span, so only desired-versus-interference geometry counts.
    """
    A_bar = np.asarray(A_bar, dtype=complex)
    Q = linalg.gram_schmidt(A_bar[..., :, K:])
    return linalg.cond_number(np.concatenate([A_bar[..., :, :K], Q], axis=-1),
                              strict=strict)


@dataclass(frozen=True, eq=False)
class ReceiverSpaces:
    receiver: int
    A: np.ndarray
    A_bar: np.ndarray
    zf_rows: np.ndarray
    kappa: float
    ocn: float
    degenerate: bool = False


def _space_matrix(bset, scheme, ch, i):
    K = scheme.K
    V = bset.vectors
    desired = [ch.H[i, j] @ V[i, j] for j in range(K)]
    interference = [ch.H[i, p.members[0].transmitter] @ V[p.members[0]]
                    for p in alignment_pairs(scheme, i)]
    return np.column_stack(desired + interference)


def signal_space(bset, scheme, ch, i):
    """Signal-space matrix and derived decoders/metrics for receiver `i`.

    A numerically singular space is flagged ``degenerate``: its decoder
    rows are zero and both condition numbers are ``inf``.
    """
    K = scheme.K
    A = _space_matrix(bset, scheme, ch, i)
    A_bar = normalize_columns(A)
    kappa = linalg.cond_number(A_bar, strict=False)
    if not np.isfinite(kappa):
        return ReceiverSpaces(i, A, A_bar, np.zeros((K, A.shape[0]), complex),
                              np.inf, np.inf, degenerate=True)
    try:
        rows = zero_forcing(A, K)
        o = ocn(A_bar, K)
    except LatinIAError:
        return ReceiverSpaces(i, A, A_bar, np.zeros((K, A.shape[0]), complex),
                              np.inf, np.inf, degenerate=True)
    return ReceiverSpaces(i, A, A_bar, rows, kappa, o)


@dataclass(frozen=True, eq=False)
class StreamMetrics:
    """Post-ZF gains ``|R_ij H_ij v_ij|``; ``amplitudes[i, j]`` is stream s_ij."""
    amplitudes: np.ndarray

    def snr(self, p_stream):
        return p_stream * self.amplitudes ** 2

    def rates(self, p_stream):
        return np.log2(1.0 + self.snr(p_stream))

    def receiver_rates(self, p_stream):
        return self.rates(p_stream).sum(axis=1)

    def sum_rate(self, p_stream):
        return sum_rate(self.snr(p_stream))

    @property
    def min_amplitude(self):
        return float(self.amplitudes.min())


def stream_metrics(bset, scheme, ch, spaces=None):
    """Per-stream ZF gains for all 3K streams of a beamformer set."""
    K = scheme.K
    if spaces is None:
        spaces = [signal_space(bset, scheme, ch, i) for i in range(3)]
    amps = np.zeros((3, K))
    for sp in spaces:
        i = sp.receiver
        for j in range(K):
            amps[i, j] = abs(sp.zf_rows[j] @ ch.H[i, j] @ bset.vectors[i, j])
    return StreamMetrics(amps)


def batch_signal_spaces(space, V):
    """Signal-space matrices for a batch of sets.

    Parameters
    ----------
    space : BeamformerSpace
    V : ndarray, shape (N, 3, K, M)
        Beamformers from ``space.vectors``.

    Returns
    -------
    ndarray, shape (N, 3, M, M)
    """
    H = space.ch.H
    K = space.K
    A = np.empty((V.shape[0], 3, space.M, space.M), dtype=complex)
    # Stacked matmul keeps each set's numbers independent of the batch it
    # is evaluated in.
    for i in range(3):
        desired = (H[i][None] @ V[:, i, :, :, None])[..., 0]
        reps = V[:, space.rep_receivers[i], space.representatives[i]]
        interference = (H[i, space.representatives[i]][None] @ reps[..., None])[..., 0]
        A[:, i, :, :K] = desired.transpose(0, 2, 1)
        A[:, i, :, K:] = interference.transpose(0, 2, 1)
    return A


def batch_amplitudes(A, K):
    """ZF gains for stacked signal spaces ``(..., M, M)`` -> ``(..., K)``.

    Each desired stream gets its own null-space decoder: the left singular
    vector orthogonal to the other ``M - 1`` columns. That is one SVD per
    stream, 3K per beamformer set. Streams whose other columns are rank
    deficient get gain 0.
    """
    A = np.asarray(A, dtype=complex)
    amps = np.empty(A.shape[:-2] + (K,))
    for j in range(K):
        null, deficient = linalg.null_vector(np.delete(A, j, axis=-1))
        gain = np.abs(np.sum(null.conj() * A[..., :, j], axis=-1))
        amps[..., j] = np.where(deficient, 0.0, gain)
    return amps


def batch_kappa(A):
    """Condition numbers of the column-normalized stack; singular -> inf."""
    return linalg.cond_number(normalize_columns(A), strict=False)


def batch_ocn(A, K):
    """OCN of each normalized space in the stack; singular -> inf."""
    A_bar = normalize_columns(A)
    try:
        return ocn(A_bar, K)
    except LatinIAError:
        pass
    flat = A_bar.reshape((-1,) + A_bar.shape[-2:])
    out = np.empty(flat.shape[0])
    for n, a in enumerate(flat):
        try:
            out[n] = ocn(a, K)
        except LatinIAError:
            out[n] = np.inf
    return out.reshape(A_bar.shape[:-2])

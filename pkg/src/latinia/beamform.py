"""
Eigenvector-chain beamformers.

For a chain ``a -> b -> c -> a`` each link at receiver ``r`` between
beamformers of transmitters ``s`` and ``t`` is satisfied by
``v_t = inv(H[r, t]) H[r, s] v_s``. Going once around the cycle gives the
chain matrix ``E = T_ca T_bc T_ab`` and the anchor must be an eigenvector
of ``E``; the two other members follow from one-step transfer maps out of
the anchor (forward link for ``b``, reversed closing link for ``c``).

Each of the K chains offers 2K eigenvectors, so one scheme has ``(2K)**K``
beamformer sets. `BeamformerSpace` does the K eigen-decompositions once and
turns any choice tuple into a set by indexing.
"""

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import SingularChannel, SingularMatrix
from .latin import alignment_pairs, extract_chains

__all__ = ['ChainMatrix', 'BeamformerSet', 'BeamformerSpace', 'ReceiverCheck',
           'IAReport', 'chain_matrix', 'build_beamformers', 'set_count',
           'index_to_choice', 'choice_to_index', 'all_choices', 'validate_ia',
           'corrupt']


def _step(ch, receiver, source_tx, target_tx):
    """Map taking ``v_source`` to the ``v_target`` aligned with it."""
    try:
        inv = linalg.inverse(ch.H[receiver, target_tx])
    except SingularMatrix as exc:
        raise SingularChannel(
            f"H{receiver + 1}{target_tx + 1} is singular") from exc
    return inv @ ch.H[receiver, source_tx]


@dataclass(frozen=True, eq=False)
class ChainMatrix:
    chain: object
    E: np.ndarray
    transfer_maps: dict

    def propagate(self, anchor_vector):
        """Member vectors (anchor first, unnormalized) from an anchor vector."""
        out = {self.chain.anchor: np.asarray(anchor_vector)}
        for member, T in self.transfer_maps.items():
            out[member] = T @ anchor_vector
        return out


def chain_matrix(chain, ch):
    """Compose the cycle matrix and the two transfer maps of a chain."""
    forward = [_step(ch, s.receiver, s.source.transmitter, s.target.transmitter)
               for s in chain.steps]
    E = forward[2] @ forward[1] @ forward[0]
    close = chain.steps[2]
    transfer = {
        chain.members[1]: forward[0],
        chain.members[2]: _step(ch, close.receiver, close.target.transmitter,
                                close.source.transmitter),
    }
    return ChainMatrix(chain, E, transfer)


def set_count(K):
    return (2 * K) ** K


def index_to_choice(index, K):
    """Mixed-radix digits of `index` in base 2K, first chain most significant."""
    base = 2 * K
    if not 0 <= index < base ** K:
        raise IndexError(f"set index {index} out of range for K={K}")
    digits = []
    for _ in range(K):
        index, d = divmod(index, base)
        digits.append(d)
    return tuple(reversed(digits))


def choice_to_index(choice, K):
    base = 2 * K
    if len(choice) != K or any(not 0 <= c < base for c in choice):
        raise IndexError(f"invalid choice {choice} for K={K}")
    index = 0
    for c in choice:
        index = index * base + int(c)
    return index


def all_choices(K):
    """``(set_count(K), K)`` array of choices in index order."""
    base = 2 * K
    idx = np.arange(base ** K)
    powers = base ** np.arange(K - 1, -1, -1)
    return (idx[:, None] // powers) % base


@dataclass(frozen=True, eq=False)
class BeamformerSet:
    """3K unit-norm beamformers; ``vectors[i, j]`` is ``v_ij``."""
    scheme: object
    choice: tuple
    vectors: np.ndarray

    @property
    def index(self):
        return choice_to_index(self.choice, len(self.choice))

    def v(self, bf):
        return self.vectors[bf.receiver, bf.transmitter]


class BeamformerSpace:
    """All ``(2K)**K`` beamformer sets of one scheme on one channel.

    Parameters
    ----------
    scheme : AlignmentScheme
    ch : ChannelRealization
    tol : float
        Eigen residual tolerance passed to `linalg.eig_arrays`.
    """

    def __init__(self, scheme, ch, tol=linalg.DEFAULT_TOL):
        if scheme.K != ch.K:
            raise ValueError("scheme and channel disagree on K")
        self.scheme = scheme
        self.ch = ch
        self.K = K = scheme.K
        self.M = M = 2 * K
        self.chains = extract_chains(scheme)
        self.chain_matrices = [chain_matrix(c, ch) for c in self.chains]

        # basis[c, p, e] is member p (receiver column p) of chain c built
        # from eigenvector e of that chain's matrix.
        self.eigenvalues = np.empty((K, M), dtype=complex)
        basis = np.empty((K, 3, M, M), dtype=complex)
        for c, cm in enumerate(self.chain_matrices):
            values, vecs = linalg.eig_arrays(cm.E, tol)
            self.eigenvalues[c] = values
            basis[c, 0] = vecs.T
            for p in (1, 2):
                w = cm.transfer_maps[cm.chain.members[p]] @ vecs
                basis[c, p] = (w / np.linalg.norm(w, axis=0)).T
        self.basis = basis

        chain_of = np.empty((3, K), dtype=int)
        for c, chain in enumerate(self.chains):
            for m in chain.members:
                chain_of[m.receiver, m.transmitter] = c
        self.chain_of = chain_of

        # Representative of aligned pair k at receiver i: its smaller member.
        self.representatives = np.array(
            [[p.members[0].transmitter for p in alignment_pairs(scheme, i)]
             for i in range(3)])
        self.rep_receivers = np.array(
            [[p.members[0].receiver for p in alignment_pairs(scheme, i)]
             for i in range(3)])

    @property
    def size(self):
        return set_count(self.K)

    def vectors(self, choices):
        """Beamformers for a batch of choices, shape ``(N, 3, K, M)``."""
        choices = np.atleast_2d(np.asarray(choices, dtype=int))
        if choices.shape[1] != self.K or choices.min() < 0 or choices.max() >= self.M:
            raise IndexError("choice digits must lie in [0, 2K)")
        rows = np.arange(3)[:, None]
        eig_idx = choices[:, self.chain_of]
        return self.basis[self.chain_of[None], rows[None], eig_idx]

    def build(self, choice):
        choice = tuple(int(c) for c in choice)
        return BeamformerSet(self.scheme, choice, self.vectors([choice])[0])

    def build_index(self, index):
        return self.build(index_to_choice(index, self.K))


def build_beamformers(scheme, ch, choice):
    """One beamformer set; see `BeamformerSpace` for repeated use."""
    return BeamformerSpace(scheme, ch).build(choice)


@dataclass
class ReceiverCheck:
    receiver: int
    max_pair_residual: float
    min_direction_sine: float
    interference_rank: int
    full_rank: int


@dataclass
class IAReport:
    K: int
    receivers: list = field(default_factory=list)
    tol: float = 1e-8
    angle_tol: float = 1e-4

    @property
    def max_pair_residual(self):
        return max(r.max_pair_residual for r in self.receivers)

    @property
    def passed(self):
        return all(r.max_pair_residual < self.tol
                   and r.min_direction_sine > self.angle_tol
                   and r.interference_rank == self.K
                   and r.full_rank == 2 * self.K
                   for r in self.receivers)

    def csv_rows(self):
        """``receiver,max_pair_residual,interference_rank,full_rank`` rows."""
        return [f"{r.receiver + 1},{r.max_pair_residual:.6e},"
                f"{r.interference_rank},{r.full_rank}" for r in self.receivers]


def validate_ia(bset, scheme, ch, tol=1e-8, rank_tol=1e-6, full_rank_tol=1e-10,
                angle_tol=1e-4):
    """Check the three alignment requirements for one beamformer set.

    Per receiver: the largest sine between aligned interference pairs, the
    smallest sine between the K aligned directions, the numerical rank of
    all 2K interference signals (should be K) and of the signal space
    ``[desired | one per aligned pair]`` (should be 2K). Ranks are taken on
    unit-normalized columns.
    """
    K = scheme.K
    V = bset.vectors
    H = ch.H
    report = IAReport(K, tol=tol, angle_tol=angle_tol)
    for i in range(3):
        pairs = alignment_pairs(scheme, i)
        residual = 0.0
        directions = []
        for pair in pairs:
            a, b = pair.members
            ua = H[i, a.transmitter] @ V[a]
            ub = H[i, b.transmitter] @ V[b]
            residual = max(residual, linalg.collinearity_residual(ua, ub))
            directions.append(ua)
        min_sine = min((linalg.collinearity_residual(directions[p], directions[q])
                        for p in range(K) for q in range(p + 1, K)), default=1.0)

        interference = np.column_stack(
            [H[i, j] @ V[k, j] for k in range(3) if k != i for j in range(K)])
        desired = np.column_stack([H[i, j] @ V[i, j] for j in range(K)])
        A = np.column_stack([desired] + directions)
        report.receivers.append(ReceiverCheck(
            i, residual, min_sine,
            linalg.numerical_rank(_unit_columns(interference), rank_tol),
            linalg.numerical_rank(_unit_columns(A), full_rank_tol)))
    return report


def _unit_columns(a):
    return a / np.linalg.norm(a, axis=0)


def corrupt(bset, bf, rng):
    """Copy of `bset` with beamformer `bf` replaced by a random unit vector."""
    vectors = bset.vectors.copy()
    w = rng.standard_normal(vectors.shape[-1]) + 1j * rng.standard_normal(vectors.shape[-1])
    vectors[bf.receiver, bf.transmitter] = w / np.linalg.norm(w)
    return BeamformerSet(bset.scheme, bset.choice, vectors)


"""
Seeded i.i.d. flat-Rayleigh channels for the K x 3 X network.

Every random quantity is drawn from its own stream keyed by
``(seed, draw_index, purpose)`` through ``numpy.random.SeedSequence``, so a
channel draw (or the noise for that draw) can be regenerated in any order,
in any worker process, bit for bit.
"""

from dataclasses import dataclass

import numpy as np

__all__ = ['ChannelRealization', 'draw_channel', 'stream', 'awgn',
           'complex_gaussian', 'write_channel_csv', 'read_channel_csv',
           'identity_channel']

# Stream purposes; part of the seeding contract, do not renumber.
CHANNEL = 0
NOISE = 1
SYMBOLS = 2
SELECTION = 3
CORRUPTION = 4


def stream(seed, draw_index, purpose, *subkey):
    """Independent generator for one (seed, draw, purpose, ...) key."""
    key = (int(draw_index), int(purpose)) + tuple(int(k) for k in subkey)
    ss = np.random.SeedSequence(int(seed), spawn_key=key)
    return np.random.Generator(np.random.PCG64(ss))


def complex_gaussian(rng, shape):
    """Circularly symmetric CN(0, 1) samples: real and imaginary parts have
    variance 1/2 each."""
    z = rng.standard_normal(tuple(shape) + (2,))
    return (z[..., 0] + 1j * z[..., 1]) / np.sqrt(2)


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """One fading draw; ``H[i, j]`` is the 2K x 2K channel from transmitter
    ``j`` to receiver ``i``."""
    K: int
    H: np.ndarray
    seed: int = None
    draw_index: int = None

    @property
    def M(self):
        return 2 * self.K

    def __post_init__(self):
        H = np.asarray(self.H, dtype=complex)
        M = 2 * self.K
        if H.shape != (3, self.K, M, M):
            raise ValueError(f"expected H of shape {(3, self.K, M, M)}, got {H.shape}")
        if not np.all(np.isfinite(H)):
            raise ValueError("channel has non-finite entries")
        H.setflags(write=False)
        object.__setattr__(self, 'H', H)


def draw_channel(K, seed, draw_index=0):
    """Draw all 3K channel matrices for one realization."""
    if K < 3:
        raise ValueError("K must be at least 3")
    M = 2 * K
    H = complex_gaussian(stream(seed, draw_index, CHANNEL), (3, K, M, M))
    return ChannelRealization(K, H, seed, draw_index)


def identity_channel(K):
    """Every link equal to the identity; handy for sanity checks."""
    M = 2 * K
    H = np.broadcast_to(np.eye(M, dtype=complex), (3, K, M, M)).copy()
    return ChannelRealization(K, H)


def awgn(dim, rng, n=None):
    """Unit-variance complex white Gaussian noise.

    Returns a vector of length `dim`, or a ``(dim, n)`` array of `n`
    independent noise vectors.
    """
    if int(dim) < 1:
        raise ValueError("noise dimension must be at least 1")
    shape = (int(dim),) if n is None else (int(dim), int(n))
    return complex_gaussian(rng, shape)


def write_channel_csv(ch, path):
    """Write a realization as CSV blocks.

    Each block starts with a ``# H i j`` header (1-based indices) and holds
    one line per matrix row of interleaved ``re,im`` pairs.
    """
    with open(path, 'w') as fh:
        fh.write(f"# K {ch.K} seed {ch.seed} draw {ch.draw_index}\n")
        for i in range(3):
            for j in range(ch.K):
                fh.write(f"# H {i + 1} {j + 1}\n")
                for row in ch.H[i, j]:
                    fh.write(','.join(f"{float(x.real)!r},{float(x.imag)!r}" for x in row) + '\n')


def read_channel_csv(path):
    """Inverse of `write_channel_csv`."""
    blocks = {}
    meta = {}
    current = None
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith('# H'):
                _, _, i, j = line.split()
                current = (int(i) - 1, int(j) - 1)
                blocks[current] = []
            elif line.startswith('# K'):
                parts = line[1:].split()
                meta = dict(zip(parts[::2], parts[1::2]))
            else:
                vals = [float(x) for x in line.split(',')]
                blocks[current].append(np.array(vals[0::2]) + 1j * np.array(vals[1::2]))
    K = int(meta['K']) if 'K' in meta else max(j for _, j in blocks) + 1
    M = 2 * K
    H = np.zeros((3, K, M, M), dtype=complex)
    for (i, j), rows in blocks.items():
        H[i, j] = np.array(rows)

    def maybe_int(key):
        value = meta.get(key)
        return None if value in (None, 'None') else int(value)

    return ChannelRealization(K, H, maybe_int('seed'), maybe_int('draw'))

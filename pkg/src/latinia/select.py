"""
Beamformer-set selection.

Strategies
----------
optimal
    Evaluate the true objective on every set of the scheme.
cn, ocn
    Rank every set by an aggregated condition-number surrogate (one SVD
    per receiver) and evaluate the true objective on the `u` best only.
random
    Evaluate the true objective on `u` sets drawn uniformly without
    replacement.

Both counters are measured, not estimated: they read the SVD meter in
`linalg` around each batch. The surrogate of one set takes 3 factorizations
(one per receiver) and the true objective 3K (one null space per desired
stream). ``svd_count`` tallies surrogate work and ``eval_count`` objective
work.

Ties are broken by the smallest set index everywhere.
"""

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .beamform import BeamformerSpace, index_to_choice
from .errors import BudgetExceeded
from .receiver import (batch_amplitudes, batch_kappa, batch_ocn,
                       batch_signal_spaces)

__all__ = ['Objective', 'Strategy', 'SelectionResult', 'Evaluator',
           'minmax_snr', 'select_exhaustive', 'select_cn_shortlist',
           'select_random_u', 'select_over_schemes', 'select',
           'EXHAUSTIVE_MAX_K']

EXHAUSTIVE_MAX_K = 4
CHUNK = 2048
STRATEGIES = ('optimal', 'cn', 'ocn', 'random')


def minmax_snr(amplitudes):
    """Smallest post-ZF gain ``|R H v|`` over all streams."""
    return float(np.min(amplitudes))


@dataclass(frozen=True)
class Objective:
    """What a selection maximizes.

    ``kind='minmax'`` maximizes the weakest stream gain; ``kind='sumrate'``
    maximizes the sum rate at per-stream power `p_stream`. `aggregate` says
    how per-receiver surrogates combine (``'max'`` or ``'sum'``) and
    defaults to max for minmax and sum for sumrate.
    """
    kind: str = 'minmax'
    p_stream: float = 1.0
    aggregate: str = None

    def __post_init__(self):
        if self.kind not in ('minmax', 'sumrate'):
            raise ValueError(f"unknown objective {self.kind!r}")
        if self.aggregate is None:
            object.__setattr__(self, 'aggregate',
                               'max' if self.kind == 'minmax' else 'sum')
        if self.aggregate not in ('max', 'sum'):
            raise ValueError(f"unknown aggregate {self.aggregate!r}")
        if self.p_stream < 0:
            raise ValueError("p_stream must be non-negative")

    def score(self, amplitudes):
        """Objective per set from gains of shape ``(N, 3, K)``."""
        amps = np.asarray(amplitudes)
        if self.kind == 'minmax':
            return amps.min(axis=(-2, -1))
        return np.log2(1.0 + self.p_stream * amps ** 2).sum(axis=(-2, -1))

    def combine(self, per_receiver):
        per_receiver = np.asarray(per_receiver)
        if self.aggregate == 'max':
            return per_receiver.max(axis=-1)
        return per_receiver.sum(axis=-1)


@dataclass(frozen=True)
class Strategy:
    name: str = 'optimal'
    u: int = None

    def __post_init__(self):
        if self.name not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.name!r}")
        if self.name != 'optimal' and (self.u is None or self.u < 1):
            raise ValueError(f"strategy {self.name!r} needs u >= 1")

    @property
    def surrogate(self):
        return self.name if self.name in ('cn', 'ocn') else 'none'

    @property
    def label(self):
        return self.name if self.name == 'optimal' else f"{self.name}{self.u}"


@dataclass
class SelectionResult:
    scheme: object
    index: int
    choice: tuple
    value: float
    strategy: str
    surrogate: str = 'none'
    u: int = None
    svd_count: int = 0
    eval_count: int = 0
    searched: int = 0
    scheme_position: int = 0
    per_scheme: list = field(default_factory=list, repr=False)

    CSV_HEADER = 'scheme,strategy,surrogate,u,chosen_index,objective,svd_count,eval_count'

    def csv_row(self):
        u = '' if self.u is None else self.u
        return (f"{self.scheme.label},{self.strategy},{self.surrogate},{u},"
                f"{self.index},{self.value:.10g},{self.svd_count},{self.eval_count}")


class Evaluator:
    """Metered access to true objectives and surrogates of one scheme.

    Each call recomputes what it is asked for and charges the counters, so
    the counts reflect the work a selection strategy actually requests.
    """

    def __init__(self, space, chunk=CHUNK):
        self.space = space
        self.chunk = chunk
        self.svd_count = 0
        self.eval_count = 0

    @property
    def size(self):
        return self.space.size

    def _spaces(self, indices):
        K = self.space.K
        base = 2 * K
        powers = base ** np.arange(K - 1, -1, -1)
        for start in range(0, len(indices), self.chunk):
            idx = indices[start:start + self.chunk]
            choices = (idx[:, None] // powers) % base
            V = self.space.vectors(choices)
            yield batch_signal_spaces(self.space, V)

    def amplitudes(self, indices):
        """ZF gains ``(n, 3, K)`` for the given set indices."""
        indices = np.asarray(indices, dtype=int)
        K = self.space.K
        start = linalg.METER.count
        parts = [batch_amplitudes(A, K) for A in self._spaces(indices)]
        self.eval_count += linalg.METER.count - start
        return np.concatenate(parts) if parts else np.zeros((0, 3, K))

    def objective(self, objective, indices):
        return objective.score(self.amplitudes(indices))

    def surrogate(self, kind, indices):
        """Per-receiver surrogate ``(n, 3)``; `kind` is ``'cn'`` or ``'ocn'``."""
        indices = np.asarray(indices, dtype=int)
        K = self.space.K
        if kind not in ('cn', 'ocn'):
            raise ValueError(f"unknown surrogate {kind!r}")
        start = linalg.METER.count
        if kind == 'cn':
            parts = [batch_kappa(A) for A in self._spaces(indices)]
        else:
            parts = [batch_ocn(A, K) for A in self._spaces(indices)]
        self.svd_count += linalg.METER.count - start
        return np.concatenate(parts) if parts else np.zeros((0, 3))


def _best(indices, values):
    """Largest value; ties go to the smallest index."""
    indices = np.asarray(indices)
    values = np.asarray(values)
    best = values.max()
    return int(indices[values == best].min()), float(best)


def _space_for(scheme, ch, space):
    return space if space is not None else BeamformerSpace(scheme, ch)


def select_exhaustive(objective, scheme, ch, space=None, force=False):
    """Evaluate `objective` on every set of the scheme.

    Raises
    ------
    BudgetExceeded
        For K > 4 unless `force` is set.
    """
    if scheme.K > EXHAUSTIVE_MAX_K and not force:
        raise BudgetExceeded(
            f"exhaustive search over {(2 * scheme.K) ** scheme.K} sets refused "
            f"for K={scheme.K}; pass force=True")
    ev = Evaluator(_space_for(scheme, ch, space))
    indices = np.arange(ev.size)
    index, value = _best(indices, ev.objective(objective, indices))
    return SelectionResult(scheme, index, index_to_choice(index, scheme.K), value,
                           'optimal', 'none', None, ev.svd_count, ev.eval_count,
                           ev.size)


def select_cn_shortlist(objective, surrogate, u, scheme, ch, space=None):
    """Shortlist the `u` sets with the smallest aggregated surrogate, then
    pick the best of them by the true objective."""
    ev = Evaluator(_space_for(scheme, ch, space))
    if not 1 <= u <= ev.size:
        raise ValueError(f"u must lie in [1, {ev.size}]")
    indices = np.arange(ev.size)
    score = objective.combine(ev.surrogate(surrogate, indices))
    shortlist = np.sort(np.argsort(score, kind='stable')[:u])
    index, value = _best(shortlist, ev.objective(objective, shortlist))
    return SelectionResult(scheme, index, index_to_choice(index, scheme.K), value,
                           surrogate, surrogate, u, ev.svd_count, ev.eval_count,
                           ev.size)


def select_random_u(objective, u, scheme, ch, rng, space=None):
    """Best of `u` distinct sets drawn uniformly with generator `rng`."""
    ev = Evaluator(_space_for(scheme, ch, space))
    if not 1 <= u <= ev.size:
        raise ValueError(f"u must lie in [1, {ev.size}]")
    sample = np.sort(rng.choice(ev.size, size=u, replace=False))
    index, value = _best(sample, ev.objective(objective, sample))
    return SelectionResult(scheme, index, index_to_choice(index, scheme.K), value,
                           'random', 'none', u, ev.svd_count, ev.eval_count,
                           ev.size)


def select(objective, strategy, scheme, ch, rng=None, space=None, force=False):
    """Dispatch a `Strategy` on one scheme."""
    if strategy.name == 'optimal':
        return select_exhaustive(objective, scheme, ch, space, force)
    if strategy.name in ('cn', 'ocn'):
        return select_cn_shortlist(objective, strategy.name, strategy.u, scheme,
                                   ch, space)
    if rng is None:
        raise ValueError("random selection needs a generator")
    return select_random_u(objective, strategy.u, scheme, ch, rng, space)


def select_over_schemes(objective, strategy, schemes, ch, rng=None, spaces=None,
                        force=False):
    """Run `strategy` inside each scheme and keep the overall best.

    Ties between schemes go to the earlier scheme. Counters and the
    searched size add up across schemes.
    """
    if not schemes:
        raise ValueError("need at least one scheme")
    if spaces is None:
        spaces = [None] * len(schemes)
    results = [select(objective, strategy, s, ch, rng, sp, force)
               for s, sp in zip(schemes, spaces)]
    pos = max(range(len(results)), key=lambda p: (results[p].value, -p))
    best = results[pos]
    return SelectionResult(
        best.scheme, best.index, best.choice, best.value, best.strategy,
        best.surrogate, best.u,
        sum(r.svd_count for r in results), sum(r.eval_count for r in results),
        sum(r.searched for r in results), pos, results)

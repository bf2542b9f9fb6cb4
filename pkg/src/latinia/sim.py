"""
Monte-Carlo experiments: SER and sum-rate sweeps, surrogate/objective
correlation, and bulk validation of the alignment construction.

Conventions
-----------
* SNR axis: ``snr_db = 10 log10(P)``, where P is the total transmit power
  of each transmitter and the receiver noise has unit variance per antenna.
* Each transmitter splits P equally over its three streams (P/3 each).
* Symbols are Gray-mapped unit-energy QPSK.
* Beamformers are selected per channel draw from noiseless CSI, before any
  symbol is sent. MinMax selection does not depend on P; sum-rate
  selection is redone at every SNR point.

Every draw uses streams keyed by ``(seed, draw_index, purpose)`` and
results are reduced in draw order, so the output does not depend on the
number of worker processes.
"""

import concurrent.futures
import functools
import json
import logging
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.stats

from . import channel
from .beamform import BeamformerSpace, corrupt, set_count, validate_ia
from .errors import ConfigError
from .latin import BeamformerId, build_schemes
from .receiver import signal_space
from .select import Evaluator, Objective, Strategy, select_over_schemes

__all__ = ['SimConfig', 'SerPoint', 'SumRatePoint', 'CorrelationRecord',
           'CorrelationResult', 'ValidationSummary', 'run_ser', 'run_sumrate',
           'run_correlation', 'correlation_records', 'run_validate',
           'qpsk_modulate', 'qpsk_detect', 'SER_HEADER', 'SUMRATE_HEADER',
           'CORRELATE_HEADER', 'write_csv']

log = logging.getLogger(__name__)

SER_HEADER = 'snr_db,strategy,objective,surrogate,u,schemes,errors,symbols,ser'
SUMRATE_HEADER = 'snr_db,strategy,objective,surrogate,u,schemes,mean_sum_rate,draws'
CORRELATE_HEADER = 'rank,true_metric_desc,surrogate_ordered_true,surrogate_value'

# Gray mapping: bit 0 sets the real sign, bit 1 the imaginary sign.
QPSK = np.array([1 + 1j, -1 + 1j, 1 - 1j, -1 - 1j]) / np.sqrt(2)


def qpsk_modulate(indices):
    return QPSK[np.asarray(indices)]


def qpsk_detect(samples):
    samples = np.asarray(samples)
    return (samples.real < 0).astype(int) + 2 * (samples.imag < 0).astype(int)


@dataclass
class SimConfig:
    K: int = 3
    seed: int = 1
    snr_start: float = 0.0
    snr_stop: float = 30.0
    snr_step: float = 5.0
    trials: int = 100
    symbols: int = 1000
    modulation: str = 'qpsk'
    strategies: tuple = (Strategy('optimal'),)
    objective: str = 'minmax'
    schemes: object = 'first'
    noise: bool = True
    force_exhaustive: bool = False
    workers: int = 1

    def __post_init__(self):
        self.strategies = tuple(self.strategies)
        self.validate()

    def validate(self):
        if self.K < 3:
            raise ConfigError("K must be at least 3")
        if self.snr_step <= 0:
            raise ConfigError("snr step must be positive")
        if self.snr_stop < self.snr_start:
            raise ConfigError("snr stop must not be below snr start")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if self.symbols < 1:
            raise ConfigError("symbols must be at least 1")
        if self.modulation != 'qpsk':
            raise ConfigError("only qpsk modulation is supported")
        if self.objective not in ('minmax', 'sumrate'):
            raise ConfigError(f"unknown objective {self.objective!r}")
        if not self.strategies:
            raise ConfigError("at least one strategy is required")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        scope = self.schemes
        if scope not in ('first', 'all'):
            try:
                if int(scope) < 1:
                    raise ValueError
            except (TypeError, ValueError):
                raise ConfigError(f"invalid scheme scope {scope!r}") from None
        size = set_count(self.K)
        for s in self.strategies:
            if s.u is not None and s.u > size:
                raise ConfigError(f"u={s.u} exceeds the {size} sets per scheme")
            if s.name == 'optimal' and self.K > 4 and not self.force_exhaustive:
                raise ConfigError("exhaustive search for K > 4 needs force_exhaustive")

    def snr_grid(self):
        n = int(np.floor((self.snr_stop - self.snr_start) / self.snr_step + 1e-9)) + 1
        return self.snr_start + self.snr_step * np.arange(n)

    def canonical(self):
        d = asdict(self)
        d['strategies'] = [s.label for s in self.strategies]
        d.pop('workers')
        return json.dumps(d, sort_keys=True, separators=(',', ':'))


@dataclass
class SerPoint:
    snr_db: float
    strategy: str
    objective: str
    surrogate: str
    u: object
    schemes: str
    errors: int
    symbols: int

    @property
    def ser(self):
        return self.errors / self.symbols if self.symbols else 0.0

    def csv_row(self):
        u = '' if self.u is None else self.u
        return (f"{self.snr_db:g},{self.strategy},{self.objective},{self.surrogate},"
                f"{u},{self.schemes},{self.errors},{self.symbols},{self.ser:.6e}")


@dataclass
class SumRatePoint:
    snr_db: float
    strategy: str
    objective: str
    surrogate: str
    u: object
    schemes: str
    mean_sum_rate: float
    draws: int

    def csv_row(self):
        u = '' if self.u is None else self.u
        return (f"{self.snr_db:g},{self.strategy},{self.objective},{self.surrogate},"
                f"{u},{self.schemes},{self.mean_sum_rate:.6f},{self.draws}")


def _map_draws(fn, cfg, draws):
    if cfg.workers == 1:
        return [fn(cfg, d) for d in draws]
    with concurrent.futures.ProcessPoolExecutor(cfg.workers) as pool:
        return list(pool.map(functools.partial(fn, cfg), draws))


def _objective(cfg, p_stream=1.0):
    return Objective(cfg.objective, p_stream)


def _select_all(cfg, ch, schemes, spaces, p_stream):
    results = []
    for pos, strategy in enumerate(cfg.strategies):
        rng = channel.stream(cfg.seed, ch.draw_index, channel.SELECTION, pos)
        results.append(select_over_schemes(_objective(cfg, p_stream), strategy,
                                           schemes, ch, rng, spaces,
                                           cfg.force_exhaustive))
    return results


def _decoders(result, spaces, ch):
    """Chosen beamformer set and its per-receiver signal spaces."""
    bset = spaces[result.scheme_position].build(result.choice)
    return bset, [signal_space(bset, result.scheme, ch, i) for i in range(3)]


def _transmit(bset, spaces, ch, symbols, noise, p_stream):
    """Symbol errors per stream, shape (3, K), for one block of symbols."""
    K = ch.K
    V = bset.vectors
    amp = np.sqrt(p_stream)
    tx = np.einsum('ijm,ijn->jmn', V, qpsk_modulate(symbols)) * amp  # (K, M, n)
    errors = np.zeros((3, K), dtype=int)
    for i in range(3):
        y = np.einsum('jab,jbn->an', ch.H[i], tx) + noise[i]
        sp = spaces[i]
        if sp.degenerate:
            log.warning("degenerate signal space at receiver %d, draw %s",
                        i + 1, ch.draw_index)
            errors[i] = symbols.shape[-1]
            continue
        for j in range(K):
            gain = sp.zf_rows[j] @ ch.H[i, j] @ V[i, j] * amp
            detected = qpsk_detect(sp.zf_rows[j] @ y / gain)
            errors[i, j] = np.count_nonzero(detected != symbols[i, j])
    return errors


def _ser_draw(cfg, draw):
    ch = channel.draw_channel(cfg.K, cfg.seed, draw)
    schemes = build_schemes(cfg.K, cfg.schemes)
    spaces = [BeamformerSpace(s, ch) for s in schemes]
    M = 2 * cfg.K
    n = cfg.symbols
    symbols = channel.stream(cfg.seed, draw, channel.SYMBOLS).integers(0, 4, (3, cfg.K, n))
    if cfg.noise:
        noise = channel.complex_gaussian(channel.stream(cfg.seed, draw, channel.NOISE),
                                         (3, M, n))
    else:
        noise = np.zeros((3, M, n), dtype=complex)

    grid = cfg.snr_grid()
    errors = np.zeros((len(cfg.strategies), len(grid)), dtype=np.int64)
    fixed = None
    if cfg.objective == 'minmax':
        fixed = [_decoders(r, spaces, ch)
                 for r in _select_all(cfg, ch, schemes, spaces, 1.0)]
    for g, snr_db in enumerate(grid):
        p_stream = 10 ** (snr_db / 10) / 3
        chosen = fixed or [_decoders(r, spaces, ch) for r in
                           _select_all(cfg, ch, schemes, spaces, p_stream)]
        for s, (bset, sp) in enumerate(chosen):
            errors[s, g] = _transmit(bset, sp, ch, symbols, noise, p_stream).sum()
    return errors


def _scope_label(cfg):
    return str(cfg.schemes)


def run_ser(cfg):
    """Symbol error rate per (SNR point, strategy), summed over all draws."""
    per_draw = _map_draws(_ser_draw, cfg, range(cfg.trials))
    errors = np.sum(per_draw, axis=0)
    sent = cfg.trials * 3 * cfg.K * cfg.symbols
    points = []
    for g, snr_db in enumerate(cfg.snr_grid()):
        for s, strategy in enumerate(cfg.strategies):
            points.append(SerPoint(float(snr_db), strategy.label, cfg.objective,
                                   strategy.surrogate, strategy.u, _scope_label(cfg),
                                   int(errors[s, g]), sent))
    return points


def _sumrate_draw(cfg, draw):
    ch = channel.draw_channel(cfg.K, cfg.seed, draw)
    schemes = build_schemes(cfg.K, cfg.schemes)
    spaces = [BeamformerSpace(s, ch) for s in schemes]
    grid = cfg.snr_grid()
    rates = np.zeros((len(cfg.strategies), len(grid)))
    for g, snr_db in enumerate(grid):
        p_stream = 10 ** (snr_db / 10) / 3
        for s, result in enumerate(_select_all(cfg, ch, schemes, spaces, p_stream)):
            if cfg.objective == 'sumrate':
                rates[s, g] = result.value
            else:
                space = spaces[result.scheme_position]
                amps = Evaluator(space).amplitudes([result.index])
                rates[s, g] = Objective('sumrate', p_stream).score(amps)[0]
    return rates


def run_sumrate(cfg):
    """Mean sum rate of the selected set per (SNR point, strategy)."""
    per_draw = _map_draws(_sumrate_draw, cfg, range(cfg.trials))
    mean = np.mean(per_draw, axis=0)
    points = []
    for g, snr_db in enumerate(cfg.snr_grid()):
        for s, strategy in enumerate(cfg.strategies):
            points.append(SumRatePoint(float(snr_db), strategy.label, cfg.objective,
                                       strategy.surrogate, strategy.u,
                                       _scope_label(cfg), float(mean[s, g]),
                                       cfg.trials))
    return points


@dataclass
class CorrelationRecord:
    rank: int
    true_metric_desc: float
    surrogate_ordered_true: float
    surrogate_value: float

    def csv_row(self):
        return (f"{self.rank},{self.true_metric_desc:.10g},"
                f"{self.surrogate_ordered_true:.10g},{self.surrogate_value:.10g}")


@dataclass
class CorrelationResult:
    records: list
    spearman: float
    draw_index: int = 0
    surrogate: str = 'cn'


def correlation_records(true_metric, surrogate):
    """Compare the best-first true ordering with the surrogate ordering.

    `true_metric` is larger-is-better and `surrogate` smaller-is-better.
    Returns the per-rank records and the Spearman correlation between the
    two orderings; a constant surrogate carries no ordering and gives 0.
    """
    true_metric = np.asarray(true_metric, dtype=float)
    surrogate = np.asarray(surrogate, dtype=float)
    desc = np.sort(true_metric)[::-1]
    order = np.argsort(surrogate, kind='stable')
    records = [CorrelationRecord(r + 1, float(desc[r]), float(true_metric[k]),
                                 float(surrogate[k]))
               for r, k in enumerate(order)]
    finite = np.isfinite(surrogate)
    if np.ptp(surrogate[finite]) == 0 or np.ptp(true_metric) == 0:
        rho = 0.0
    else:
        # Infinite surrogates (singular spaces) rank last.
        ranked = scipy.stats.rankdata(np.where(finite, surrogate, np.inf))
        rho = float(scipy.stats.spearmanr(-ranked, true_metric).statistic)
    return records, rho


def run_correlation(cfg, objective='minmax', surrogate='cn', draw_index=0):
    """Surrogate-versus-truth ordering over every set of the first scheme.

    For the MinMax objective the true metric is the weakest stream's
    ``|R H v|**2``; for sum rate it is the sum rate at the first SNR point.
    """
    ch = channel.draw_channel(cfg.K, cfg.seed, draw_index)
    scheme = build_schemes(cfg.K, 'first')[0]
    ev = Evaluator(BeamformerSpace(scheme, ch))
    indices = np.arange(ev.size)
    p_stream = 10 ** (cfg.snr_start / 10) / 3
    obj = Objective(objective, p_stream)
    true = obj.score(ev.amplitudes(indices))
    if objective == 'minmax':
        true = true ** 2
    score = obj.combine(ev.surrogate(surrogate, indices))
    records, rho = correlation_records(true, score)
    return CorrelationResult(records, rho, draw_index, surrogate)


@dataclass
class ValidationSummary:
    checked: int = 0
    failures: int = 0
    max_pair_residual: float = 0.0
    min_direction_sine: float = 1.0
    corrupted: bool = False
    failed_sets: list = field(default_factory=list)

    @property
    def ok(self):
        return self.failures == 0

    def merge(self, other):
        self.checked += other.checked
        self.failures += other.failures
        self.max_pair_residual = max(self.max_pair_residual, other.max_pair_residual)
        self.min_direction_sine = min(self.min_direction_sine, other.min_direction_sine)
        self.failed_sets.extend(other.failed_sets)
        return self


def default_validation_plan(K, exhaustive=False):
    """Scheme scope and per-scheme sample size (None = all sets)."""
    if K == 3:
        return 'all', None
    if K == 4:
        return ('all', None) if exhaustive else (4, 256)
    return 'first', 1000


def _validate_draw(cfg, draw, plan=None, corrupt_mode=False):
    scope, sample = plan or default_validation_plan(cfg.K, cfg.force_exhaustive)
    ch = channel.draw_channel(cfg.K, cfg.seed, draw)
    summary = ValidationSummary(corrupted=corrupt_mode)
    rng = channel.stream(cfg.seed, draw, channel.CORRUPTION)
    for pos, scheme in enumerate(build_schemes(cfg.K, scope)):
        space = BeamformerSpace(scheme, ch)
        if sample is None or sample >= space.size:
            indices = range(space.size)
        else:
            indices = np.sort(channel.stream(cfg.seed, draw, channel.SELECTION, pos)
                              .choice(space.size, sample, replace=False))
        for index in indices:
            bset = space.build_index(int(index))
            if corrupt_mode:
                bf = BeamformerId(int(rng.integers(3)), int(rng.integers(cfg.K)))
                bset = corrupt(bset, bf, rng)
            report = validate_ia(bset, scheme, ch)
            summary.checked += 1
            summary.max_pair_residual = max(summary.max_pair_residual,
                                            report.max_pair_residual)
            summary.min_direction_sine = min(
                summary.min_direction_sine,
                min(r.min_direction_sine for r in report.receivers))
            # In corruption mode a pass is the failure: the check missed it.
            if report.passed == corrupt_mode:
                summary.failures += 1
                summary.failed_sets.append((draw, scheme.label, int(index)))
    return summary


def run_validate(cfg, plan=None, corrupt_mode=False):
    """Validate the construction over many draws and sets.

    `plan` is ``(scheme scope, sets per scheme)``; by default K=3 covers
    every set of both squares, K=4 the first 4 squares x 256 sampled sets
    (all 24 x 4096 with ``force_exhaustive``) and K>=5 1000 sampled sets
    of the first square. With `corrupt_mode` one beamformer per set is
    replaced by a random vector and every such set must be flagged.
    """
    fn = functools.partial(_validate_draw, plan=plan, corrupt_mode=corrupt_mode)
    parts = _map_draws(fn, cfg, range(cfg.trials))
    summary = ValidationSummary(corrupted=corrupt_mode)
    for part in parts:
        summary.merge(part)
    return summary


def write_csv(path, header, rows, cfg, trailer=()):
    """Write rows under the ``# config:`` provenance line and the header.

    `path` of None returns the text instead of writing it.
    """
    lines = [f"# config: {cfg.canonical()}",
             "# snr_db = 10*log10(P), P = total power per transmitter split "
             "P/3 per stream, unit noise variance, qpsk",
             header]
    lines += [r.csv_row() for r in rows]
    lines += list(trailer)
    text = '\n'.join(lines) + '\n'
    if path is None:
        return text
    with open(path, 'w') as fh:
        fh.write(text)
    return text

import numpy as np
import pytest

from latinia import sim
from latinia.errors import ConfigError
from latinia.select import Strategy
from latinia.sim import SimConfig


def test_qpsk_gray_and_unit_energy():
    pts = sim.QPSK
    assert np.isclose(np.mean(np.abs(pts) ** 2), 1.0)
    assert np.array_equal(sim.qpsk_detect(sim.qpsk_modulate(np.arange(4))), np.arange(4))
    # neighbours along each axis differ in one bit
    for a in range(4):
        for b in range(4):
            d = abs(pts[a] - pts[b])
            if np.isclose(d, np.sqrt(2)):
                assert bin(a ^ b).count('1') == 1


@pytest.mark.parametrize('kwargs', [
    dict(K=2), dict(snr_step=0), dict(trials=0), dict(symbols=0),
    dict(objective='x'), dict(schemes='some'), dict(modulation='16qam'),
    dict(strategies=(Strategy('cn', 300),)),
    dict(K=5),  # optimal strategy without force
])
def test_config_errors(kwargs):
    with pytest.raises(ConfigError):
        SimConfig(**kwargs)


def test_snr_grid():
    assert list(SimConfig(snr_start=0, snr_stop=30, snr_step=10).snr_grid()) == [0, 10, 20, 30]
    assert list(SimConfig(snr_start=5, snr_stop=5).snr_grid()) == [5]


def test_ser_noise_free_is_zero():
    cfg = SimConfig(K=3, trials=2, symbols=500, snr_start=0, snr_stop=10,
                    snr_step=10, noise=False,
                    strategies=(Strategy('optimal'), Strategy('random', 1)))
    points = sim.run_ser(cfg)
    assert len(points) == 4
    assert all(p.errors == 0 for p in points)


def test_ser_decreases_with_snr():
    cfg = SimConfig(K=3, trials=5, symbols=300, snr_start=0, snr_stop=20, snr_step=10)
    sers = [p.ser for p in sim.run_ser(cfg)]
    assert sers[0] > sers[1] >= sers[2]
    assert all(0 <= s <= 1 for s in sers)


def test_ser_deterministic_and_worker_independent():
    kw = dict(K=3, trials=3, symbols=200, snr_start=10, snr_stop=10,
              strategies=(Strategy('cn', 3), Strategy('random', 2)))
    a = sim.run_ser(SimConfig(**kw))
    b = sim.run_ser(SimConfig(**kw, workers=2))
    assert [p.errors for p in a] == [p.errors for p in b]


def test_full_shortlist_same_ser_as_optimal():
    cfg = SimConfig(K=3, trials=3, symbols=300, snr_start=5, snr_stop=15,
                    strategies=(Strategy('optimal'), Strategy('cn', 216)))
    pts = sim.run_ser(cfg)
    for g in range(0, len(pts), 2):
        assert pts[g].errors == pts[g + 1].errors


def test_sumrate_zero_power_and_full_shortlist():
    cfg = SimConfig(K=3, trials=3, objective='sumrate', snr_start=-400, snr_stop=-400,
                    strategies=(Strategy('optimal'),))
    assert sim.run_sumrate(cfg)[0].mean_sum_rate < 1e-30
    cfg = SimConfig(K=3, trials=3, objective='sumrate', snr_start=0, snr_stop=20,
                    snr_step=20, strategies=(Strategy('optimal'), Strategy('cn', 216),
                                             Strategy('cn', 1)))
    pts = sim.run_sumrate(cfg)
    for g in range(0, len(pts), 3):
        assert pts[g].mean_sum_rate == pts[g + 1].mean_sum_rate >= pts[g + 2].mean_sum_rate


def test_sumrate_with_minmax_selection():
    cfg = SimConfig(K=3, trials=2, snr_start=10, snr_stop=10)
    assert sim.run_sumrate(cfg)[0].mean_sum_rate > 0


def test_energy_per_transmitter():
    # three unit-norm beamformers at P/3 each: average energy P per symbol
    from latinia.beamform import BeamformerSpace
    from latinia.channel import SYMBOLS, draw_channel, stream
    from latinia.latin import build_schemes
    ch = draw_channel(3, 1, 0)
    V = BeamformerSpace(build_schemes(3, 'first')[0], ch).build((0, 1, 2)).vectors
    P = 10.0
    sym = stream(1, 0, SYMBOLS).integers(0, 4, (3, 3, 20000))
    tx = np.einsum('ijm,ijn->jmn', V, sim.qpsk_modulate(sym)) * np.sqrt(P / 3)
    energy = np.mean(np.sum(np.abs(tx) ** 2, axis=1), axis=1)
    assert np.allclose(energy, P, rtol=0.02)


def test_correlation_harness_self_checks():
    true = np.random.default_rng(0).random(50)
    recs, rho = sim.correlation_records(true, -true)
    assert rho == pytest.approx(1.0)
    assert sorted(r.rank for r in recs) == list(range(1, 51))
    assert [r.surrogate_ordered_true for r in recs] == [r.true_metric_desc for r in recs]
    _, rho = sim.correlation_records(true, np.ones(50))
    assert rho == 0.0


def test_run_correlation_records():
    res = sim.run_correlation(SimConfig(K=3), 'minmax', 'ocn', draw_index=2)
    assert len(res.records) == 216
    assert -1 <= res.spearman <= 1
    desc = [r.true_metric_desc for r in res.records]
    assert desc == sorted(desc, reverse=True)


def test_validate_and_corruption():
    cfg = SimConfig(K=3, trials=2)
    summary = sim.run_validate(cfg)
    assert summary.ok and summary.checked == 2 * 432
    assert summary.max_pair_residual < 1e-8
    bad = sim.run_validate(cfg, corrupt_mode=True)
    assert bad.ok and bad.checked == 2 * 432  # every corruption caught


def test_validation_plan():
    assert sim.default_validation_plan(3) == ('all', None)
    assert sim.default_validation_plan(4) == (4, 256)
    assert sim.default_validation_plan(4, True) == ('all', None)
    assert sim.default_validation_plan(5) == ('first', 1000)


def test_csv_layout(tmp_path):
    cfg = SimConfig(K=3, trials=1, symbols=10, snr_start=0, snr_stop=0)
    path = tmp_path / 'o.csv'
    sim.write_csv(path, sim.SER_HEADER, sim.run_ser(cfg), cfg)
    lines = path.read_text().splitlines()
    assert lines[0].startswith('# config: {')
    assert lines[2] == sim.SER_HEADER
    assert len(lines[3].split(',')) == len(sim.SER_HEADER.split(','))


def test_ser_ordering_optimal_vs_random():
    cfg = SimConfig(K=3, seed=8, trials=200, symbols=1000, snr_start=10, snr_stop=30,
                    snr_step=10, strategies=(Strategy('optimal'), Strategy('random', 1)))
    pts = sim.run_ser(cfg)
    for g in range(0, len(pts), 2):
        assert pts[g].ser <= pts[g + 1].ser


def test_sumrate_ordering():
    cfg = SimConfig(K=3, seed=8, trials=200, objective='sumrate', snr_start=10,
                    snr_stop=30, snr_step=10,
                    strategies=(Strategy('optimal'), Strategy('cn', 1), Strategy('random', 1)))
    pts = sim.run_sumrate(cfg)
    for g in range(0, len(pts), 3):
        opt, cn1, rnd1 = (p.mean_sum_rate for p in pts[g:g + 3])
        assert opt >= cn1 >= rnd1

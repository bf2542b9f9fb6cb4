import numpy as np
import pytest
import scipy.stats

from latinia.channel import (NOISE, ChannelRealization, awgn, draw_channel,
                             identity_channel, read_channel_csv, stream,
                             write_channel_csv)


def test_shape_and_readonly():
    ch = draw_channel(4, seed=3)
    assert ch.H.shape == (3, 4, 8, 8) and ch.M == 8
    with pytest.raises(ValueError):
        ch.H[0, 0, 0, 0] = 1


def test_determinism_and_independence():
    a = draw_channel(3, seed=5, draw_index=2)
    b = draw_channel(3, seed=5, draw_index=2)
    c = draw_channel(3, seed=5, draw_index=3)
    d = draw_channel(3, seed=6, draw_index=2)
    assert np.array_equal(a.H, b.H)
    assert not np.allclose(a.H, c.H) and not np.allclose(a.H, d.H)


def test_draw_order_irrelevant():
    later_first = [draw_channel(3, 9, d).H for d in (4, 1, 0)]
    in_order = {d: draw_channel(3, 9, d).H for d in range(5)}
    for h, d in zip(later_first, (4, 1, 0)):
        assert np.array_equal(h, in_order[d])


def test_rayleigh_statistics():
    h = np.concatenate([draw_channel(3, 1, d).H.ravel() for d in range(20)])
    assert abs(np.mean(h)) < 0.02
    assert abs(np.mean(np.abs(h) ** 2) - 1) < 0.03
    assert abs(np.var(h.real) - 0.5) < 0.02 and abs(np.var(h.imag) - 0.5) < 0.02
    # |h|^2 is Exp(1)
    p = scipy.stats.kstest(np.abs(h) ** 2, 'expon').pvalue
    assert p > 0.001


def test_awgn():
    n = awgn(6, stream(1, 0, NOISE), 20000)
    assert n.shape == (6, 20000)
    assert abs(np.mean(np.abs(n) ** 2) - 1) < 0.02
    assert awgn(4, stream(1, 0, NOISE)).shape == (4,)
    with pytest.raises(ValueError):
        awgn(0, stream(1, 0, NOISE))


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        draw_channel(2, 1)
    with pytest.raises(ValueError):
        ChannelRealization(3, np.zeros((3, 3, 5, 5)))
    with pytest.raises(ValueError):
        ChannelRealization(3, np.full((3, 3, 6, 6), np.nan))


def test_csv_roundtrip(tmp_path):
    ch = draw_channel(3, seed=42, draw_index=7)
    path = tmp_path / 'h.csv'
    write_channel_csv(ch, path)
    text = path.read_text()
    assert '# H 1 1' in text and '# H 3 3' in text
    back = read_channel_csv(path)
    assert np.array_equal(back.H, ch.H)
    assert (back.K, back.seed, back.draw_index) == (3, 42, 7)


def test_identity_channel():
    ch = identity_channel(3)
    assert np.array_equal(ch.H[2, 1], np.eye(6))

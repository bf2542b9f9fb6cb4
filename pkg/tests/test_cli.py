import subprocess
import sys

import numpy as np
import pytest

from latinia.channel import draw_channel, read_channel_csv
from latinia.cli import main
from latinia.sim import CORRELATE_HEADER, SER_HEADER, SUMRATE_HEADER


def test_enumerate(capsys):
    assert main(['enumerate-latin', '--k', '4']) == 0
    assert capsys.readouterr().out.strip() == '24'
    assert main(['enumerate-latin', '--k', '3', '--dump']) == 0
    out = capsys.readouterr().out.splitlines()
    assert out == ['2', '0,1,2;1,2,0;2,0,1', '0,1,2;2,0,1;1,2,0']


def test_missing_k_exits_2():
    with pytest.raises(SystemExit) as info:
        main(['enumerate-latin'])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(['ser'])
    assert info.value.code == 2


def test_config_error_exit_2(capsys):
    assert main(['ser', '--k', '3', '--snr-step', '0']) == 2
    assert main(['ser', '--k', '3', '--strategy', 'cn']) == 2
    assert 'error' in capsys.readouterr().err


def test_ser_csv(tmp_path):
    out = tmp_path / 'ser.csv'
    rc = main(['ser', '--k', '3', '--strategy', 'cn', '--u', '13', '--trials', '3',
               '--symbols', '50', '--snr-step', '10', '--out', str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[2] == SER_HEADER and len(lines) == 3 + 4
    assert lines[3].startswith('0,cn13,minmax,cn,13,first,')


def test_sumrate_and_dump_channel(tmp_path):
    out = tmp_path / 'rate.csv'
    dump = tmp_path / 'h.csv'
    rc = main(['sumrate', '--k', '3', '--trials', '2', '--snr-start', '10',
               '--snr-stop', '10', '--out', str(out), '--dump-channel', str(dump),
               '--seed', '4'])
    assert rc == 0
    assert out.read_text().splitlines()[2] == SUMRATE_HEADER
    assert np.array_equal(read_channel_csv(dump).H, draw_channel(3, 4, 0).H)


def test_correlate(tmp_path):
    out = tmp_path / 'c.csv'
    assert main(['correlate', '--k', '3', '--trials', '1', '--strategy', 'ocn',
                 '--out', str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[2] == CORRELATE_HEADER
    assert len(lines) == 3 + 216 + 1
    assert lines[-1].startswith('# spearman=')


def test_validate_exit_codes(capsys):
    assert main(['validate', '--k', '3', '--trials', '1']) == 0
    assert '0 failures' in capsys.readouterr().out
    assert main(['validate', '--k', '3', '--trials', '1', '--corrupt']) == 0


def test_validate_failure_exit_1(monkeypatch):
    from latinia import sim
    real = sim._validate_draw

    def broken(cfg, draw, plan=None, corrupt_mode=False):
        summary = real(cfg, draw, plan, corrupt_mode)
        summary.failures += 1
        return summary
    monkeypatch.setattr(sim, '_validate_draw', broken)
    assert main(['validate', '--k', '3', '--trials', '1']) == 1


def test_module_entry_point():
    res = subprocess.run([sys.executable, '-m', 'latinia', 'enumerate-latin', '--k', '3'],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == '2'

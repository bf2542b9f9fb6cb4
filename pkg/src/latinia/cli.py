"""Command-line front end: ``latinia <subcommand> [options]``.

Exit status is 0 on success, 1 when validation finds a failing set and 2
on a usage or configuration error.
"""

import argparse
import logging
import sys

import numpy as np

from . import channel, latin, sim
from .errors import ConfigError, LatinIAError
from .select import Strategy

log = logging.getLogger('latinia')


def _scope(text):
    if text in ('first', 'all'):
        return text
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected first, all or a positive integer")
    if n < 1:
        raise argparse.ArgumentTypeError("scheme count must be positive")
    return n


def _add_common(p):
    p.add_argument('--k', type=int, required=True, help="transmitter count K")
    p.add_argument('--seed', type=int, default=1)
    p.add_argument('--trials', type=int, default=100, help="channel draws")
    p.add_argument('--symbols', type=int, default=1000, help="symbols per stream per draw")
    p.add_argument('--snr-start', type=float, default=0.0)
    p.add_argument('--snr-stop', type=float, default=30.0)
    p.add_argument('--snr-step', type=float, default=5.0)
    p.add_argument('--strategy', action='append',
                   choices=['optimal', 'cn', 'ocn', 'random'],
                   help="selection strategy; repeat to compare several")
    p.add_argument('--objective', choices=['minmax', 'sumrate'], default=None)
    p.add_argument('--u', type=int, action='append',
                   help="shortlist / sample size; repeat for several")
    p.add_argument('--schemes', type=_scope, default=None,
                   help="first, all, or the first N Latin squares")
    p.add_argument('--out', default=None, help="CSV path (stdout if omitted)")
    p.add_argument('--dump-channel', default=None,
                   help="write the first channel draw as CSV")
    p.add_argument('--force-exhaustive', action='store_true')
    p.add_argument('--workers', type=int, default=1)


def build_parser():
    parser = argparse.ArgumentParser(
        prog='latinia',
        description="Latin-square interference alignment for the K x 3 MIMO X channel")
    parser.add_argument('-v', '--verbose', action='store_true')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('enumerate-latin', help="count Latin squares with a fixed first row")
    p.add_argument('--k', type=int, required=True)
    p.add_argument('--dump', action='store_true', help="print every square")

    p = sub.add_parser('validate', help="check the alignment conditions over many draws")
    _add_common(p)
    p.add_argument('--corrupt', action='store_true',
                   help="replace one beamformer per set and require detection")

    p = sub.add_parser('ser', help="symbol error rate sweep")
    _add_common(p)
    p.add_argument('--no-noise', action='store_true', help="debug: disable receiver noise")

    p = sub.add_parser('sumrate', help="sum-rate sweep")
    _add_common(p)

    p = sub.add_parser('correlate', help="surrogate ordering versus true ordering")
    _add_common(p)
    p.add_argument('--draw', type=int, default=0, help="draw whose records are written")
    return parser


def _strategies(args):
    names = args.strategy or ['optimal']
    us = args.u or [None]
    out = []
    for name in names:
        if name == 'optimal':
            out.append(Strategy('optimal'))
            continue
        if us == [None]:
            raise ConfigError(f"strategy {name!r} needs --u")
        out.extend(Strategy(name, u) for u in us)
    return tuple(out)


def _config(args, default_objective='minmax', default_scope='first', **extra):
    return sim.SimConfig(
        K=args.k, seed=args.seed, snr_start=args.snr_start, snr_stop=args.snr_stop,
        snr_step=args.snr_step, trials=args.trials, symbols=args.symbols,
        strategies=_strategies(args) if args.command in ('ser', 'sumrate') else
        (Strategy('optimal'),),
        objective=args.objective or default_objective,
        schemes=args.schemes if args.schemes is not None else default_scope,
        force_exhaustive=args.force_exhaustive, workers=args.workers, **extra)


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)


def _enumerate(args):
    squares = latin.enumerate_fixed_first_row(args.k)
    print(len(squares))
    if args.dump:
        for sq in squares:
            print(';'.join(','.join(str(x) for x in row) for row in sq.cells))
    return 0


def _validate(args):
    plan = None
    if args.schemes is not None:
        _, sample = sim.default_validation_plan(args.k, args.force_exhaustive)
        plan = (args.schemes, sample)
    cfg = _config(args, default_scope='first')
    summary = sim.run_validate(cfg, plan=plan, corrupt_mode=args.corrupt)
    what = "undetected corruptions" if args.corrupt else "failures"
    print(f"checked {summary.checked} sets over {cfg.trials} draws: "
          f"{summary.failures} {what}; max pair residual "
          f"{summary.max_pair_residual:.3e}; min direction sine "
          f"{summary.min_direction_sine:.3e}")
    for draw, label, index in summary.failed_sets[:20]:
        print(f"  draw {draw} scheme {label} set {index}")
    return 0 if summary.ok else 1


def _ser(args):
    cfg = _config(args, noise=not args.no_noise)
    points = sim.run_ser(cfg)
    _emit(sim.write_csv(args.out, sim.SER_HEADER, points, cfg), args.out)
    return 0


def _sumrate(args):
    cfg = _config(args, default_objective='sumrate')
    points = sim.run_sumrate(cfg)
    _emit(sim.write_csv(args.out, sim.SUMRATE_HEADER, points, cfg), args.out)
    return 0


def _correlate(args):
    cfg = _config(args)
    names = [s for s in (args.strategy or ['cn']) if s in ('cn', 'ocn')]
    if not names:
        raise ConfigError("correlate needs --strategy cn or ocn")
    surrogate = names[0]
    result = sim.run_correlation(cfg, cfg.objective, surrogate, args.draw)
    trailer = []
    if cfg.trials > 1:
        rhos = [sim.run_correlation(cfg, cfg.objective, surrogate, d).spearman
                for d in range(cfg.trials)]
        trailer.append(f"# mean_spearman={np.mean(rhos):.6f} over {cfg.trials} draws")
    # the single-draw coefficient stays the last line
    trailer.append(f"# spearman={result.spearman:.6f}")
    _emit(sim.write_csv(args.out, sim.CORRELATE_HEADER, result.records, cfg, trailer),
          args.out)
    return 0


COMMANDS = {
    'enumerate-latin': _enumerate,
    'validate': _validate,
    'ser': _ser,
    'sumrate': _sumrate,
    'correlate': _correlate,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s')
    try:
        if getattr(args, 'dump_channel', None):
            ch = channel.draw_channel(args.k, args.seed, 0)
            channel.write_channel_csv(ch, args.dump_channel)
        return COMMANDS[args.command](args)
    except (ConfigError, ValueError) as exc:
        print(f"latinia: error: {exc}", file=sys.stderr)
        return 2
    except LatinIAError as exc:
        print(f"latinia: error: {exc}", file=sys.stderr)
        return 2


if __name__ == '__main__':
    sys.exit(main())

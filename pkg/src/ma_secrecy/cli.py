"""Command-line entry point: ``ma-secrecy {gen,solve,sweep,verify}``.

Exit status: 0 on success, 1 when ``verify`` finds a violation, 2 on an
infeasible configuration or a usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from .channel import SCHEMA_VERSION, ChannelTable, sample_paths, tabulate
from .errors import InfeasibleConfiguration
from .experiment import ALL_METHODS, ExperimentConfig, emit_csv, run_sweep
from .grid import build_grid
from .secrecy import SystemParams
from .solvers import METHODS, solve
from .verify import run_all

log = logging.getLogger("ma_secrecy")


def _load_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.trials is not None:
        overrides["trials"] = args.trials
    if overrides:
        cfg = ExperimentConfig.from_dict({**cfg.to_dict(), **overrides})
    return cfg


def _grid_from(args, cfg):
    return build_grid(
        args.M if args.M is not None else cfg.M,
        args.N if args.N is not None else cfg.N,
        args.L if args.L is not None else cfg.L,
        args.d_min if args.d_min is not None else cfg.d_min,
    )


def cmd_gen(args) -> int:
    cfg = _load_config(args)
    grid = _grid_from(args, cfg)
    chan = cfg.channel_config()
    realizations = []
    for t in range(cfg.trials):
        rng = np.random.default_rng(cfg.seed + t)
        bob = sample_paths(rng, chan, chan.D_B)
        eve = sample_paths(rng, chan, chan.D_E)
        table = tabulate(grid, bob, eve, chan.wavelength)
        realizations.append({"trial": t, "bob": bob.to_dict(), "eve": eve.to_dict(),
                             "table": table.to_dict()})
    doc = {"schema_version": SCHEMA_VERSION, "seed": cfg.seed, "snr_db": cfg.snr_db,
           "wavelength": chan.wavelength, "grid": grid.to_dict(), "realizations": realizations}
    _write_json(doc, args.out)
    return 0


def cmd_solve(args) -> int:
    cfg = _load_config(args)
    if args.input:
        with open(args.input) as fh:
            doc = json.load(fh)
        real = doc["realizations"][args.index]
        table = ChannelTable.from_dict(real["table"])
        snr_db = doc.get("snr_db", cfg.snr_db)
    else:
        grid = _grid_from(args, cfg)
        chan = cfg.channel_config()
        rng = np.random.default_rng(cfg.seed + args.index)
        bob = sample_paths(rng, chan, chan.D_B)
        eve = sample_paths(rng, chan, chan.D_E)
        table = tabulate(grid, bob, eve, chan.wavelength)
        snr_db = cfg.snr_db
    rep = solve(args.method, table, SystemParams.from_snr_db(snr_db))
    _write_json(rep.to_dict(), args.out)
    return 0


def cmd_sweep(args) -> int:
    cfg = _load_config(args)
    result = run_sweep(cfg, workers=args.workers)
    paths = emit_csv(result, args.out)
    for p in paths:
        log.info("wrote %s", p)
    return 0


def cmd_verify(args) -> int:
    seed = 0 if args.seed is None else args.seed
    trials = 50 if args.trials is None else args.trials
    results = run_all(seed, trials)
    failed = False
    for name, bad in results.items():
        print(f"{name}: {'PASS' if not bad else f'FAIL ({len(bad)} violations)'}")
        for line in bad[:10]:
            print(f"  {line}")
        failed |= bool(bad)
    return 1 if failed else 0


def _write_json(doc, out):
    text = json.dumps(doc, indent=2)
    if out in (None, "-"):
        print(text)
    else:
        with open(out, "w") as fh:
            fh.write(text + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ma-secrecy", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out_default=None):
        p.add_argument("--seed", type=int)
        p.add_argument("--trials", type=int)
        p.add_argument("--out", default=out_default)
        p.add_argument("--config", help="experiment config JSON")

    def grid_flags(p):
        p.add_argument("--M", type=int)
        p.add_argument("--N", type=int)
        p.add_argument("--L", type=float)
        p.add_argument("--d-min", dest="d_min", type=float)

    p = sub.add_parser("gen", help="sample channel realizations and write them as JSON")
    common(p, "-")
    grid_flags(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="solve one instance and print the report as JSON")
    common(p, "-")
    grid_flags(p)
    p.add_argument("--method", choices=sorted(METHODS), default="optimal")
    p.add_argument("--input", help="realizations JSON written by `gen`")
    p.add_argument("--index", type=int, default=0, help="realization (or trial) index")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help=f"run a sweep; methods among {', '.join(ALL_METHODS)}")
    common(p, "results.csv")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="randomised oracle and bound checks on small instances")
    common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InfeasibleConfiguration as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, KeyError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

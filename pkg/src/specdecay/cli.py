"""Command line entry point: ``specdecay <experiment> --config cfg.json --out dir``.

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from specdecay.config import EXPERIMENTS, ConfigError, ExperimentConfig
from specdecay.eigensolve import ConvergenceError

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_LAW_PARAMS = {"pareto_symmetric": ("delta",), "uniform": ("a", "b"), "gaussian": ("mean", "sd")}


def parse_law(text: str) -> dict:
    """Accept JSON (``{"kind": "uniform", "a": 0, "b": 1}``) or ``kind:p1,p2``."""
    text = text.strip()
    if text.startswith("{"):
        return json.loads(text)
    kind, _, params = text.partition(":")
    kind = {"pareto": "pareto_symmetric"}.get(kind, kind)
    if kind not in _LAW_PARAMS:
        raise ConfigError(f"unknown law {kind!r}")
    values = [float(p) for p in params.split(",")] if params else []
    names = _LAW_PARAMS[kind]
    if len(values) != len(names):
        raise ConfigError(f"law {kind} takes parameters {', '.join(names)}")
    return {"kind": kind, **dict(zip(names, values))}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="specdecay", description=__doc__.splitlines()[0])
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.add_argument("--config", help="JSON config file; flags below override its fields")
    p.add_argument("--out", dest="output_dir")
    p.add_argument("--d", type=int)
    p.add_argument("--L", type=int, nargs="+")
    p.add_argument("--alpha", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--law", help='"uniform:0,1", "pareto:1", "gaussian:0,1" or JSON')
    p.add_argument("--trials", type=int)
    p.add_argument("--master-seed", dest="master_seed", type=int)
    p.add_argument("--norm-kind", dest="norm_kind", choices=("sup", "euclidean", "l1"))
    p.add_argument("--resolution", type=int)
    p.add_argument("--override-infinite-variance", dest="override_infinite_variance",
                   action="store_const", const=True)
    return p


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    data = {}
    if args.config:
        data = ExperimentConfig.from_json(args.config).to_dict()
    data["experiment"] = args.experiment
    for key in ("output_dir", "d", "alpha", "delta", "trials", "master_seed",
                "norm_kind", "resolution", "override_infinite_variance"):
        value = getattr(args, key)
        if value is not None:
            data[key] = value
    if args.L is not None:
        data["L"] = args.L[0] if len(args.L) == 1 else args.L
    if args.law is not None:
        data["law"] = parse_law(args.law)
    return ExperimentConfig.from_dict(data)


def main(argv=None) -> int:
    from specdecay.experiments import run

    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        summary = run(config)
    except ConfigError as exc:
        print(f"specdecay: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"specdecay: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    print(f"wrote results to {config.output_dir} ({summary['config']['experiment']})")
    return 0


if __name__ == "__main__":
    sys.exit(main())

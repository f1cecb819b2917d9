"""Command-line entry point: ``nomasim run`` and ``nomasim reproduce``."""

from __future__ import annotations

import argparse
import sys

from . import runner
from .errors import ConfigError, InfeasibleError

EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_IO = 2, 3, 4


def build_parser():
    p = argparse.ArgumentParser(prog="nomasim", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, help="root seed (overrides the config)")
        sp.add_argument("--trials", type=int, help="Monte Carlo trials (overrides the config)")
        sp.add_argument("--out", help="CSV output path, '-' for stdout")
        sp.add_argument("--threads", type=int, default=1,
                        help="worker threads; never changes the output bytes")

    r = sub.add_parser("run", help="run an experiment from a TOML config")
    r.add_argument("config")
    common(r)
    f = sub.add_parser("reproduce", help="emit the data behind a figure")
    f.add_argument("figure", choices=sorted(runner.FIGURES))
    common(f)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.threads < 1:
            raise ConfigError("--threads: must be >= 1")
        if args.command == "run":
            cfg = runner.load_config(args.config)
            data = {"experiment": cfg.experiment, "scenario": dict(cfg.scenario),
                    "seed": cfg.seed if args.seed is None else args.seed,
                    "trials": cfg.trials if args.trials is None else args.trials,
                    "output_path": cfg.output_path}
            # drop defaults filled in by the first pass so validation sees raw input
            data["scenario"] = {k: v for k, v in data["scenario"].items() if v is not None}
            cfg = runner.parse_config(data)
            runner.run(cfg, args.threads, out=args.out)
        else:
            runner.reproduce(args.figure, args.seed, args.trials, args.out, args.threads)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except InfeasibleError as e:
        print(f"infeasible: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Subcommands::

    scivr run (CONFIG.ini | manifest.json | --preset NAME) [--outdir DIR]
              [--set SECTION.KEY=VALUE ...] [--workers N] [--gnuplot]
    scivr compare RUN_DIR
    scivr converge (CONFIG.ini | --preset NAME) --n-list N1,N2,... [...]
    scivr diagnose-width (CONFIG.ini | --preset NAME) --qi Q --pi P [...]

Exit codes: 0 success, 1 configuration error, 2 numerical error.
"""

import argparse
import json
import sys

from .config import ExperimentConfig, preset, preset_names
from .errors import ConfigError, NumericalError
from . import harness


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as config errors (exit 1)."""

    def error(self, message):
        raise ConfigError(message)


def _add_config_arguments(parser):
    parser.add_argument("config", nargs="?", default=None,
                        help="config INI file (or manifest.json for run)")
    parser.add_argument("--preset", choices=preset_names(), default=None,
                        help="use a built-in experiment definition")
    parser.add_argument("--set", action="append", default=[],
                        metavar="SECTION.KEY=VALUE", dest="overrides",
                        help="override one config field (repeatable)")
    parser.add_argument("--outdir", default=None,
                        help="output directory (overrides config and "
                             f"${harness.OUTPUT_DIR_ENV})")
    parser.add_argument("--workers", type=int, default=None,
                        help="trajectory chunks advanced concurrently")


def _parse_overrides(pairs):
    overrides = {}
    for pair in pairs:
        try:
            target, value = pair.split("=", 1)
            section, key = target.split(".", 1)
        except ValueError:
            raise ConfigError(
                f"--set expects SECTION.KEY=VALUE, got {pair!r}")
        overrides[(section.strip(), key.strip())] = value.strip()
    return overrides


def _load_config(args):
    if (args.config is None) == (args.preset is None):
        raise ConfigError("give exactly one of a config file or --preset")
    if args.preset is not None:
        config = preset(args.preset)
    elif args.config.endswith(".json"):
        try:
            with open(args.config, "r", encoding="utf-8") as handle:
                manifest = json.load(handle)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read manifest {args.config}: {exc}")
        if "config_ini" not in manifest:
            raise ConfigError(f"{args.config} carries no config_ini block")
        config = ExperimentConfig.from_ini_text(manifest["config_ini"])
    else:
        config = ExperimentConfig.from_file(args.config)
    overrides = _parse_overrides(args.overrides)
    if overrides:
        config = config.with_overrides(overrides)
    return config


def build_parser():
    parser = _Parser(prog="scivr",
                     description="semiclassical IVR propagator experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run every configured method")
    _add_config_arguments(run_p)
    run_p.add_argument("--gnuplot", action="store_true",
                       help="also write ready-to-run gnuplot scripts")

    cmp_p = sub.add_parser("compare",
                           help="rank methods against the quantum series")
    cmp_p.add_argument("run_dir")

    conv_p = sub.add_parser("converge",
                            help="Monte Carlo convergence versus N")
    _add_config_arguments(conv_p)
    conv_p.add_argument("--n-list", required=True,
                        help="comma-separated trajectory counts")

    diag_p = sub.add_parser("diagnose-width",
                            help="width decay along one trajectory")
    _add_config_arguments(diag_p)
    diag_p.add_argument("--qi", type=float, required=True,
                        help="initial position of the diagnostic trajectory")
    diag_p.add_argument("--pi", type=float, required=True,
                        help="initial momentum of the diagnostic trajectory")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "run":
            config = _load_config(args)
            result = harness.run(config, output_dir=args.outdir,
                                 workers=args.workers, gnuplot=args.gnuplot)
            for key in sorted(result.csv_paths):
                print(result.csv_paths[key])
            print(result.manifest_path)
        elif args.command == "compare":
            report = harness.compare(args.run_dir)
            print(report.to_text())
        elif args.command == "converge":
            config = _load_config(args)
            try:
                n_list = [int(n) for n in args.n_list.split(",") if n.strip()]
            except ValueError:
                raise ConfigError(f"bad --n-list value {args.n_list!r}")
            rows = harness.converge(config, n_list, output_dir=args.outdir,
                                    workers=args.workers)
            print(f"{'method':<22}{'N':>8}{'rms vs largest':>16}"
                  f"{'mean mc_error':>16}")
            for row in rows:
                print(f"{row.method:<22}{row.n_trajectories:>8}"
                      f"{row.rms_vs_largest:>16.6f}{row.mean_mc_error:>16.6f}")
        elif args.command == "diagnose-width":
            config = _load_config(args)
            path = harness.diagnose_width(config, args.qi, args.pi,
                                          output_dir=args.outdir)
            print(path)
        return 0
    except ConfigError as exc:
        print(f"scivr: config error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"scivr: numerical error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

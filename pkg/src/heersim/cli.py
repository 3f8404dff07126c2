"""Command-line front end.

    heersim run --config PATH --seed N --out DIR [--set key=value]...
    heersim compare --preset NAME --seeds N --out DIR

`run` writes the per-round CSV plus figures for one simulation; `compare`
runs a preset over many seeds and writes the protocol comparison table.
Exit codes: 0 success, 1 usage/config error, 2 runtime or I/O error.
"""

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .config import config_hash, load_config
from .engine import run, run_batch
from .network import ConfigError
from .plots import save_comparison_figures, save_run_figures
from .presets import preset_configs, preset_names

ROUND_CSV_HEADER = "round,alive,ch_count,packets_to_ch,packets_to_bs,total_residual,forced_ch"
COMPARE_CSV_HEADER = ("protocol,classification,stability_mean,stability_sd,"
                      "lifetime_mean,lifetime_sd,throughput_mean")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def build_parser():
    parser = _Parser(prog="heersim",
                     description="Round-based simulator comparing TEEN, DEEC, and HEER.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate one configuration")
    p_run.add_argument("--config", type=Path, default=None, help="flat key=value config file")
    p_run.add_argument("--seed", type=int, default=None, help="master seed (overrides config)")
    p_run.add_argument("--out", type=Path, required=True, help="output directory")
    p_run.add_argument("--set", dest="overrides", action="append", default=[],
                       metavar="KEY=VALUE", help="override one config key")

    p_cmp = sub.add_parser("compare", help="run a preset over many seeds")
    p_cmp.add_argument("--preset", required=True, help="preset name")
    p_cmp.add_argument("--seeds", type=int, default=20, help="number of seeds")
    p_cmp.add_argument("--out", type=Path, required=True, help="output directory")
    p_cmp.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    return parser


def write_round_csv(result, path):
    lines = [f"# config_hash={config_hash(result.config)} master_seed={result.config.master_seed}",
             ROUND_CSV_HEADER]
    for m in result.per_round:
        lines.append(f"{m.round},{m.alive_count},{m.ch_count},{m.packets_to_ch},"
                     f"{m.packets_to_bs},{m.total_residual!r},{int(m.forced_ch)}")
    path.write_text("\n".join(lines) + "\n")


def write_compare_csv(stats, seeds, preset, path):
    hashes = ",".join(config_hash(e.config) for e in stats)
    lines = [f"# preset={preset} seeds={seeds[0]}..{seeds[-1]} config_hashes={hashes}",
             COMPARE_CSV_HEADER]
    for e in stats:
        kind = e.config.protocol
        lines.append(f"{kind.value},{kind.classification},{e.stability_mean!r},"
                     f"{e.stability_sd!r},{e.lifetime_mean!r},{e.lifetime_sd!r},"
                     f"{e.throughput_mean!r}")
    path.write_text("\n".join(lines) + "\n")


def cmd_run(args) -> int:
    config = load_config(args.config, args.overrides)
    if args.seed is not None:
        noise = config.env
        if noise.noise_seed == config.master_seed:  # follow unless explicitly pinned
            noise = replace(noise, noise_seed=args.seed)
        config = replace(config, master_seed=args.seed, env=noise)
    result = run(config)
    args.out.mkdir(parents=True, exist_ok=True)
    write_round_csv(result, args.out / "rounds.csv")
    save_run_figures(result, args.out)
    flag = " censored" if result.censored else ""
    print(f"protocol={config.protocol.value} seed={config.master_seed} "
          f"stability={result.stability_period} instability={result.instability_period} "
          f"lifetime={result.lifetime} packets_to_ch={result.packets_to_ch_total} "
          f"packets_to_bs={result.packets_to_bs_total}{flag}")
    return 0


def cmd_compare(args) -> int:
    try:
        configs = preset_configs(args.preset)
    except KeyError:
        raise ConfigError(
            f"unknown preset '{args.preset}'; available: {', '.join(preset_names())}")
    if args.seeds < 1:
        raise ConfigError(f"--seeds must be >= 1, got {args.seeds}")
    seeds = list(range(1, args.seeds + 1))
    stats = run_batch(configs, seeds, n_jobs=args.jobs)
    args.out.mkdir(parents=True, exist_ok=True)
    write_compare_csv(stats, seeds, args.preset, args.out / "comparison.csv")
    save_comparison_figures(stats, args.out)
    for e in stats:
        print(f"{e.config.protocol.value}: stability {e.stability_mean:.1f}±{e.stability_sd:.1f} "
              f"lifetime {e.lifetime_mean:.1f}±{e.lifetime_sd:.1f} "
              f"throughput {e.throughput_mean:.0f}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "run":
            return cmd_run(args)
        return cmd_compare(args)
    except (_UsageError, ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

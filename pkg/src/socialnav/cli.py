"""Command-line entry point: run one scenario variant or a full 18-variant suite."""
from __future__ import annotations

import argparse
import json
import sys

from . import metrics
from .runner import Backend, Method, RunConfig, run_one, run_suite
from .scenarios import ScenarioKind


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="socialnav",
        description="Two-agent doorway/intersection navigation runs.")
    p.add_argument("--scenario", choices=[k.value for k in ScenarioKind],
                   default="doorway")
    p.add_argument("--variant", default="all",
                   help="variant index 0-17, or 'all' for the full suite")
    p.add_argument("--method", choices=[m.value for m in Method], default="no-llm")
    p.add_argument("--backend", choices=[b.value for b in Backend], default="rule")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--latency", type=float, default=1.0,
                   help="sim seconds between dialogue messages")
    p.add_argument("--t-max", type=float, default=None,
                   help="override the episode time budget")
    p.add_argument("--out", default=None, help="output directory for run artifacts")
    p.add_argument("--config", default=None,
                   help="JSON file with run options; explicit flags win")
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = {
        "scenario": args.scenario, "variant": args.variant, "method": args.method,
        "backend": args.backend, "seed": args.seed, "latency": args.latency,
        "t_max": args.t_max, "out": args.out,
    }
    if args.config:
        with open(args.config) as f:
            file_values = json.load(f)
        unknown = set(file_values) - set(values)
        if unknown:
            raise SystemExit(f"unknown config keys: {sorted(unknown)}")
        defaults = build_parser().parse_args([])
        for key, val in file_values.items():
            if values[key] == getattr(defaults, key):
                values[key] = val
    variant = values["variant"]
    if variant != "all":
        variant = int(variant)
    return RunConfig(
        scenario=ScenarioKind(values["scenario"]), variant=variant,
        method=Method(values["method"]), backend=Backend(values["backend"]),
        seed=int(values["seed"]), t_max=values["t_max"],
        latency=float(values["latency"]), output_dir=values["out"])


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = config_from_args(args)
    if config.variant == "all":
        summary = run_suite(config)
        print(metrics.format_table(
            f"{config.scenario.value} suite / {config.method.value}", [summary]))
    else:
        record, _ = run_one(config, config.variant)
        print(json.dumps(record.to_dict(), indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())

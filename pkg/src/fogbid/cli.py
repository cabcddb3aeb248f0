"""Command-line front end.

Commands: run one simulation, run a canned sweep (exp1/exp2), or
validate a config file. Configs are flat `key = value` lines; uniform
ranges are written `mean,half_width`. Exit codes: 0 success, 2 usage,
3 config problem, 4 runtime failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any

from .auction import PaymentRule
from .domain import DomainError, UniformParam
from .engine import outcome_lines, run, summary_lines
from .engine.config import ConfigInvalid, SimulationConfig, standard_chain
from .experiments import csv_path, exp1_spec, exp2_spec, run_sweep, write_csv
from .placement import EvictionPolicy


class ParseError(ValueError):
    """A config file line that cannot be parsed; carries the line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}" if lineno else message)
        self.lineno = lineno


_INT_KEYS = {
    "seed",
    "duration_ms",
    "tick_ms",
    "requests_per_second_per_edge",
    "executable_count",
    "edge_count",
    "edge_storage_capacity",
    "edge_processing_capacity",
    "intermediary_storage_capacity",
    "intermediary_processing_capacity",
}
_PARAM_KEYS = {
    "processing_latency",
    "edge_to_intermediary_latency",
    "intermediary_to_cloud_latency",
    "storage_bid",
    "processing_bid",
    "executable_size",
}
_TOPOLOGY_KEYS = {
    "edge_count",
    "edge_storage_capacity",
    "edge_processing_capacity",
    "intermediary_storage_capacity",
    "intermediary_processing_capacity",
}
_ENUM_KEYS = {"payment_rule": PaymentRule, "eviction_policy": EvictionPolicy}
_ALL_KEYS = _INT_KEYS | _PARAM_KEYS | set(_ENUM_KEYS)


def load_config(path: str | Path) -> SimulationConfig:
    """Parse a flat key=value config file into a validated SimulationConfig.

    Unknown keys and syntax problems raise ParseError with the line
    number; values violating domain invariants raise ConfigInvalid.
    Missing keys take the documented defaults. `#` starts a comment.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(0, f"cannot read config file: {exc}") from exc
    values: dict[str, Any] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (part.strip() for part in line.partition("="))
        if not sep or not key or not value:
            raise ParseError(lineno, f"expected 'key = value', got {raw_line.strip()!r}")
        if key not in _ALL_KEYS:
            raise ParseError(lineno, f"unknown key {key!r}")
        if key in values:
            raise ParseError(lineno, f"duplicate key {key!r}")
        if key in _INT_KEYS:
            try:
                values[key] = int(value)
            except ValueError:
                raise ParseError(lineno, f"{key} expects an integer, got {value!r}") from None
        elif key in _PARAM_KEYS:
            try:
                values[key] = UniformParam.parse(value)
            except DomainError as exc:
                raise ConfigInvalid(f"line {lineno}: {exc}") from exc
        else:
            enum_type = _ENUM_KEYS[key]
            try:
                values[key] = enum_type(value)
            except ValueError:
                options = "|".join(member.value for member in enum_type)
                raise ParseError(lineno, f"{key} expects {options}, got {value!r}") from None
    topology_kwargs = {key: values.pop(key) for key in list(values) if key in _TOPOLOGY_KEYS}
    try:
        cfg = SimulationConfig(topology=standard_chain(**topology_kwargs), **values)
        cfg.validate()
    except ConfigInvalid:
        raise
    except DomainError as exc:
        raise ConfigInvalid(str(exc)) from exc
    return cfg


def _apply_cli_overrides(cfg: SimulationConfig, args: argparse.Namespace) -> SimulationConfig:
    changes: dict[str, Any] = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.payment_rule is not None:
        changes["payment_rule"] = PaymentRule(args.payment_rule)
    if args.eviction is not None:
        changes["eviction_policy"] = EvictionPolicy(args.eviction)
    return replace(cfg, **changes) if changes else cfg


def _cmd_run(args: argparse.Namespace) -> int:
    cfg = load_config(args.config) if args.config else SimulationConfig()
    cfg = _apply_cli_overrides(cfg, args)
    cfg.validate()
    result = run(cfg)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    records_path = out_dir / f"run-{cfg.seed}.records"
    summary_path = out_dir / f"run-{cfg.seed}.summary"
    summary = "\n".join(summary_lines(result)) + "\n"
    records_path.write_text("\n".join(outcome_lines(result)) + "\n", encoding="ascii")
    summary_path.write_text(summary, encoding="ascii")
    sys.stdout.write(summary)
    return 0


def _cmd_exp(args: argparse.Namespace) -> int:
    overrides: dict[str, Any] = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.payment_rule is not None:
        overrides["payment_rule"] = PaymentRule(args.payment_rule)
    if args.eviction is not None:
        overrides["eviction_policy"] = EvictionPolicy(args.eviction)
    if args.command == "exp1":
        spec = exp1_spec(
            overrides,
            repetitions=args.repetitions,
            include_verification_point=args.with_5000,
        )
    else:
        spec = exp2_spec(overrides, repetitions=args.repetitions)
    rows = run_sweep(spec)
    for row in rows:
        if not row.ok:
            print(f"warning: value {row.value} failed: {row.error}", file=sys.stderr)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    destination = csv_path(spec, out_dir)
    write_csv(rows, destination)
    print(f"wrote {destination}")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    cfg = load_config(args.config) if args.config else SimulationConfig()
    cfg.validate()
    print("ok: configuration and topology are valid")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fogbid",
        description="Auction-based fog function placement simulator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, config: bool) -> None:
        if config:
            p.add_argument("--config", metavar="PATH", help="flat key=value config file")
        p.add_argument("--seed", type=int, metavar="N", help="override the base seed")
        p.add_argument(
            "--payment-rule",
            choices=[rule.value for rule in PaymentRule],
            help="winners pay their own bid (first) or the highest losing bid (second)",
        )
        p.add_argument(
            "--eviction",
            choices=[policy.value for policy in EvictionPolicy],
            help="storage eviction ordering",
        )
        p.add_argument("--out", metavar="DIR", default="results", help="output directory")

    run_parser = sub.add_parser("run", help="run one simulation")
    add_common(run_parser, config=True)
    run_parser.set_defaults(handler=_cmd_run)

    exp1_parser = sub.add_parser("exp1", help="request-load sweep (processing-bound)")
    add_common(exp1_parser, config=False)
    exp1_parser.add_argument("--repetitions", type=int, default=5, metavar="N")
    exp1_parser.add_argument(
        "--with-5000", action="store_true", help="append the 5000 req/s verification point"
    )
    exp1_parser.set_defaults(handler=_cmd_exp)

    exp2_parser = sub.add_parser("exp2", help="executable-count sweep (storage-bound)")
    add_common(exp2_parser, config=False)
    exp2_parser.add_argument("--repetitions", type=int, default=5, metavar="N")
    exp2_parser.set_defaults(handler=_cmd_exp)

    validate_parser = sub.add_parser("validate", help="check a config file and its topology")
    validate_parser.add_argument("--config", metavar="PATH", help="flat key=value config file")
    validate_parser.set_defaults(handler=_cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 0 for --help, 2 for usage errors
        code = exc.code
        return int(code) if code is not None else 0
    try:
        return args.handler(args)
    except (ParseError, ConfigInvalid) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (RuntimeError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


def entrypoint() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    entrypoint()

"""
compact3 — command-line entry point.

Usage:
    python main.py <command> [options]
    python main.py reproduce --jobs 8
    python main.py intercepts --pairs examples --digits 60

Settings come from, lowest priority first: defaults, a .env file next to this
script, COMPACT3_* environment variables, command-line flags.

Exit codes: 0 success, 1 unexpected error, 2 usage / domain, 3 resource
budget, 4 elimination or verification failure.
"""

import argparse
import json
import os
import sys
from typing import List, Optional

# Ensure project root is on sys.path regardless of where script is run from
_PROJECT_DIR = os.path.dirname(os.path.abspath(__file__))
if _PROJECT_DIR not in sys.path:
    sys.path.insert(0, _PROJECT_DIR)

from loguru import logger  # noqa: E402  (after path fix)

from commands import COMMANDS, SHARED_FLAGS  # noqa: E402
from config import RunConfig, load_env_file  # noqa: E402
from errors import Compact3Error  # noqa: E402
from pipeline import Pipeline  # noqa: E402

_TYPES = {"int": int, "float": float, "tuple": str}

SEPARATOR = "─" * 60


def _add_argument(parser: argparse.ArgumentParser, spec: dict) -> None:
    spec = dict(spec)
    flags = spec.pop("flags")
    if "type" in spec:
        spec["type"] = _TYPES[spec["type"]]
    parser.add_argument(*flags, **spec)


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    for spec in SHARED_FLAGS:
        _add_argument(shared, {**spec, "default": None})

    parser = argparse.ArgumentParser(
        prog="compact3",
        description="Radii pairs admitting compact packings of the plane by three sizes of discs.",
    )
    sub = parser.add_subparsers(dest="command", metavar="command", required=True)
    for cmd in COMMANDS:
        cp = sub.add_parser(cmd["name"], parents=[shared],
                            help=cmd["description"], description=cmd["description"])
        for spec in cmd["arguments"]:
            _add_argument(cp, spec)
    return parser


def configure_logging(level: str) -> None:
    logger.remove()
    logger.add(sys.stderr, level=level, format="{time:HH:mm:ss} {level:<7} {message}")


def print_result(command: str, result: dict) -> None:
    if command == "reproduce":
        print(SEPARATOR)
        for row in result.get("checks", []):
            mark = "ok" if row["ok"] else "FAILED"
            print(f"  {row['check']:<30} {row['observed']:<24} {mark}")
        print(SEPARATOR)
        return
    print(json.dumps(result, indent=2, default=str))


def main(argv: Optional[List[str]] = None) -> int:
    load_env_file()
    args = build_parser().parse_args(argv)

    try:
        overrides = {spec["dest"]: getattr(args, spec["dest"]) for spec in SHARED_FLAGS}
        config = RunConfig.from_env().override(**overrides).validate()
    except Compact3Error as exc:
        print(f"\n[Error] {exc}")
        return exc.exit_code

    configure_logging(config.log_level)
    pipeline = Pipeline(config)
    try:
        result = pipeline.run(args.command, args)
    except Compact3Error as exc:
        print(f"\n[Error] {exc}")
        pipeline.store.write_error(pipeline.run_id, args.command, exc, exc.exit_code)
        return exc.exit_code
    except Exception as exc:
        print(f"\n[Error] {exc}")
        pipeline.store.write_error(pipeline.run_id, args.command, exc, 1)
        return 1

    print_result(args.command, result)
    return 0


if __name__ == "__main__":
    sys.exit(main())

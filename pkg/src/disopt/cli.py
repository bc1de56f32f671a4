"""Command-line experiment runner.

Subcommands: ``run <config.json>``, ``sweep <grid.json>``, and
``preset <name>``.  Exit codes: 0 on success, 1 when strict mode finds
an invariant violation, 2 on usage or config errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .config import ConfigError, PRESETS, parse_config, preset_document
from .harness import run_experiment, sweep

EXIT_OK = 0
EXIT_STRICT = 1
EXIT_USAGE = 2

OUTDIR_ENV = "DISOPT_OUT"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="disopt",
        description=(
            "Simulate distributed subgradient optimization with quantized "
            "broadcasts and adversarial agents"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--out",
        default=None,
        help=f"output directory (default: ${OUTDIR_ENV} or ./results)",
    )

    p_run = sub.add_parser("run", parents=[common], help="run one experiment config")
    p_run.add_argument("config", type=Path, help="path to a config JSON document")
    p_run.add_argument("--strict", action="store_true", help="fail on bound violations")
    p_run.add_argument(
        "--per-agent", action="store_true", help="include per-agent error columns"
    )

    p_sweep = sub.add_parser("sweep", parents=[common], help="run a parameter grid")
    p_sweep.add_argument("grid", type=Path, help="path to a sweep JSON document")

    p_preset = sub.add_parser(
        "preset", parents=[common], help="run a built-in scenario"
    )
    p_preset.add_argument("name", choices=sorted(PRESETS))
    p_preset.add_argument(
        "--seeds", type=int, default=None, help="use only the first N preset seeds"
    )
    p_preset.add_argument("--strict", action="store_true")
    p_preset.add_argument("--per-agent", action="store_true")

    return parser


def _outdir(args) -> Path:
    if args.out:
        return Path(args.out)
    return Path(os.environ.get(OUTDIR_ENV, "results"))


def _report_config_error(exc: ConfigError) -> None:
    print("config error:", file=sys.stderr)
    for path, message in exc.errors:
        print(f"  {path}: {message}", file=sys.stderr)


def _finish(artifacts, strict: bool) -> int:
    for path in artifacts.csv_paths:
        print(f"wrote {path}")
    if artifacts.report_path:
        print(f"wrote {artifacts.report_path}")
    violations = artifacts.strict_violations
    if violations:
        print(
            f"projection-error bound violated at {len(violations)} "
            f"unsaturated step(s), e.g. {violations[:5]}",
            file=sys.stderr,
        )
        if strict:
            return EXIT_STRICT
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    outdir = _outdir(args)

    try:
        if args.command == "run":
            try:
                text = args.config.read_text()
            except OSError as exc:
                print(f"cannot read {args.config}: {exc}", file=sys.stderr)
                return EXIT_USAGE
            config = parse_config(text)
            if args.strict:
                config = type(config)(**{**config.__dict__, "strict": True})
            artifacts = run_experiment(
                config, outdir, name=args.config.stem, include_agents=args.per_agent
            )
            return _finish(artifacts, config.strict)

        if args.command == "sweep":
            try:
                doc = json.loads(args.grid.read_text())
            except OSError as exc:
                print(f"cannot read {args.grid}: {exc}", file=sys.stderr)
                return EXIT_USAGE
            except json.JSONDecodeError as exc:
                print(f"malformed JSON in {args.grid}: {exc}", file=sys.stderr)
                return EXIT_USAGE
            rows = sweep(doc, outdir)
            print(f"wrote {outdir / 'sweep_summary.csv'} ({len(rows)} grid points)")
            return EXIT_OK

        # preset
        seeds = None
        if args.seeds is not None:
            if args.seeds < 1:
                print("--seeds must be >= 1", file=sys.stderr)
                return EXIT_USAGE
            seeds = range(args.seeds)
        doc = preset_document(args.name, seeds=seeds, strict=args.strict)
        config = parse_config(doc)
        artifacts = run_experiment(
            config, outdir, name=args.name, include_agents=args.per_agent
        )
        return _finish(artifacts, args.strict)

    except ConfigError as exc:
        _report_config_error(exc)
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()

"""Scenario runner CLI.

Reads a JSON configuration, executes the named verification suites over the
parameter grid with a fixed seed, and writes canonical structured and
markdown reports.

Exit codes: 0 all suites pass; 1 suite failure (reports still written);
2 usage or configuration error; 3 internal numerical failure; 4 report I/O
failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import NumericalFailure
from .reporting import render_markdown, render_structured
from .suites import SUITE_NAMES, ConfigError, ScenarioConfig, run

EXIT_OK = 0
EXIT_SUITE_FAILURE = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vmrt-verify",
        description="Run the cone-model verification suites and write reports.")
    parser.add_argument("--config", type=str, default=None,
                        help="path to a JSON configuration file")
    parser.add_argument("--suite", action="append", default=None,
                        metavar="NAME",
                        help=f"suite to run (repeatable); one of: {', '.join(SUITE_NAMES)}")
    parser.add_argument("--seed", type=int, default=None,
                        help="RNG seed (required here or in the config file)")
    parser.add_argument("--tol", type=float, default=None,
                        help="override the closed-form vs oracle comparison tolerance")
    parser.add_argument("--out", type=str, default=".",
                        help="output directory for reports (default: current directory)")
    parser.add_argument("--format", choices=("structured", "markdown", "both"),
                        default="both", help="which reports to write")
    return parser


def load_config(path: str | None, args: argparse.Namespace) -> ScenarioConfig:
    """Merge the config file with CLI overrides; flags win."""
    raw: dict = {}
    if path is not None:
        text = Path(path).read_text(encoding="utf-8")
        raw = json.loads(text)
        if not isinstance(raw, dict):
            raise ConfigError("config file must hold a JSON object")
    kwargs: dict = {}
    if "seed" in raw:
        kwargs["seed"] = raw["seed"]
    if "suites" in raw:
        kwargs["suites"] = tuple(raw["suites"])
    if "kl_pairs" in raw:
        kwargs["kl_pairs"] = tuple(tuple(p) for p in raw["kl_pairs"])
    if "trials" in raw:
        kwargs["trials"] = dict(raw["trials"])
    tolerances = raw.get("tolerances", {})
    if "rank" in tolerances:
        kwargs["rank_tol"] = float(tolerances["rank"])
    if "compare" in tolerances:
        kwargs["compare_tol"] = float(tolerances["compare"])
    if "classifier_max_l" in raw:
        kwargs["classifier_max_l"] = int(raw["classifier_max_l"])
    if args.suite:
        kwargs["suites"] = tuple(args.suite)
    if args.seed is not None:
        kwargs["seed"] = args.seed
    if args.tol is not None:
        kwargs["compare_tol"] = args.tol
    if "seed" not in kwargs:
        raise ConfigError("a seed must be supplied via --seed or the config file")
    return ScenarioConfig(**kwargs)


def write_reports(reports, config: ScenarioConfig, out_dir: str, fmt: str) -> list[Path]:
    out = Path(out_dir)
    written = []
    out.mkdir(parents=True, exist_ok=True)
    record = config.record()
    if fmt in ("structured", "both"):
        p = out / "report.json"
        p.write_text(render_structured(reports, record), encoding="utf-8")
        written.append(p)
    if fmt in ("markdown", "both"):
        p = out / "report.md"
        p.write_text(render_markdown(reports, record), encoding="utf-8")
        written.append(p)
    return written


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors, matching our contract
        return int(exc.code or 0)
    try:
        config = load_config(args.config, args)
    except (ConfigError, OSError, json.JSONDecodeError, ValueError, TypeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    numerical_failure = None
    try:
        reports = run(config)
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    try:
        written = write_reports(reports, config, args.out, args.format)
    except OSError as exc:
        print(f"could not write reports: {exc}", file=sys.stderr)
        return EXIT_IO

    for rep in reports:
        s = rep.summary
        print(f"{rep.suite}: {'PASS' if rep.passed else 'FAIL'} "
              f"({s['passed']}/{s['cases']} cases, {rep.runtime_s:.2f}s)")
    for p in written:
        print(f"wrote {p}")
    if not all(r.passed for r in reports):
        return EXIT_SUITE_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())

"""Command-line surface: argument parsing, command dispatch and exit codes.

Usage:
    from cli import execute
    from config import load_config

    code = execute("verify-s1", load_config({"out": "runs/a"}))
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from cli.commands import COMMANDS, PIPELINE
from cli.context import CommandResult, RunContext
from config import RunConfig
from core import Report
from core.errors import LabError
from reporting import SUMMARY_FILE

log = logging.getLogger("cusplab.cli")

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_FAILURE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cusplab",
        description="Numerical construction of high-entropy orbits escaping to the cusp "
        "of SL(d+1,Z)\\SL(d+1,R).",
    )
    parser.add_argument("command", choices=sorted(COMMANDS) + ["pipeline"])
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--d", type=int)
    parser.add_argument("--M", type=float)
    parser.add_argument("--N", type=int)
    parser.add_argument("--K", type=int)
    parser.add_argument("--K-sub", dest="K_sub", type=int)
    parser.add_argument("--m", type=int)
    parser.add_argument("--samples", type=int)
    parser.add_argument("--draws", type=int)
    parser.add_argument("--precision-bits", dest="precision_bits", type=int)
    parser.add_argument("--c0", type=float)
    parser.add_argument("--eta0", type=float)
    parser.add_argument("--delta", type=float)
    parser.add_argument("--eta", type=float)
    parser.add_argument("--nprime", type=int)
    parser.add_argument("--nprime-min", dest="nprime_min", type=int)
    parser.add_argument("--nprime-max", dest="nprime_max", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--scan-mode", dest="scan_mode", choices=["grid", "montecarlo"])
    parser.add_argument("--shadow-eps", dest="shadow_eps", type=float)
    parser.add_argument("--l-min", dest="l_min", type=int)
    parser.add_argument("--l-max", dest="l_max", type=int)
    parser.add_argument("--pair-cap", dest="pair_cap", type=int)
    parser.add_argument("--workers", type=int)
    parser.add_argument("--out", help="Run directory")
    parser.add_argument("--format", choices=["jsonl", "csv"])
    parser.add_argument("--log-level", dest="log_level")
    parser.add_argument("--allow-d1", dest="allow_d1", action="store_true", default=None)
    parser.add_argument("--quiet", action="store_true", default=None)
    return parser


def flags_from_args(args: argparse.Namespace) -> dict:
    """Flag values that were actually given, keyed by config key."""
    skip = {"command", "config"}
    return {k: v for k, v in vars(args).items() if k not in skip and v is not None}


def _run(cmd: str, ctx: RunContext) -> tuple[int, CommandResult]:
    report: Report = COMMANDS[cmd](ctx)
    written = ctx.events.emit_report(cmd, report)
    result = CommandResult(records=written, violations=len(report.violations),
                           summary=dict(report.summary))
    code = EXIT_VIOLATIONS if result.violations else EXIT_OK
    if result.violations:
        log.warning("%s: %d violations", cmd, result.violations)
    return code, result


def _finish(cmd: str, ctx: RunContext, code: int, result: CommandResult) -> None:
    summary = {k: v for k, v in result.summary.items() if k != "violations"}
    record = ctx.events.emit(cmd, "command_summary", None, records=result.records,
                             violations=result.violations, exit_code=code, **summary)
    ctx.summaries.write(cmd, result.records, result.violations, code, **summary)
    if ctx.cfg["format"] == "csv":
        sys.stdout.write((ctx.cfg.out / SUMMARY_FILE).read_text())
    else:
        sys.stdout.write(json.dumps(record, sort_keys=True, default=str) + "\n")


def _execute_one(cmd: str, ctx: RunContext) -> int:
    log.info("Running %s in %s", cmd, ctx.cfg.out)
    try:
        code, result = _run(cmd, ctx)
    except LabError as e:
        log.error("%s failed: %s: %s", cmd, type(e).__name__, e)
        ctx.events.emit(cmd, "engineering_failure", None, error=type(e).__name__, message=str(e))
        code, result = e.exit_code, CommandResult(summary={"error": type(e).__name__})
    _finish(cmd, ctx, code, result)
    return code


def execute(cmd: str, cfg: RunConfig) -> int:
    """Run one command (or the pipeline) and return its exit code.

    0 when every check passed, 1 when violations were recorded, 2 on an
    engineering failure. The pipeline stops at the first engineering failure
    and returns the worst code of the stages it ran.
    """
    if cmd != "pipeline" and cmd not in COMMANDS:
        raise ValueError(f"Unknown command {cmd!r}")
    ctx = RunContext(cfg)
    try:
        if cmd != "pipeline":
            return _execute_one(cmd, ctx)
        worst = EXIT_OK
        for stage in PIPELINE:
            code = _execute_one(stage, ctx)
            worst = max(worst, code)
            if code == EXIT_FAILURE:
                log.error("Pipeline stopped at %s", stage)
                break
        return worst
    finally:
        ctx.close()


__all__ = [
    "COMMANDS",
    "EXIT_FAILURE",
    "EXIT_OK",
    "EXIT_VIOLATIONS",
    "PIPELINE",
    "build_parser",
    "execute",
    "flags_from_args",
]

"""
Module implements the subcommand drivers: grid fan-out over worker threads
and serialized emission of the ordered output
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from collections.abc import Callable, Iterable, Sequence
from functools import partial
from pathlib import Path
from typing import Any, TypeVar

import numpy as np

from . import log_utils
from .ambient import DEFAULT_TOL, SpaceForm
from .base_catalog import IsoparametricBase
from .classifier import construct_constant_curvature_rotation, verify_theorem
from .config import RunConfig, parse_config, parse_sweep
from .curvature import CurvatureReport, csv_header, curvature_report, report_record
from .errors import ConfigError, GeometryError
from .hypersurface import FrameData, Profile, frame_data
from .state import OutputFormat, RunState
from .suites import get_suite_types, run_suite


T = TypeVar("T")
R = TypeVar("R")

ROTATION_TOL = 1e-8

SWEEP_COLUMNS = [
    "config",
    "base_kind",
    "base_params",
    "profile_family",
    "profile_params",
    "einstein",
    "passed",
    "worst_s",
    "einstein_defect",
    "k_spread",
    "message"
]


async def gather_ordered(func: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> list[R]:
    """
    Runs func over items in at most `jobs` worker threads,
    results come back in the order of items
    """
    semaphore = asyncio.Semaphore(jobs)

    async def worker(item: T) -> R:
        async with semaphore:
            return await asyncio.to_thread(func, item)

    return list(await asyncio.gather(*(worker(item) for item in items)))

def emit(text: str, out_path: str|None = None):
    """
    Writes the output to the given file or stdout
    """
    if out_path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return

    Path(out_path).write_text(text, encoding="utf-8", newline="")
    log_utils.logger.info(f"Output written to '{out_path}'")

def evaluate_point(
    base: IsoparametricBase,
    profile: Profile,
    s: float,
    tol: float = DEFAULT_TOL
) -> tuple[FrameData, CurvatureReport]:
    try:
        fd = frame_data(base, profile, s, tol)
        report = curvature_report(fd, base.sf)

    except GeometryError as e:
        log_utils.logger.error(f"Evaluation failed at s={s:.17g}: {e}")
        raise

    log_utils.logger.debug(f"s={s:.17g}: rho={report.rho}, defect={report.einstein_defect}")
    return fd, report

async def _collect_reports(
    state: RunState,
    points: Sequence[tuple[FrameData, CurvatureReport]]
):
    for idx, (fd, report) in enumerate(points):
        record = report_record(fd, report)
        if state.out_format == "json":
            record.update(report.model_dump(mode="json"))
        await state.add_record(idx, record)

async def _emit_state(state: RunState, out_path: str|None):
    emit(await state.generate_output(), out_path)
    log_utils.logger.info(f"Emitted {len(state)} records, sha256 {await state.get_digest()}")

async def run_report(cfg: RunConfig) -> int:
    """
    Emits one row per grid point of the configured hypersurface
    """
    base = cfg.build_base()
    profile = cfg.build_profile()
    grid = cfg.grid()
    log_utils.logger.info(f"Report over {len(grid)} points: {base.label()}, {profile!r}")

    points = await gather_ordered(
        partial(evaluate_point, base, profile, tol=cfg.tol),
        grid,
        cfg.jobs
    )
    state = RunState(csv_header(cfg.n), cfg.out_format)
    await _collect_reports(state, points)

    await _emit_state(state, cfg.out_path)
    return 0

def _format_params(params: dict[str, Any]) -> str:
    return ";".join(f"{k}={v}" for k, v in params.items() if v is not None)

def _sweep_record(idx: int, cfg: RunConfig) -> dict[str, Any]:
    summary = verify_theorem(cfg.build_base(), cfg.build_profile(), cfg.grid(), cfg.tol)
    if not summary.passed:
        log_utils.logger.error(f"Configuration {idx}: {summary.message}")

    return {
        "config": idx,
        "base_kind": cfg.base.kind.value,
        "base_params": _format_params(cfg.base.model_dump(exclude={"kind"})),
        "profile_family": cfg.profile.family.value,
        "profile_params": _format_params(
            {"path": cfg.profile.path, **cfg.profile.params}
        ),
        "einstein": summary.einstein,
        "passed": summary.passed,
        "worst_s": summary.worst_s,
        "einstein_defect": summary.worst_einstein_defect,
        "k_spread": summary.worst_k_spread,
        "message": summary.message
    }

async def run_sweep(cfgs: Sequence[RunConfig]) -> int:
    """
    Checks the theorem over every configuration of a sweep, one row each

    OUT:
        0 if every configuration passed, 1 otherwise
    """
    if not cfgs:
        return 0

    head = cfgs[0]
    records = await gather_ordered(
        lambda item: _sweep_record(*item),
        list(enumerate(cfgs)),
        head.jobs
    )
    state = RunState(SWEEP_COLUMNS, head.out_format)
    for idx, record in enumerate(records):
        await state.add_record(idx, record)

    await _emit_state(state, head.out_path)
    failed = sum(not r["passed"] for r in records)
    log_utils.logger.info(f"Sweep done: {len(records)} configurations, {failed} failed")
    return 1 if failed else 0

async def run_rotation(
    epsilon: int,
    n: int,
    c: float,
    r: float,
    s_range: tuple[float, float, int],
    tol: float = ROTATION_TOL,
    out_format: OutputFormat = "csv",
    out_path: str|None = None
) -> int:
    """
    Emits the report rows of the constant curvature rotation hypersurface
    """
    sf = SpaceForm.create(epsilon, n)
    start, stop, count = s_range
    grid = np.linspace(start, stop, count).tolist()
    result = await asyncio.to_thread(construct_constant_curvature_rotation, sf, n, c, r, grid, tol)

    state = RunState(csv_header(n), out_format)
    await _collect_reports(state, list(zip(result.frames, result.reports)))
    await _emit_state(state, out_path)
    log_utils.logger.info(
        f"Rotation c={c}: max k_spread {result.summary.max_k_spread:.3e}, "
        f"max defect {result.summary.max_einstein_defect:.3e}"
    )
    return 0

async def run_verify(suite: str, out_path: str|None = None) -> int:
    """
    Runs one verification suite (or all of them) and emits the JSON summary

    OUT:
        0 iff every check passed
    """
    names = list(get_suite_types()) if suite == "all" else [suite]
    results = []
    for name in names:
        results.append(await asyncio.to_thread(run_suite, name))

    emit(
        json.dumps([r.model_dump(mode="json") for r in results], indent=2) + "\n",
        out_path
    )
    return 0 if all(r.passed for r in results) else 1

def _read_document(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")

    except UnicodeDecodeError as e:
        raise ConfigError(f"{path}: config is not valid UTF-8 at byte {e.start}") from e

async def run(args: argparse.Namespace) -> int:
    """
    Dispatches a parsed command line
    """
    overrides = {
        "tol": getattr(args, "tol", None),
        "jobs": getattr(args, "jobs", None),
        "out_format": getattr(args, "format", None),
        "out_path": getattr(args, "out", None)
    }

    match args.command:
        case "report":
            cfg = parse_config(_read_document(args.config), **overrides)
            return await run_report(cfg)

        case "sweep":
            cfgs = parse_sweep(_read_document(args.config), **overrides)
            return await run_sweep(cfgs)

        case "rotation":
            return await run_rotation(
                args.epsilon,
                args.n,
                args.c,
                args.r,
                args.s_range,
                tol=ROTATION_TOL if args.tol is None else args.tol,
                out_format=args.format or "csv",
                out_path=args.out
            )

        case "verify":
            return await run_verify(args.suite, args.out)

    raise ValueError(f"Unknown command '{args.command}'")

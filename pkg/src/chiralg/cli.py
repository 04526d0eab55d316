"""Batch driver: verification suites and cohomology tables.

    chiralg verify     --model FILE --suite NAME --max-weight N
                       --max-poly-degree P [--jobs K] [--out report.json]
    chiralg cohomology --model FILE --target NAME --max-weight N
                       --max-poly-degree P [--jobs K] [--out report.json]

Caps are mandatory: every result is relative to its truncation window.
Exit codes: 0 = all checks pass, 1 = a check failed, 2 = input error.
Reports are byte-identical across runs and worker counts; timing goes to
stderr.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import sys
import time
from typing import Any

from . import reports
from .blocks import CapOverflow
from .modelfile import ModelError, load_model, model_info
from .reports import EXIT_CHECK_FAILED, EXIT_INPUT_ERROR, EXIT_OK
from .suites import (
    SUITE_NAMES,
    TARGET_NAMES,
    cohomology_task_ids,
    run_cohomology_task,
    run_suite_task,
    suite_task_ids,
)


def _verify_worker(args: tuple[str, str, dict, str]) -> dict:
    path, suite, caps, task = args
    spec = load_model(path)
    group = run_suite_task(spec, suite, caps, task)
    return reports.group_payload(group)


def _cohomology_worker(args: tuple[str, str, dict, str]) -> dict:
    path, target, caps, task = args
    spec = load_model(path)
    return run_cohomology_task(spec, target, caps, task)


def _run_pool(worker, arg_list: list, jobs: int) -> list:
    if jobs <= 1 or len(arg_list) <= 1:
        return [worker(args) for args in arg_list]
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, arg_list))


def _emit(report: dict[str, Any], out: str | None) -> None:
    payload = reports.to_bytes(report)
    if out:
        with open(out, "wb") as handle:
            handle.write(payload)
    else:
        sys.stdout.buffer.write(payload)


def _caps(args: argparse.Namespace) -> dict[str, int]:
    if args.max_weight < 0 or args.max_poly_degree < 0:
        raise ModelError("caps must be non-negative")
    return {"max_weight": args.max_weight, "max_poly_degree": args.max_poly_degree}


def cmd_verify(args: argparse.Namespace) -> int:
    caps = _caps(args)
    spec = load_model(args.model)
    tasks = suite_task_ids(spec, args.suite, caps)
    if args.tasks:
        wanted = [t.strip() for t in args.tasks.split(",") if t.strip()]
        unknown = sorted(set(wanted) - set(tasks))
        if unknown:
            raise ModelError(f"unknown tasks for suite {args.suite}: {', '.join(unknown)}")
        tasks = [t for t in tasks if t in wanted]
    started = time.monotonic()
    payloads = _run_pool(
        _verify_worker, [(args.model, args.suite, caps, t) for t in tasks], args.jobs
    )
    elapsed = time.monotonic() - started
    report = {
        "schema": reports.SCHEMA,
        "kind": "verify",
        "suite": args.suite,
        "model": model_info(spec),
        "caps": caps,
        "groups": sorted(payloads, key=lambda g: g["id"]),
        "status": "pass" if all(g["status"] == "pass" for g in payloads) else "fail",
    }
    _emit(report, args.out)
    checks = sum(g["checks_run"] for g in payloads)
    print(
        f"verify suite={args.suite}: {checks} checks, status={report['status']}, "
        f"{elapsed:.1f}s",
        file=sys.stderr,
    )
    return EXIT_OK if report["status"] == "pass" else EXIT_CHECK_FAILED


def cmd_cohomology(args: argparse.Namespace) -> int:
    caps = _caps(args)
    spec = load_model(args.model)
    try:
        tasks = cohomology_task_ids(spec, args.target, caps)
    except ValueError as exc:
        raise ModelError(str(exc)) from exc
    started = time.monotonic()
    partials = _run_pool(
        _cohomology_worker,
        [(args.model, args.target, caps, t) for t in tasks],
        args.jobs,
    )
    elapsed = time.monotonic() - started
    tables: dict[str, list[list[int]]] = {}
    verdicts: list[dict] = []
    notes: set[str] = set()
    block_counts: list[list[int]] = []
    passed = True
    for part in partials:
        for name, rows in part["tables"].items():
            tables.setdefault(name, []).extend(rows)
        verdicts.extend(part["verdicts"])
        notes.update(part["notes"])
        block_counts.extend(part["block_counts"])
        passed = passed and part["passed"]
    report = reports.cohomology_report(
        args.target,
        model_info(spec),
        caps,
        tables,
        verdicts,
        sorted(notes),
        block_counts,
        passed,
    )
    _emit(report, args.out)
    print(
        f"cohomology target={args.target}: status={report['status']}, {elapsed:.1f}s",
        file=sys.stderr,
    )
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chiralg",
        description="Exact verification and cohomology for chiral Lie algebroid complexes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--model", required=True, help="model file (JSON)")
        p.add_argument("--max-weight", type=int, required=True)
        p.add_argument("--max-poly-degree", type=int, required=True)
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--out", default=None, help="write the report here instead of stdout")

    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("--suite", required=True, choices=SUITE_NAMES)
    verify.add_argument(
        "--tasks", default=None,
        help="comma-separated subset of the suite's tasks (default: all)",
    )
    add_common(verify)
    verify.set_defaults(func=cmd_verify)

    cohomology = sub.add_parser("cohomology", help="compute cohomology tables")
    cohomology.add_argument("--target", required=True, choices=TARGET_NAMES)
    add_common(cohomology)
    cohomology.set_defaults(func=cmd_cohomology)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ModelError, CapOverflow, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())

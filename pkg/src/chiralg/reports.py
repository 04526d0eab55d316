"""Deterministic machine-readable reports.

Report payloads are pure data: sorted keys, exact rationals as strings,
no timestamps or timings (timing goes to stderr so reports stay
byte-identical across runs and worker counts).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict
from typing import Any

from .ope import CheckReport

SCHEMA = "chiralg-report/1"

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


def file_digest(path: str) -> str:
    with open(path, "rb") as handle:
        return hashlib.sha256(handle.read()).hexdigest()


def group_payload(group: CheckReport) -> dict[str, Any]:
    return {
        "id": group.name,
        "status": "pass" if group.passed else "fail",
        "checks_run": group.checks_run,
        "failures": [
            {
                "check": f.check,
                "detail": f.detail,
                "witness": f.witness,
            }
            for f in group.failures
        ],
        "notes": sorted(group.notes),
    }


def verify_report(
    suite: str,
    model_info: dict[str, Any],
    caps: dict[str, int],
    groups: list[CheckReport],
) -> dict[str, Any]:
    payload = {
        "schema": SCHEMA,
        "kind": "verify",
        "suite": suite,
        "model": model_info,
        "caps": caps,
        "groups": [group_payload(g) for g in sorted(groups, key=lambda g: g.name)],
        "status": "pass" if all(g.passed for g in groups) else "fail",
    }
    return payload


def cohomology_report(
    target: str,
    model_info: dict[str, Any],
    caps: dict[str, int],
    tables: dict[str, list[list[int]]],
    verdicts: list[dict[str, Any]],
    notes: list[str],
    block_counts: list[list[int]],
    passed: bool,
) -> dict[str, Any]:
    return {
        "schema": SCHEMA,
        "kind": "cohomology",
        "target": target,
        "model": model_info,
        "caps": caps,
        "tables": {name: sorted(rows) for name, rows in sorted(tables.items())},
        "verdicts": sorted(verdicts, key=lambda v: v["id"]),
        "notes": sorted(notes),
        "block_counts": sorted(block_counts),
        "status": "pass" if passed else "fail",
    }


def to_bytes(report: dict[str, Any]) -> bytes:
    return (json.dumps(report, sort_keys=True, indent=2) + "\n").encode("utf-8")

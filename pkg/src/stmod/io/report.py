"""Versioned verification reports.

A report is a list of check records. Records carry a digest of their inputs
and, on failure, a serialized witness that can be replayed. Timings are only
recorded on request so that identical runs write identical bytes.
"""

from __future__ import annotations

import hashlib
import json
import sys
import time
from collections.abc import Iterator
from contextlib import contextmanager
from enum import Enum
from pathlib import Path
from typing import Any

import structlog
from pydantic import BaseModel, Field

from stmod import __version__
from stmod.metrics import metrics

logger = structlog.get_logger(__name__)

SCHEMA_VERSION = 1


class CheckOutcome(str, Enum):
    PASS = "pass"
    FAIL = "fail"


class CheckRecord(BaseModel):
    name: str
    inputs: dict[str, Any]
    inputs_digest: str
    outcome: CheckOutcome
    details: dict[str, Any] = Field(default_factory=dict)
    witness: dict[str, Any] | None = None
    ms: float | None = None


class Report(BaseModel):
    tool: str = "stmod"
    version: str = __version__
    schema_version: int = SCHEMA_VERSION
    config: dict[str, Any] = Field(default_factory=dict)
    checks: list[CheckRecord] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.outcome == CheckOutcome.PASS for check in self.checks)

    @property
    def failures(self) -> list[CheckRecord]:
        return [check for check in self.checks if check.outcome == CheckOutcome.FAIL]

    def extend(self, other: Report) -> None:
        self.checks.extend(other.checks)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2, exclude_none=True) + "\n"


def inputs_digest(inputs: dict[str, Any]) -> str:
    canonical = json.dumps(inputs, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


class ReportBuilder:
    """Collects check records for one report."""

    def __init__(self, config: dict[str, Any], record_timing: bool = False):
        self.report = Report(config=config)
        self.record_timing = record_timing
        self._elapsed: float | None = None

    @contextmanager
    def timed(self) -> Iterator[None]:
        """Time the enclosed block; the next :meth:`add` picks the duration up."""
        start = time.perf_counter()
        try:
            yield
        finally:
            self._elapsed = time.perf_counter() - start

    def add(
        self,
        name: str,
        inputs: dict[str, Any],
        passed: bool,
        details: dict[str, Any] | None = None,
        witness: dict[str, Any] | None = None,
    ) -> CheckRecord:
        outcome = CheckOutcome.PASS if passed else CheckOutcome.FAIL
        elapsed, self._elapsed = self._elapsed, None
        record = CheckRecord(
            name=name,
            inputs=inputs,
            inputs_digest=inputs_digest(inputs),
            outcome=outcome,
            details=details or {},
            witness=witness,
            ms=round(elapsed * 1000, 3) if self.record_timing and elapsed is not None else None,
        )
        self.report.checks.append(record)
        metrics.inc_counter("stmod_checks_total", labels={"check": name, "outcome": outcome.value})
        if elapsed is not None:
            metrics.observe_summary("stmod_check_duration_seconds", elapsed, labels={"check": name})
        if passed:
            logger.info("check_passed", check=name)
        else:
            logger.warning("check_failed", check=name, details=details)
        return record


def write_report(report: Report, out: Path | None = None) -> None:
    """Write the report to ``out``, or to stdout when no path is given."""
    text = report.to_json()
    if out is None:
        sys.stdout.write(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)
    logger.info("report_written", path=str(out), checks=len(report.checks))

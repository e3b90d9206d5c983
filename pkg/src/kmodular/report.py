"""Check outcomes and the JSON verification report."""

from __future__ import annotations

import hashlib
import json
import resource
import time
from dataclasses import dataclass, field

PASS, FAIL, INCONCLUSIVE, VACUOUS = "pass", "fail", "inconclusive", "vacuous"
STATUSES = (PASS, FAIL, INCONCLUSIVE, VACUOUS)


@dataclass
class CheckResult:
    """One verification outcome.

    ``upto`` is the largest ``t2`` the claim is certified for (``None`` when the
    claim is exact); ``detail`` holds JSON-ready witnesses.
    """

    name: str
    status: str
    detail: dict = field(default_factory=dict)
    upto: int | None = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    def __bool__(self) -> bool:
        return self.status in (PASS, VACUOUS)

    def to_json(self) -> dict:
        out = {"name": self.name, "status": self.status, "detail": self.detail}
        if self.upto is not None:
            out["certifiedUpToT"] = self.upto / 2
        return out


def from_bool(name: str, ok: bool, detail: dict | None = None, upto: int | None = None) -> CheckResult:
    return CheckResult(name, PASS if ok else FAIL, detail or {}, upto)


def canonical_json(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"), default=str)


def manifest_hash(manifest: dict) -> str:
    return hashlib.sha256(canonical_json(manifest).encode()).hexdigest()


def exit_code(checks: list[CheckResult]) -> int:
    """0 when everything passes (vacuous counts), 2 on any failure, 3 when only
    inconclusive checks stand in the way."""
    statuses = {c.status for c in checks}
    if FAIL in statuses:
        return 2
    if INCONCLUSIVE in statuses:
        return 3
    return 0


class VerificationReport:
    """Collects checks for one pipeline run.

    Everything except the ``stats`` block is a pure function of the manifest,
    so two runs with the same configuration produce identical JSON there.
    """

    def __init__(self, pipeline: str, manifest: dict):
        self.pipeline = pipeline
        self.manifest = manifest
        self.checks: list[CheckResult] = []
        self.tables: dict = {}
        self._start = time.perf_counter()

    def add(self, check: CheckResult) -> CheckResult:
        self.checks.append(check)
        return check

    def extend(self, checks) -> None:
        for c in checks:
            self.add(c)

    @property
    def exit_code(self) -> int:
        return exit_code(self.checks)

    def summary(self) -> dict:
        counts = {s: 0 for s in STATUSES}
        for c in self.checks:
            counts[c.status] += 1
        return counts

    def to_json(self, stats: bool = True) -> dict:
        out = {
            "pipeline": self.pipeline,
            "manifest": self.manifest,
            "manifestHash": manifest_hash(self.manifest),
            "checks": [c.to_json() for c in self.checks],
            "tables": self.tables,
            "summary": self.summary(),
            "exitCode": self.exit_code,
        }
        if stats:
            out["stats"] = {
                "wallSeconds": round(time.perf_counter() - self._start, 3),
                "maxRssKiB": resource.getrusage(resource.RUSAGE_SELF).ru_maxrss,
            }
        return out

    def dumps(self, stats: bool = True) -> str:
        return json.dumps(self.to_json(stats), indent=2, sort_keys=True, default=str) + "\n"

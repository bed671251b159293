"""Uniform check reports.

Every verifier in the package returns a ValidationReport: a list of named
checks, each pass/fail with an optional witness string naming the offending
tuple and both side values.  Reports serialize to canonical JSON (sorted
keys, stable ordering) so identical runs produce identical bytes.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: str | None = None

    def to_dict(self):
        d = {"name": self.name, "passed": self.passed}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass
class ValidationReport:
    title: str
    checks: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def check(self, name, passed, witness=None):
        self.checks.append(CheckResult(name, bool(passed), witness))
        return passed

    def require(self, name, passed, witness=None):
        """Like check, but only records failures (keeps bulk scans small)."""
        if not passed:
            self.checks.append(CheckResult(name, False, witness))
        return passed

    def tally(self, name, total, failures):
        """Summary line for a scan of `total` cases with collected failures."""
        if failures:
            self.checks.append(CheckResult(name, False, "; ".join(failures[:5])))
        else:
            self.checks.append(CheckResult(f"{name} [{total} cases]", True))

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def to_dict(self):
        return {
            "title": self.title,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "meta": self.meta,
        }

    def summary(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.title} ({len(self.checks)} checks)"


def canonical_json(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()

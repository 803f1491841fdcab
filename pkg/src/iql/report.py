"""Law-check results and their JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

MAX_WITNESSES = 5


@dataclass
class Check:
    """Outcome of one exhaustively quantified law.

    Failures are counted in full but only the first few witnesses are kept,
    in the order the quantifier visits them.
    """

    law: str
    domain_size: int = 0
    failures: int = 0
    witnesses: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def fail(self, witness) -> None:
        self.failures += 1
        if len(self.witnesses) < MAX_WITNESSES:
            self.witnesses.append(witness)

    def expect(self, condition: bool, witness) -> None:
        """Count one instance; ``witness`` may be a thunk, built only on failure."""
        self.domain_size += 1
        if not condition:
            self.fail(witness() if callable(witness) else witness)

    def to_dict(self) -> dict[str, Any]:
        return {
            "law": self.law,
            "domain_size": self.domain_size,
            "pass": self.passed,
            "failures": self.failures,
            "witnesses": self.witnesses,
        }


@dataclass
class LawReport:
    suite: str
    checks: list[Check] = field(default_factory=list)
    observations: dict[str, Any] = field(default_factory=dict)
    skipped: list[str] = field(default_factory=list)

    def check(self, law: str) -> Check:
        c = Check(law)
        self.checks.append(c)
        return c

    def __getitem__(self, law: str) -> Check:
        for c in self.checks:
            if c.law == law:
                return c
        raise KeyError(law)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "suite": self.suite,
            "pass": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }
        if self.observations:
            out["observations"] = self.observations
        if self.skipped:
            out["skipped"] = self.skipped
        return out


def dumps(obj) -> str:
    """Stable JSON text used for every report written to disk or stdout."""
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False) + "\n"

"""Clause results, witnesses and reports shared by every checker."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from combprob.events import Event


class Status(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not-applicable"
    FLAGGED = "flagged"


@dataclass(frozen=True)
class Witness:
    """Concrete evidence for a failed clause.

    ``events`` binds role names to events in the order the clause's
    instance checker expects them, so the failure can be replayed.
    """

    clause: str
    events: tuple[tuple[str, Event], ...] = ()
    expected: Fraction | str | None = None
    actual: Fraction | str | None = None
    note: str = ""

    def event(self, role: str) -> Event:
        for name, ev in self.events:
            if name == role:
                return ev
        raise KeyError(role)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "clause": self.clause,
            "events": {name: str(ev) for name, ev in self.events},
        }
        if self.expected is not None:
            out["expected"] = str(self.expected)
        if self.actual is not None:
            out["actual"] = str(self.actual)
        if self.note:
            out["note"] = self.note
        return out

    def describe(self) -> str:
        parts = [f"{name}={ev}" for name, ev in self.events]
        if self.expected is not None or self.actual is not None:
            parts.append(f"expected {self.expected}, got {self.actual}")
        if self.note:
            parts.append(self.note)
        return "; ".join(parts)


@dataclass(frozen=True)
class ClauseResult:
    clause: str
    status: Status
    witness: Witness | None = None
    detail: str = ""
    failures: int = 0
    readings: tuple[tuple[str, Status, str], ...] = ()

    @property
    def passed(self) -> bool:
        return self.status is not Status.FAIL

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"clause": self.clause, "status": self.status.value}
        if self.detail:
            out["detail"] = self.detail
        if self.failures:
            out["failures"] = self.failures
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        if self.readings:
            out["readings"] = [
                {"reading": name, "status": status.value, "detail": detail}
                for name, status, detail in self.readings
            ]
        return out


@dataclass
class ValidationReport:
    """Ordered clause results; ``ok`` ignores flagged and not-applicable clauses."""

    checks: list[ClauseResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __iter__(self):
        return iter(self.checks)

    def __len__(self) -> int:
        return len(self.checks)

    def __getitem__(self, clause: str) -> ClauseResult:
        for c in self.checks:
            if c.clause == clause:
                return c
        raise KeyError(clause)

    def failures(self) -> list[ClauseResult]:
        return [c for c in self.checks if c.status is Status.FAIL]

    def flagged(self) -> list[ClauseResult]:
        return [c for c in self.checks if c.status is Status.FLAGGED]

    def to_dict(self) -> dict[str, Any]:
        return {"ok": self.ok, "checks": [c.to_dict() for c in self.checks]}

    def render(self) -> str:
        lines = []
        for c in self.checks:
            line = f"{c.status.value.upper():<15} {c.clause}"
            if c.detail:
                line += f"  ({c.detail})"
            lines.append(line)
            if c.witness is not None:
                lines.append(f"{'':15}   witness: {c.witness.describe()}")
            for name, status, detail in c.readings:
                lines.append(f"{'':15}   reading {name}: {status.value}  {detail}".rstrip())
        return "\n".join(lines)

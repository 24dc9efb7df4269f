"""Pass/fail records shared by the verification suites."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass
class Check:
    name: str
    anchor: str
    passed: bool
    checked: int = 0
    witness: Optional[Any] = None
    detail: str = ""

    def to_dict(self) -> dict:
        out = {"name": self.name, "anchor": self.anchor, "status": "pass" if self.passed else "fail",
               "checked": self.checked}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, anchor: str, passed: bool, checked: int = 0, witness=None, detail: str = "") -> Check:
        c = Check(name, anchor, passed, checked, witness, detail)
        self.checks.append(c)
        return c

    def get(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {"title": self.title, "ok": self.ok,
                "checks": [c.to_dict() for c in self.checks],
                "stats": self.stats}

    def lines(self) -> list[str]:
        return [f"[{'PASS' if c.passed else 'FAIL'}] {self.title}: {c.name} ({c.checked} checked)"
                for c in self.checks]


class Tally:
    """Accumulates one named check: a count plus the first few witnesses."""

    def __init__(self, name: str, anchor: str, keep: int = 5):
        self.name = name
        self.anchor = anchor
        self.count = 0
        self.bad: list = []
        self.keep = keep
        self.nbad = 0

    def __call__(self, ok: bool, witness=None):
        self.count += 1
        if not ok:
            self.nbad += 1
            if len(self.bad) < self.keep:
                self.bad.append(witness)

    def into(self, report: Report, detail: str = "") -> Check:
        w = None
        if self.nbad:
            w = {"failures": self.nbad, "examples": self.bad}
        return report.add(self.name, self.anchor, self.nbad == 0, self.count, w, detail)

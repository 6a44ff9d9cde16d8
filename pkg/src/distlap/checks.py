"""Uniform pass/fail records for numeric bound checks."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class BoundCheck:
    """Outcome of one inequality check.

    ``margin`` is oriented so that nonnegative means the bound holds with
    room to spare (before any tolerance is applied).
    """

    name: str
    passed: bool
    value: float
    bound: float
    margin: float
    note: str = ""

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "value": self.value,
            "bound": self.bound,
            "margin": self.margin,
            "note": self.note,
        }

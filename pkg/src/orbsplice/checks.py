"""Pass/fail results shared by the checkers."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a named check.

    ``details`` holds one JSON-ready dict per checked item; ``witnesses``
    carries whatever justifies the verdict (failing items on a FAIL, the
    chosen data on a PASS).
    """

    name: str
    passed: bool | None
    details: tuple = ()
    witnesses: tuple = field(default=())

    @property
    def failures(self) -> list[dict]:
        return [d for d in self.details if d.get("pass") is False]

    def __bool__(self):
        return bool(self.passed)

    def to_json(self) -> dict:
        return {"pass": self.passed, "witnesses": list(self.witnesses), "details": list(self.details)}

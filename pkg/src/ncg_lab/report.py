"""Small pass/fail report container shared by the verification routines."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Report:
    """Named violation measurements compared against one tolerance.

    ``checks`` maps a check name to a measured violation, which passes when it
    is at most ``tol``. ``flags`` holds boolean outcomes that were decided by
    the caller (for example an inequality with its own slack rule).
    """

    name: str
    tol: float
    checks: dict[str, float] = field(default_factory=dict)
    flags: dict[str, bool] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def record(self, key: str, violation: float) -> None:
        """Keep the worst violation seen under ``key``."""
        violation = float(violation)
        self.checks[key] = max(violation, self.checks.get(key, 0.0))

    def flag(self, key: str, ok: bool) -> None:
        self.flags[key] = bool(ok) and self.flags.get(key, True)

    def failures(self) -> list[str]:
        bad = [k for k, v in self.checks.items() if not v <= self.tol]
        bad += [k for k, v in self.flags.items() if not v]
        return bad

    @property
    def passed(self) -> bool:
        return not self.failures()

    def merge(self, other: "Report", prefix: str | None = None) -> None:
        pre = f"{prefix or other.name}."
        for k, v in other.checks.items():
            # rescale so the merged report keeps the sub-report's tolerance
            self.record(pre + k, v * (self.tol / other.tol) if other.tol > 0 else v)
        for k, v in other.flags.items():
            self.flag(pre + k, v)
        self.notes.extend(other.notes)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "tol": self.tol,
            "passed": self.passed,
            "checks": {k: self.checks[k] for k in sorted(self.checks)},
            "flags": {k: self.flags[k] for k in sorted(self.flags)},
            "notes": list(self.notes),
            "data": self.data,
        }

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        worst = max(self.checks.values(), default=0.0)
        return f"{self.name}: {status} (worst violation {worst:.3e}, tol {self.tol:.1e})"

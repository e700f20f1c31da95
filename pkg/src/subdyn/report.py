"""Small result types returned by validators and checkers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, NamedTuple, Optional


@dataclass
class ValidationReport:
    """Ordered list of violated axioms; empty means valid."""

    issues: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def add(self, message: str) -> None:
        self.issues.append(message)

    def extend(self, other: "ValidationReport", prefix: str = "") -> None:
        self.issues.extend(prefix + m for m in other.issues)

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "\n".join(f"- {m}" for m in self.issues)


@dataclass(frozen=True)
class Witness:
    """Pointwise counterexample produced by a failing checker."""

    kind: str
    arrows: tuple[str, ...] = ()
    param: Optional[str] = None
    state: Optional[str] = None
    element: Any = None
    detail: str = ""

    def __str__(self) -> str:
        parts = [self.kind]
        if self.arrows:
            parts.append("arrows=" + ",".join(self.arrows))
        if self.param is not None:
            parts.append(f"param={self.param}")
        if self.state is not None:
            parts.append(f"state={self.state}")
        if self.element is not None:
            parts.append(f"element={self.element}")
        if self.detail:
            parts.append(self.detail)
        return " ".join(parts)


class Verdict(NamedTuple):
    """Boolean outcome plus the first witness found (in canonical order)."""

    ok: bool
    witness: Optional[Witness] = None

    def __bool__(self) -> bool:
        return self.ok


PASS = Verdict(True)

"""
Absolute-plus-relative tolerance carried through the numeric kernel
"""

from dataclasses import dataclass
from typing import Optional

from app.core.config import settings


@dataclass(frozen=True)
class Tolerance:
    """A value v counts as zero at scale s when |v| <= abs_tol + rel_tol * s."""

    abs_tol: float = 1e-9
    rel_tol: float = 1e-9

    @classmethod
    def default(cls) -> "Tolerance":
        return cls(abs_tol=settings.TOL_ABS, rel_tol=settings.TOL_REL)

    def bound(self, scale: float = 1.0) -> float:
        return self.abs_tol + self.rel_tol * abs(scale)

    def is_zero(self, value: float, scale: float = 1.0) -> bool:
        return abs(value) <= self.bound(scale)

    @property
    def sample(self) -> float:
        """Threshold for decisions taken from sampled geometry."""
        return max(1e-6, 1e3 * max(self.abs_tol, self.rel_tol))


def resolve(tol: Optional[Tolerance]) -> Tolerance:
    return tol if tol is not None else Tolerance.default()

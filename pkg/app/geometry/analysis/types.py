"""
Result records of the analysis layer
"""

import enum
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from app.geometry.quat import MPoint


class CoarseType(str, enum.Enum):
    SPHERICAL = "S"
    OFFSET = "O"
    THREE_SPHERES = "A"
    TWO_PLANES = "B"


class Subtype(str, enum.Enum):
    S1 = "S1"
    S2 = "S2"
    S3 = "S3"
    S4 = "S4"
    O1 = "O1"
    O2 = "O2"
    A1 = "A1"
    A2 = "A2"
    A3 = "A3"
    A4 = "A4"
    B = "B"

    @property
    def coarse(self) -> CoarseType:
        return {
            "S": CoarseType.SPHERICAL,
            "O": CoarseType.OFFSET,
            "A": CoarseType.THREE_SPHERES,
            "B": CoarseType.TWO_PLANES,
        }[self.value[0]]


class CurveKind(str, enum.Enum):
    POINT = "point"
    LINE = "line"
    CIRCLE = "circle"
    ELLIPSE = "ellipse"
    HYPERBOLA = "hyperbola"
    PARABOLA = "parabola"
    LINE_PAIR = "line_pair"
    PARALLEL_LINES = "parallel_lines"
    DOUBLE_LINE = "double_line"
    CONIC = "conic"
    CIRCULAR_CUBIC = "circular_cubic"
    BICIRCULAR_QUARTIC = "bicircular_quartic"
    EMPTY = "empty"
    CURVE = "curve"

    @property
    def splits(self) -> bool:
        """Degenerate conic made of lines."""
        return self in (CurveKind.LINE_PAIR, CurveKind.PARALLEL_LINES, CurveKind.DOUBLE_LINE)


# Expected degree per (coarse type, singular-curve shape)
DEGREE_TABLE: Dict[Subtype, int] = {
    Subtype.O1: 4,
    Subtype.O2: 3,
    Subtype.A1: 4,
    Subtype.A2: 4,
    Subtype.A3: 3,
    Subtype.A4: 2,
    Subtype.B: 4,
}


@dataclass
class CurveDescriptor:
    """One singular curve: shape, the parameter direction it comes from, extra data."""

    kind: CurveKind
    direction: Optional[int] = None
    multiplicity: int = 1
    components: Optional[int] = None
    coefficients: Dict[str, float] = field(default_factory=dict)
    confidence: float = 1.0

    def describe(self) -> str:
        text = self.kind.value.replace("_", " ")
        if self.components is not None and self.kind == CurveKind.BICIRCULAR_QUARTIC:
            text = f"{self.components}-oval {text}"
        if self.multiplicity > 1:
            text = f"double {text}" if self.multiplicity == 2 else f"{text} (x{self.multiplicity})"
        return text

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["kind"] = self.kind.value
        return data


@dataclass
class Carrier:
    """M-sphere carrying a singular curve, a|p|^2 + b.p + c = 0."""

    coefficients: Tuple[float, float, float, float, float]
    residual: float = 0.0
    plane: Optional[str] = None

    @property
    def is_plane(self) -> bool:
        return abs(self.coefficients[0]) <= 1e-9 * max(1.0, float(np.abs(self.coefficients).max()))


@dataclass
class TracedCurve:
    """Sampled singular curve with its fitted description."""

    descriptor: CurveDescriptor
    carrier: Optional[Carrier]
    polyline: np.ndarray
    parameters: np.ndarray
    closed: bool = False
    max_jacobian: float = 0.0


@dataclass
class SingularLocus:
    curves: List[TracedCurve] = field(default_factory=list)
    points: List[MPoint] = field(default_factory=list)

    def by_direction(self, direction: int) -> List[TracedCurve]:
        return [c for c in self.curves if c.descriptor.direction == direction]

    def descriptors(self) -> List[CurveDescriptor]:
        return [c.descriptor for c in self.curves]


@dataclass
class Classification:
    coarse: CoarseType
    subtype: Optional[Subtype]
    parameters: Dict[str, float] = field(default_factory=dict)
    singular: List[CurveDescriptor] = field(default_factory=list)
    degree: Optional[int] = None
    notes: List[str] = field(default_factory=list)

    @property
    def label(self) -> str:
        return self.subtype.value if self.subtype is not None else self.coarse.value

    def summary(self) -> str:
        text = self.label
        if self.singular:
            text += ", singular: " + ", ".join(d.describe() for d in self.singular)
        if self.degree is not None:
            text += f", degree {self.degree}"
        return text

    def to_dict(self) -> Dict[str, Any]:
        return {
            "coarse": self.coarse.value,
            "subtype": self.subtype.value if self.subtype else None,
            "parameters": dict(self.parameters),
            "singular": [d.to_dict() for d in self.singular],
            "degree": self.degree,
            "notes": list(self.notes),
        }

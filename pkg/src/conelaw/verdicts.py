"""Result types shared by checkers, the falsifier and reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional


class Status(str, Enum):
    SATISFIED = "Satisfied"
    FALSIFIED = "Falsified"
    INCONCLUSIVE = "Inconclusive"
    # falsifier only: no witness found within the search budget
    SATISFIED_UP_TO_BUDGET = "SatisfiedUpToBudget"

    def holds(self) -> Optional[bool]:
        if self in (Status.SATISFIED, Status.SATISFIED_UP_TO_BUDGET):
            return True
        if self is Status.FALSIFIED:
            return False
        return None


class LiminfClass(str, Enum):
    BOUNDED_BELOW_BY_ZERO = "BoundedBelowByZero"
    NEGATIVE_FINITE = "NegativeFinite"
    DIVERGES = "DivergesToNegInfinity"
    INCONCLUSIVE = "Inconclusive"


PROPERTY_IDS = (
    "H", "Sp", "Cc", "SpStrict", "CcStrict", "LiminfOK",
    "Chain23", "Chain27", "Chain28", "RatioConstant", "S", "Cv",
)


def _floats(seq):
    return tuple(float(v) for v in seq)


@dataclass(frozen=True)
class Witness:
    """Concrete arguments at which a property inequality fails.

    ``violation`` is how far the inequality misses; ``tolerance`` is the
    threshold it was compared against (already scaled).
    """

    property: str
    points: tuple[tuple[float, ...], ...]
    values: tuple[float, ...]
    violation: float
    tolerance: float = 0.0
    lam: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "points": [list(p) for p in self.points],
            "lambda": self.lam,
            "values": list(self.values),
            "violation": self.violation,
            "tolerance": self.tolerance,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Witness":
        return cls(
            property=d["property"],
            points=tuple(_floats(p) for p in d["points"]),
            values=_floats(d["values"]),
            violation=float(d["violation"]),
            tolerance=float(d.get("tolerance", 0.0)),
            lam=None if d.get("lambda") is None else float(d["lambda"]),
        )


@dataclass(frozen=True)
class Verdict:
    property: str
    status: Status
    samples_checked: int
    worst_margin: float
    witness: Optional[Witness] = None
    skipped: int = 0
    method: str = "sampling"
    diagnostics: dict = field(default_factory=dict)

    @property
    def holds(self) -> Optional[bool]:
        return self.status.holds()

    def to_dict(self) -> dict:
        out = {
            "property": self.property,
            "status": self.status.value,
            "samples": self.samples_checked,
            "skipped": self.skipped,
            "worst_margin": self.worst_margin,
            "method": self.method,
            "diagnostics": self.diagnostics,
        }
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "Verdict":
        w = d.get("witness")
        return cls(
            property=d["property"],
            status=Status(d["status"]),
            samples_checked=int(d["samples"]),
            worst_margin=float(d["worst_margin"]),
            witness=None if w is None else Witness.from_dict(w),
            skipped=int(d.get("skipped", 0)),
            method=d.get("method", "sampling"),
            diagnostics=dict(d.get("diagnostics", {})),
        )


@dataclass(frozen=True)
class LiminfEstimate:
    radii: tuple[float, ...]
    shell_infima: tuple[Optional[float], ...]
    classification: LiminfClass
    tolerance: float = 1e-9

    @property
    def ok(self) -> bool:
        return self.classification is LiminfClass.BOUNDED_BELOW_BY_ZERO

    def to_dict(self) -> dict:
        return {
            "radii": list(self.radii),
            "infima": list(self.shell_infima),
            "classification": self.classification.value,
            "tolerance": self.tolerance,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LiminfEstimate":
        return cls(
            radii=_floats(d["radii"]),
            shell_infima=tuple(None if v is None else float(v) for v in d["infima"]),
            classification=LiminfClass(d["classification"]),
            tolerance=float(d.get("tolerance", 1e-9)),
        )

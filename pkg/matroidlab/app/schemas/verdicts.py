from __future__ import annotations

from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


def _ids(values: List[int]) -> str:
    return ",".join(str(v) for v in values) if values else "-"


class Verdict(BaseModel):
    """PASS/FAIL outcome of a checker, with a witness on failure.

    Witness entries are element-id lists keyed by role ("basis", "a", "b", ...).
    Truthiness follows the status so verdicts can be used as predicates.
    """

    status: Literal["PASS", "FAIL"]
    check: str
    witness: Optional[Dict[str, List[int]]] = None
    radius: Optional[int] = None
    bound: Optional[int] = None
    note: Optional[str] = None

    model_config = ConfigDict(extra="forbid")

    @classmethod
    def passed(cls, check: str, **extra: Any) -> "Verdict":
        return cls(status="PASS", check=check, **extra)

    @classmethod
    def failed(cls, check: str, witness: Dict[str, List[int]], **extra: Any) -> "Verdict":
        return cls(status="FAIL", check=check, witness=witness, **extra)

    def __bool__(self) -> bool:
        return self.status == "PASS"

    def line(self) -> str:
        parts = [self.status]
        if self.witness:
            if len(self.witness) == 1:
                (values,) = self.witness.values()
                parts.append(f"witness={_ids(values)}")
            else:
                parts.extend(f"{key}={_ids(values)}" for key, values in self.witness.items())
        if self.radius is not None:
            parts.append(f"radius={self.radius}")
        if self.bound is not None:
            parts.append(f"bound={self.bound}")
        return " ".join(parts)


class BoundReport(BaseModel):
    """Closest-valid-basis distance compared against a conjectured bound."""

    status: Literal["SATISFIED", "VIOLATED", "NO-VALID-BASIS"]
    k: int
    bound: int
    distance: Optional[int] = None
    basis: Optional[List[int]] = None

    model_config = ConfigDict(extra="forbid")

    def line(self) -> str:
        parts = [self.status, f"k={self.k}", f"bound={self.bound}"]
        if self.distance is not None:
            parts.append(f"distance={self.distance}")
        if self.basis is not None:
            parts.append(f"basis={_ids(self.basis)}")
        return " ".join(parts)


class SolverResult(BaseModel):
    """Outcome of one external SAT solver run."""

    status: Literal["SAT", "UNSAT", "UNKNOWN"]
    assignment: Optional[List[bool]] = None
    wall_time_s: float = 0.0
    command: Optional[str] = None
    diagnostics: Optional[str] = None

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def _assignment_iff_sat(self) -> "SolverResult":
        if (self.status == "SAT") != (self.assignment is not None):
            raise ValueError("assignment must be present exactly when status is SAT")
        return self

    def status_line(self) -> str:
        return {
            "SAT": "s SATISFIABLE",
            "UNSAT": "s UNSATISFIABLE",
            "UNKNOWN": "s UNKNOWN",
        }[self.status]


class CriterionReport(BaseModel):
    """Result of one `reproduce` criterion."""

    criterion: str
    status: Literal["PASS", "FAIL", "UNKNOWN"]
    lines: List[str] = Field(default_factory=list)
    seed: Optional[int] = None
    elapsed_s: float = 0.0

    model_config = ConfigDict(extra="forbid")

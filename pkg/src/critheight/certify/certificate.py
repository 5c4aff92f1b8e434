"""Three-valued verdicts on inequalities ``lhs >= rhs`` between enclosures."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any

from ..exactnum.rbound import RBound

PASS = "pass"
VIOLATION = "violation"
INCONCLUSIVE = "inconclusive"


def digest(inputs: dict) -> str:
    """Stable short hash of a JSON-serializable input description."""
    blob = json.dumps(inputs, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class Certificate:
    """Evidence for one inequality ``lhs >= rhs`` at one input.

    ``pass_`` holds only when the whole slack enclosure is non-negative; a
    negative upper endpoint is a proven violation; anything else is
    inconclusive at the precision used.
    """

    statement: str
    anchor: str
    inputs: dict
    lhs: RBound
    rhs: RBound
    witness: Any = None
    prec: int = 0
    vacuous: bool = False
    note: str = ""
    slack: RBound = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "slack", self.lhs - self.rhs)

    @classmethod
    def vacuous_pass(cls, statement: str, anchor: str, inputs: dict, note: str, prec: int = 0) -> "Certificate":
        zero = RBound.zero()
        return cls(statement, anchor, inputs, zero, zero, None, prec, True, note)

    @property
    def input_digest(self) -> str:
        return digest({"statement": self.statement, "inputs": self.inputs})

    @property
    def verdict(self) -> str:
        if self.slack.lo >= 0:
            return PASS
        if self.slack.hi < 0:
            return VIOLATION
        return INCONCLUSIVE

    @property
    def pass_(self) -> bool:
        return self.verdict == PASS

    def to_json(self) -> dict:
        out = {
            "statement": self.statement,
            "anchor": self.anchor,
            "inputs": self.inputs,
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "slack": self.slack.to_json(),
            "verdict": self.verdict,
            "witness": self.witness,
            "prec": self.prec,
        }
        if self.vacuous:
            out["vacuous"] = True
        if self.note:
            out["note"] = self.note
        return out

    def summary(self) -> str:
        return (f"{self.statement} [{self.verdict}] lhs={self.lhs} rhs={self.rhs} "
                f"slack.lo={float(self.slack.lo):.6g}")

"""Verification report records and their canonical JSON form."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .rational import rat_str

PASS = "pass"
FAIL = "fail"
SINGULAR = "singular"
NONCONVERGENT = "nonconvergent"


@dataclass
class Mismatch:
    exponent: object
    lhs: object
    rhs: object

    def to_json_dict(self):
        return {
            "exponent": rat_str(self.exponent),
            "lhs": rat_str(self.lhs),
            "rhs": rat_str(self.rhs),
        }


@dataclass
class VerificationReport:
    case_id: str
    status: str
    order: int
    scale: int
    samples: list = field(default_factory=list)
    first_mismatch: Optional[Mismatch] = None
    terms_used: dict = field(default_factory=dict)
    runtime_ms: int = 0

    def to_json_dict(self):
        return {
            "case_id": self.case_id,
            "status": self.status,
            "order": self.order,
            "scale": self.scale,
            "samples": [
                {p: rat_str(v) for p, v in sorted(s.items())} for s in self.samples
            ],
            "first_mismatch": (
                None if self.first_mismatch is None else self.first_mismatch.to_json_dict()
            ),
            "terms_used": {
                "n": self.terms_used.get("n", 0),
                "j": self.terms_used.get("j"),
            },
            "runtime_ms": self.runtime_ms,
        }

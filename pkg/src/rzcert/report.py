"""Structured pass/fail verdicts with witnesses, shared by all checks."""

from __future__ import annotations

from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"


@dataclass
class VerdictReport:
    check: str
    status: str
    residuals: dict = field(default_factory=dict)
    witness: dict | None = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status == FAIL and self.witness is None:
            raise ValueError("failed verdicts must carry a witness")

    @property
    def ok(self):
        return self.status == PASS

    def to_json_dict(self):
        out = {"check": self.check, "status": self.status,
               "residuals": dict(self.residuals), "details": dict(self.details)}
        if self.witness is not None:
            out["witness"] = dict(self.witness)
        return out

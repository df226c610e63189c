"""Inequality records shared by certificates and bound checks."""

from __future__ import annotations

import operator
from dataclasses import dataclass, field
from fractions import Fraction

_OPS = {
    "<=": operator.le,
    "<": operator.lt,
    ">=": operator.ge,
    ">": operator.gt,
    "==": operator.eq,
}


def encode_number(v):
    """JSON-safe value; rationals keep their exact form."""
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return int(v)
        return {"rational": f"{v.numerator}/{v.denominator}", "approx": float(v)}
    if isinstance(v, bool):
        return v
    if isinstance(v, int):
        return v
    return float(v)


def decode_number(v):
    if isinstance(v, dict) and "rational" in v:
        return Fraction(v["rational"])
    return v


@dataclass
class Inequality:
    """``lhs op rhs``; ``slack`` relaxes float comparisons toward holding."""

    name: str
    lhs: object
    op: str
    rhs: object
    slack: float = 0.0

    @property
    def holds(self) -> bool:
        lhs, rhs = self.lhs, self.rhs
        if self.slack:
            if self.op in ("<=", "<"):
                rhs = rhs + self.slack
            elif self.op in (">=", ">"):
                rhs = rhs - self.slack
        return bool(_OPS[self.op](lhs, rhs))

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "lhs": encode_number(self.lhs),
            "op": self.op,
            "rhs": encode_number(self.rhs),
            "holds": self.holds,
        }
        if self.slack:
            out["slack"] = self.slack
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "Inequality":
        return cls(data["name"], decode_number(data["lhs"]), data["op"],
                   decode_number(data["rhs"]), data.get("slack", 0.0))


@dataclass
class CheckReport:
    name: str
    inequalities: list[Inequality] = field(default_factory=list)
    details: dict = field(default_factory=dict)
    findings: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(q.holds for q in self.inequalities)

    def add(self, name, lhs, op, rhs, slack=0.0) -> Inequality:
        q = Inequality(name, lhs, op, rhs, slack)
        self.inequalities.append(q)
        return q

    def failures(self) -> list[Inequality]:
        return [q for q in self.inequalities if not q.holds]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "inequalities": [q.to_dict() for q in self.inequalities],
            "details": self.details,
            "findings": self.findings,
        }

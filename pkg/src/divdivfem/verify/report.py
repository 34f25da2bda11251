"""Machine-readable verification reports."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from ..rational import Rational, rat_str


def _jsonable(x):
    if isinstance(x, Rational) or type(x).__name__ in ("mpq", "Fraction"):
        return rat_str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


@dataclass
class VerificationReport:
    claim: str
    status: str = "pass"
    dims: dict = field(default_factory=dict)
    ranks: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    millis: int = 0

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def fail(self, witness) -> "VerificationReport":
        self.status = "fail"
        self.witnesses.append(witness)
        return self

    def require(self, condition: bool, witness) -> bool:
        """Record a failure witness when the condition is false."""
        if not condition:
            self.fail(witness)
        return condition

    def to_dict(self) -> dict:
        return {
            "claim": self.claim,
            "status": self.status,
            "dims": _jsonable(self.dims),
            "ranks": _jsonable(self.ranks),
            "witnesses": _jsonable(self.witnesses),
            "millis": self.millis,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


class Timer:
    def __enter__(self):
        self.t0 = time.time()
        return self

    def __exit__(self, *exc):
        self.millis = int((time.time() - self.t0) * 1000)
        return False

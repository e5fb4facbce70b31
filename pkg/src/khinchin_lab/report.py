"""Verdict records shared by every checker."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    REJECTED = "rejected"


@dataclass(frozen=True)
class Quantity:
    name: str
    value: float
    uncertainty: float = 0.0

    def as_dict(self) -> dict:
        return {"quantity": self.name, "value": _num(self.value),
                "uncertainty": _num(self.uncertainty)}


@dataclass
class LemmaReport:
    """Outcome of one check.

    ``margin`` is already widened by the uncertainties, so ``pass`` holds
    exactly when ``margin >= 0``.  ``rejected`` means a precondition failed
    and nothing was evaluated.
    """

    lemma_id: str
    inputs: dict[str, Any] = field(default_factory=dict)
    computed: list[Quantity] = field(default_factory=list)
    paper_bound: float = math.nan
    margin: float = math.nan
    verdict: Verdict = Verdict.FAIL
    notes: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def add(self, name: str, value: float, uncertainty: float = 0.0) -> None:
        self.computed.append(Quantity(name, float(value), float(uncertainty)))

    def note(self, text: str) -> None:
        self.notes = f"{self.notes}; {text}" if self.notes else text

    def as_dict(self) -> dict:
        return {"lemma_id": self.lemma_id, "inputs": _jsonable(self.inputs),
                "computed": [q.as_dict() for q in self.computed],
                "paper_bound": _num(self.paper_bound), "margin": _num(self.margin),
                "verdict": self.verdict.value, "notes": self.notes}


def judge(lemma_id: str, margin: float, **kw) -> LemmaReport:
    """Build a report whose verdict follows from the sign of ``margin``."""
    ok = math.isfinite(margin) and margin >= 0
    return LemmaReport(lemma_id, margin=margin, verdict=Verdict.PASS if ok else Verdict.FAIL, **kw)


def rejected(lemma_id: str, reason: str, **kw) -> LemmaReport:
    return LemmaReport(lemma_id, verdict=Verdict.REJECTED, notes=reason, **kw)


def _num(x):
    if hasattr(x, "item"):
        x = x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return x


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, float):
        return _num(obj)
    if isinstance(obj, (int, str, bool)) or obj is None:
        return obj
    if hasattr(obj, "item"):
        return _jsonable(obj.item())
    return str(obj)

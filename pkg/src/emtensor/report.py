"""Pass/fail reports with witnesses, shared by every checker."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable

import numpy as np

from .finset import FinSet, first_difference


@dataclass
class Report:
    name: str
    passed: bool
    witness: Any = None
    details: dict = field(default_factory=dict)
    children: list["Report"] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.passed

    @classmethod
    def combine(cls, name: str, children: Iterable["Report"], **details) -> "Report":
        children = list(children)
        failed = next((c for c in children if not c.passed), None)
        return cls(
            name,
            failed is None,
            None if failed is None else {"check": failed.name, "witness": failed.witness},
            details,
            children,
        )

    @classmethod
    def compare(cls, name: str, lhs, rhs, domain: FinSet | None = None, cod: FinSet | None = None,
                **details) -> "Report":
        """Elementwise equality of two arrays indexed by ``domain``."""
        lhs = np.asarray(lhs)
        rhs = np.asarray(rhs)
        if lhs.shape != rhs.shape:
            return cls(name, False, {"shape": [list(lhs.shape), list(rhs.shape)]}, details)
        i = first_difference(lhs, rhs)
        if i is None:
            details.setdefault("points", int(lhs.size))
            return cls(name, True, None, details)
        lv, rv = lhs.flat[i], rhs.flat[i]
        witness = {
            "element": domain.label(i) if domain is not None and lhs.ndim == 1 else int(i),
            "lhs": cod.label(lv) if cod is not None else int(lv),
            "rhs": cod.label(rv) if cod is not None else int(rv),
        }
        return cls(name, False, witness, details)

    def failures(self) -> list["Report"]:
        if self.passed:
            return []
        if not self.children:
            return [self]
        out = []
        for c in self.children:
            out.extend(c.failures())
        return out or [self]

    def to_json(self, depth: int = 3) -> dict:
        out: dict = {"name": self.name, "status": "pass" if self.passed else "fail"}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        if self.details:
            out["details"] = _jsonable(self.details)
        if self.children and depth > 0:
            out["checks"] = [c.to_json(depth - 1) for c in self.children]
        elif self.children:
            out["checks_passed"] = sum(c.passed for c in self.children)
            out["checks_total"] = len(self.children)
        return out


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)

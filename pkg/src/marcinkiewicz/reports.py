"""Verification reports and their JSON/CSV serialization.

Floats are written with 17 significant digits in JSON and 10 in CSV, in a
fixed key order, so equal inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

# summary key each tolerance entry is compared against
_TOLERANCE_KEYS = {"spread": "spread", "residual": "residual_max", "max": "max"}

SUMMARY_KEYS = ("min", "max", "spread", "residual_max")
CSV_COLUMNS = ("kind", "theorem", "family", "member", "x", "lhs", "rhs", "ratio",
               "min", "max", "spread", "residual_max", "pass", "runtime_ms")


def decide(summary: dict, tolerance: dict) -> bool:
    """Pass flag: every present summary value finite and each toleranced one below its bound."""
    for v in summary.values():
        if v is not None and not math.isfinite(v):
            return False
    for key, bound in tolerance.items():
        value = summary.get(_TOLERANCE_KEYS.get(key, key))
        if value is None or not value < bound:
            return False
    return True


def ratio_summary(ratios, residual=None) -> dict:
    r = np.asarray(ratios, dtype=float)
    if r.size == 0:
        return {"min": None, "max": None, "spread": None, "residual_max": residual}
    lo, hi = float(r.min()), float(r.max())
    return {"min": lo, "max": hi, "spread": hi / lo if lo > 0 else math.inf, "residual_max": residual}


@dataclass
class VerificationReport:
    theorem: str
    family: str
    config: dict
    points: list
    summary: dict
    tolerance: dict
    runtime_ms: float = 0.0
    extras: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return decide(self.summary, self.tolerance)

    def to_dict(self, include_runtime: bool = True) -> dict:
        return {
            "theorem": self.theorem,
            "family": self.family,
            "config": self.config,
            "points": self.points,
            "summary": self.summary,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "runtime_ms": self.runtime_ms if include_runtime else None,
            "extras": self.extras,
        }

    def to_json(self, include_runtime: bool = True) -> str:
        return _dump(self.to_dict(include_runtime)) + "\n"

    def to_csv(self, include_runtime: bool = True) -> str:
        buf = io.StringIO()
        for k, v in _flatten(self.config):
            buf.write(f"# {k}={v}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for p in self.points:
            w.writerow(["point", self.theorem, self.family, p.get("member", ""), _cell(p.get("x")),
                        _cell(p.get("lhs")), _cell(p.get("rhs")), _cell(p.get("ratio")),
                        "", "", "", "", "", ""])
        s = self.summary
        w.writerow(["summary", self.theorem, self.family, "", "", "", "", "",
                    _cell(s.get("min")), _cell(s.get("max")), _cell(s.get("spread")),
                    _cell(s.get("residual_max")), str(self.passed).lower(),
                    _cell(self.runtime_ms) if include_runtime else ""])
        return buf.getvalue()

    @classmethod
    def from_dict(cls, d: dict) -> VerificationReport:
        return cls(d["theorem"], d["family"], d["config"], d["points"], d["summary"],
                   d["tolerance"], d.get("runtime_ms") or 0.0, d.get("extras", {}))

    @classmethod
    def from_json(cls, text: str) -> VerificationReport:
        return cls.from_dict(json.loads(text))


def _cell(v, digits: int = 10) -> str:
    if v is None:
        return ""
    if isinstance(v, (list, tuple, np.ndarray)):
        return ";".join(_cell(u, digits) for u in v)
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.{digits}g}"
    return str(v)


def _flatten(d, prefix=""):
    for k in d:
        v = d[k]
        if isinstance(v, dict):
            yield from _flatten(v, f"{prefix}{k}.")
        else:
            yield f"{prefix}{k}", _cell(v, 17)


def _dump(obj, indent: int = 0) -> str:
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_dump(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(_dump(v, indent + 1) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + _dump(v, indent + 1) for v in seq) + "\n" + end + "]"
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if not math.isfinite(v):
            return "null"
        text = f"{v:.17g}"
        return text if any(c in text for c in ".en") else text + ".0"
    return json.dumps(str(obj))

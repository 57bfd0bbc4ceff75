"""Verification reports: per-check margins, tolerances and pass flags.

Margin conventions:

* ``eq``   -- margin = |lhs - rhs|; passes iff margin <= tolerance.
* ``ge``   -- margin = lhs - rhs (slack); passes iff margin >= -tolerance.
* ``le``   -- margin = rhs - lhs (slack); passes iff margin >= -tolerance.
* ``info`` -- measured and reported only; tolerance is null and it always passes.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from importlib import resources
from typing import Iterable

KINDS = ("eq", "ge", "le", "info")


@dataclass(frozen=True)
class Check:
    check_id: str
    anchor: str
    kind: str
    lhs: float
    rhs: float
    margin: float
    tolerance: float | None
    passed: bool
    note: str = ""

    @classmethod
    def make(cls, check_id, anchor, kind, lhs, rhs, tolerance=None, note="") -> "Check":
        lhs, rhs = float(lhs), float(rhs)
        if kind == "eq":
            margin = abs(lhs - rhs)
            passed = margin <= tolerance
        elif kind == "ge":
            margin = lhs - rhs
            passed = margin >= -tolerance
        elif kind == "le":
            margin = rhs - lhs
            passed = margin >= -tolerance
        elif kind == "info":
            margin = lhs - rhs
            passed, tolerance = True, None
        else:
            raise ValueError(f"unknown check kind {kind!r}")
        if not (math.isfinite(lhs) and math.isfinite(rhs)):
            passed = kind == "info"
        return cls(check_id, anchor, kind, lhs, rhs, margin, tolerance, bool(passed), note)


def equal(check_id, anchor, lhs, rhs, tol, note="") -> Check:
    return Check.make(check_id, anchor, "eq", lhs, rhs, tol, note)


def at_least(check_id, anchor, lhs, rhs, tol, note="") -> Check:
    return Check.make(check_id, anchor, "ge", lhs, rhs, tol, note)


def at_most(check_id, anchor, lhs, rhs, tol, note="") -> Check:
    return Check.make(check_id, anchor, "le", lhs, rhs, tol, note)


def info(check_id, anchor, lhs, rhs, note="") -> Check:
    return Check.make(check_id, anchor, "info", lhs, rhs, None, note)


def worst(check_id, anchor, kind, pairs: Iterable[tuple[float, float]], tol, note="") -> Check:
    """Collapse many (lhs, rhs) samples into the single least favourable row."""
    rows = [Check.make(check_id, anchor, kind, a, b, tol) for a, b in pairs]
    if not rows:
        raise ValueError("worst() needs at least one sample")
    if kind == "eq":
        key = max(rows, key=lambda c: c.margin)
    else:
        key = min(rows, key=lambda c: c.margin)
    suffix = f"worst of {len(rows)}"
    return Check(key.check_id, anchor, kind, key.lhs, key.rhs, key.margin, key.tolerance,
                 all(r.passed for r in rows), f"{note}; {suffix}" if note else suffix)


@dataclass
class VerificationReport:
    suite: str
    checks: list[Check] = field(default_factory=list)
    seeds: dict = field(default_factory=dict)
    mode: str = "canonical"
    wall_clock: float | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def extend(self, other: "VerificationReport") -> None:
        self.checks.extend(other.checks)
        self.seeds.update(other.seeds)

    def to_dict(self, *, timing: bool = False) -> dict:
        doc = {
            "suite": self.suite,
            "mode": self.mode,
            "seeds": dict(self.seeds),
            "passed": self.passed,
            "checks": [asdict(c) for c in self.checks],
        }
        if timing and self.wall_clock is not None:
            doc["wall_clock_seconds"] = self.wall_clock
        return doc

    def to_json(self, *, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing=timing), indent=2, sort_keys=True, allow_nan=False) + "\n"

    @classmethod
    def from_dict(cls, doc: dict) -> "VerificationReport":
        checks = [Check(**c) for c in doc["checks"]]
        return cls(doc["suite"], checks, dict(doc.get("seeds", {})), doc.get("mode", "canonical"),
                   doc.get("wall_clock_seconds"))

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        return cls.from_dict(json.loads(text))

    def to_table(self) -> str:
        header = ("check", "anchor", "kind", "lhs", "rhs", "margin", "tol", "pass")
        rows = [header]
        for c in self.checks:
            tol = "-" if c.tolerance is None else f"{c.tolerance:.0e}"
            rows.append((c.check_id, c.anchor, c.kind, f"{c.lhs:.9f}", f"{c.rhs:.9f}",
                         f"{c.margin:.3e}", tol, "PASS" if c.passed else "FAIL"))
        widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
        status = "PASS" if self.passed else "FAIL"
        n_fail = len(self.failures())
        lines.append(f"suite={self.suite} mode={self.mode} checks={len(self.checks)} failed={n_fail} -> {status}")
        return "\n".join(lines) + "\n"


def report_schema() -> dict:
    text = resources.files("qcoherence").joinpath("schemas/report.schema.json").read_text()
    return json.loads(text)

"""Certificate reports: ordered cases with margins and a verdict."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List

from .. import jsonio


def case_passes(margin: float, tolerance: float) -> bool:
    return bool(margin >= -tolerance)


@dataclass
class CertificateReport:
    """One suite run. ``verdict`` is ``"pass"`` iff every case passes."""

    suite: str
    cases: List[dict]
    seed: int
    trials: int
    tolerance: float
    summary: dict = field(default_factory=dict)

    @property
    def failures(self) -> List[dict]:
        return [c for c in self.cases if not c["pass"]]

    @property
    def min_margin(self) -> float:
        finite = [c["margin"] for c in self.cases if not math.isnan(c["margin"])]
        return min(finite) if finite else math.inf

    @property
    def verdict(self) -> str:
        return "pass" if all(c["pass"] for c in self.cases) else "fail"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "verdict": self.verdict,
            "min_margin": self.min_margin,
            "seed": self.seed,
            "trials": self.trials,
            "tolerance": self.tolerance,
            "n_cases": len(self.cases),
            "n_failed": len(self.failures),
            "summary": self.summary,
            "cases": self.cases,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CertificateReport":
        return cls(suite=d["suite"], cases=list(d["cases"]), seed=d["seed"],
                   trials=d["trials"], tolerance=d["tolerance"],
                   summary=dict(d.get("summary", {})))

    def to_json(self) -> str:
        return jsonio.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "CertificateReport":
        return cls.from_dict(jsonio.loads(text))

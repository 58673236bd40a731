"""Pass/fail certificates with numeric margins, and their serialization."""
from __future__ import annotations

import json
from dataclasses import dataclass

# a certificate passes when its margin is non-negative up to rounding slack
PASS_SLACK = 1e-9


@dataclass(frozen=True)
class CertificateReport:
    """Outcome of one named inequality/identity check at one parameter point.

    margin >= 0 means the check holds (raw floating-point difference, in the
    units of the quantity checked); passed is derived from the margin.
    """

    name: str
    point: tuple[tuple[str, float], ...]
    margin: float
    passed: bool

    @classmethod
    def make(cls, name: str, point: dict[str, float] | None,
             margin: float) -> "CertificateReport":
        pt = tuple(sorted((point or {}).items()))
        return cls(name=name, point=pt, margin=float(margin),
                   passed=bool(margin >= -PASS_SLACK))

    def point_dict(self) -> dict[str, float]:
        return dict(self.point)

    def describe(self) -> str:
        pt = ", ".join(f"{k}={v:.6g}" for k, v in self.point)
        status = "pass" if self.passed else "FAIL"
        return f"{status}  {self.name} [{pt}] margin={self.margin:.6g}"


def to_json_lines(reports) -> str:
    """One JSON object per line: {name, lambda, nu, zeta, margin, pass}."""
    lines = []
    for r in reports:
        pt = r.point_dict()
        rec = {
            "name": r.name,
            "lambda": pt.get("lambda"),
            "nu": pt.get("nu"),
            "zeta": pt.get("zeta"),
            "margin": r.margin,
            "pass": r.passed,
        }
        for key, val in pt.items():
            if key not in ("lambda", "nu", "zeta"):
                rec[key] = val
        lines.append(json.dumps(rec, sort_keys=True))
    return "\n".join(lines) + "\n"


def all_passed(reports) -> bool:
    return all(r.passed for r in reports)

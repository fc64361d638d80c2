"""Named identity checks with both sides and a pass/fail verdict."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

__all__ = ["VerificationReport", "equality_report", "inequality_report"]


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one identity or inequality check.

    ``relation`` is ``"eq"`` (``|lhs - rhs| <= tolerance + quad_error``),
    ``"le"`` (``lhs <= rhs + tolerance``) or ``"between"`` (strict two-sided
    bound, details in ``metadata``).
    """

    identity_name: str
    lhs: float
    rhs: float
    abs_diff: float
    tolerance: float
    passed: bool
    relation: str = "eq"
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "VerificationReport":
        return cls(**data)


def _clean(meta):
    out = {}
    for k, v in meta.items():
        if hasattr(v, "item"):
            v = v.item()
        out[k] = v
    return out


def equality_report(name, lhs, rhs, tolerance, quad_error=0.0, **metadata):
    diff = abs(lhs - rhs)
    meta = _clean(dict(metadata, quad_error=float(quad_error)))
    passed = math.isfinite(diff) and diff <= tolerance + quad_error
    return VerificationReport(name, float(lhs), float(rhs), float(diff), float(tolerance), bool(passed), "eq", meta)


def inequality_report(name, lhs, rhs, tolerance, **metadata):
    diff = abs(lhs - rhs)
    passed = lhs <= rhs + tolerance
    meta = _clean(dict(metadata, margin=float(rhs - lhs)))
    return VerificationReport(name, float(lhs), float(rhs), float(diff), float(tolerance), bool(passed), "le", meta)

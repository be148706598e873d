"""Numeric tolerances, overridable through the GROUPALG_TOL environment variable.

Two tiers: EXACT (1e-12) for identities that are permutation-plus-conjugation
exact in floating point, ACCUM (1e-9) for identities built from sums of
products, where rounding accumulates.  Set GROUPALG_TOL to a single number to
override both, or to "exact,accum" to set them separately.
"""

from __future__ import annotations

import os

EXACT = 1e-12
ACCUM = 1e-9


def _parse_env() -> tuple[float, float]:
    raw = os.environ.get("GROUPALG_TOL", "").strip()
    if not raw:
        return EXACT, ACCUM
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) == 1:
        v = float(parts[0])
        return v, v
    return float(parts[0]), float(parts[1])


def exact_tol(override: float | None = None) -> float:
    if override is not None:
        return override
    return _parse_env()[0]


def accum_tol(override: float | None = None) -> float:
    if override is not None:
        return override
    return _parse_env()[1]

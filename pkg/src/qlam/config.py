"""Global numeric tolerance.

A single tolerance governs coefficient comparison, norm checks, orthogonality
tests, and isometry validation. Exact structural operations (canonicalization,
alpha-equivalence, substitution) never consult it.
"""

from __future__ import annotations

from contextlib import contextmanager
from typing import Iterator

DEFAULT_TOLERANCE = 1e-6

_tolerance = DEFAULT_TOLERANCE


def get_tolerance() -> float:
    return _tolerance


def set_tolerance(value: float) -> None:
    if not value > 0:
        raise ValueError(f"tolerance must be positive, got {value!r}")
    global _tolerance
    _tolerance = float(value)


@contextmanager
def tolerance(value: float) -> Iterator[None]:
    """Temporarily override the global tolerance."""
    old = get_tolerance()
    set_tolerance(value)
    try:
        yield
    finally:
        set_tolerance(old)

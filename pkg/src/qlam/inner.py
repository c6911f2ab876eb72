"""Pseudo inner product on value distributions.

Two value distributions pair up summand by summand: alpha-equivalent value
terms contribute the product of conjugated left coefficient and right
coefficient, distinct terms contribute nothing.  This makes distinct pure
values an orthonormal family by construction.  Only value distributions have
an inner product; anything else is a usage error.
"""

from __future__ import annotations

import math

from .config import get_tolerance
from .syntax import Distribution, canonicalize, is_value, show_term, term_key


def inner_product(v: Distribution, w: Distribution) -> complex:
    _require_values(v)
    _require_values(w)
    left: dict[tuple, complex] = {}
    for a, t in canonicalize(v).summands:
        left[term_key(t)] = a
    out = 0j
    for b, t in canonicalize(w).summands:
        a = left.get(term_key(t))
        if a is not None:
            out += a.conjugate() * b
    return out


def orthogonal(v: Distribution, w: Distribution, tol: float | None = None) -> bool:
    """|<v|w>| <= tol.  Pass tol=0.0 to demand an exact zero."""
    if tol is None:
        tol = get_tolerance()
    return abs(inner_product(v, w)) <= tol


def norm(v: Distribution) -> float:
    ip = inner_product(v, v)
    # the self inner product is a sum of |a|^2, so real and nonnegative
    return math.sqrt(max(ip.real, 0.0))


def _require_values(d: Distribution) -> None:
    for _, t in d.summands:
        if not is_value(t):
            raise ValueError(
                f"inner products are defined on value distributions only, got {show_term(t)}"
            )

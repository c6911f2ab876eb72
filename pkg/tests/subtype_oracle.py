"""Brute-force derivation search for the subtyping relation.

Independent cross-check for types.subtype: enumerate every type up to a size
bound, seed the declarative axioms, then saturate under congruence and
transitivity until nothing changes.  The only thing shared with the
implementation under test is the Type AST itself.

Rules seeded or closed over:

    refl        A <= A
    lift        A <= #A
    collapse    ##A <= #A
    sum/prod    components covariant
    arrow       domain contravariant, codomain covariant
    trans       closure

There is deliberately no congruence rule under Sharp.  The universe is padded
two sizes past the largest type being queried so transitivity chains have room
for intermediate types; padding is a heuristic, but the equivalence test runs
both directions on every small pair, so a gap would show up as a mismatch.
"""

from __future__ import annotations

import numpy as np

from qlam.types import Arrow, Prod, Sharp, Sum, Type, Unit


def enumerate_types(max_size: int) -> list[Type]:
    """All types over {U, #, +, *, ->} with node count <= max_size."""
    by_size: dict[int, list[Type]] = {1: [Unit()]}
    for size in range(2, max_size + 1):
        layer: list[Type] = [Sharp(t) for t in by_size[size - 1]]
        for left_size in range(1, size - 1):
            for a in by_size[left_size]:
                for b in by_size[size - 1 - left_size]:
                    layer.append(Sum(a, b))
                    layer.append(Prod(a, b))
                    layer.append(Arrow(a, b))
        by_size[size] = layer
    out: list[Type] = []
    for size in range(1, max_size + 1):
        out.extend(by_size[size])
    return out


def _transitive_close(rel: np.ndarray) -> np.ndarray:
    while True:
        step = (rel.astype(np.uint8) @ rel.astype(np.uint8)) > 0
        grown = rel | step
        if (grown == rel).all():
            return rel
        rel = grown


def _congruence_sweep(rel, members, lefts, rights, contra) -> bool:
    if len(members) == 0:
        return False
    left_ok = rel[np.ix_(lefts, lefts)]
    if contra:
        left_ok = left_ok.T
    mask = left_ok & rel[np.ix_(rights, rights)]
    block = rel[np.ix_(members, members)]
    if (mask & ~block).any():
        rel[np.ix_(members, members)] = block | mask
        return True
    return False


class DerivationSearch:
    """Saturated subtyping over a finite universe of types."""

    def __init__(self, query_size: int, padding: int = 2):
        self.query_size = query_size
        self.universe = enumerate_types(query_size + padding)
        self.index = {t: i for i, t in enumerate(self.universe)}
        self.rel = self._saturate()

    def _saturate(self) -> np.ndarray:
        index = self.index
        n = len(self.universe)
        rel = np.zeros((n, n), dtype=bool)
        np.fill_diagonal(rel, True)
        for t, i in index.items():
            lifted = index.get(Sharp(t))
            if lifted is not None:
                rel[i, lifted] = True
                doubled = index.get(Sharp(Sharp(t)))
                if doubled is not None:
                    rel[doubled, lifted] = True

        groups = []
        for kind, contra in ((Sum, False), (Prod, False), (Arrow, True)):
            members, lefts, rights = [], [], []
            for t, i in index.items():
                if isinstance(t, kind):
                    members.append(i)
                    if kind is Arrow:
                        lefts.append(index[t.dom])
                        rights.append(index[t.cod])
                    else:
                        lefts.append(index[t.left])
                        rights.append(index[t.right])
            groups.append(
                (np.array(members), np.array(lefts), np.array(rights), contra)
            )

        while True:
            rel = _transitive_close(rel)
            if not any(_congruence_sweep(rel, *g) for g in groups):
                return rel

    def derivable(self, a: Type, b: Type) -> bool:
        return bool(self.rel[self.index[a], self.index[b]])

    def query_types(self) -> list[Type]:
        """The types small enough to be queried reliably (<= query_size)."""
        return [t for t in self.universe if _size(t) <= self.query_size]


def _size(a: Type) -> int:
    match a:
        case Unit():
            return 1
        case Sharp(inner):
            return 1 + _size(inner)
        case Sum(l, r) | Prod(l, r) | Arrow(l, r):
            return 1 + _size(l) + _size(r)
        case _:
            raise TypeError(f"not a type: {a!r}")

"""Pure terms and term distributions.

Terms come in two layers.  Pure values are variables, annotated abstractions,
the unit value, pairs of values, and injections of values.  Pure terms add
application, sequencing, pair destructuring and case analysis.  A distribution
is a non-empty formal complex-linear combination of pure terms; distributions
are what reduction and typing operate on.  A zero coefficient is data, not
nothing: 1·inl⋆ + 0·inr⋆ and inl⋆ are distinct distributions.

Distributions are compared up to a congruence generated by commutativity,
associativity, coefficient merging and scaling.  `canonicalize` picks the
representative (alpha-equivalent summands merged by coefficient addition,
summands sorted by a fixed structural order) and `congruent` compares two
distributions through it.  Distributions nested inside terms (bodies, tails,
branches) are plain syntax and are compared only up to alpha-equivalence in
the given summand order.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from itertools import count

from .config import get_tolerance
from .types import Type, type_key


class PureTerm:
    __slots__ = ()

    def __str__(self) -> str:
        return show_term(self)


@dataclass(frozen=True, slots=True)
class Var(PureTerm):
    name: str


@dataclass(frozen=True, slots=True)
class Lam(PureTerm):
    name: str
    ann: Type
    body: "Distribution"


@dataclass(frozen=True, slots=True)
class Void(PureTerm):
    """The unit value, written ⋆ (surface syntax: `*`)."""


@dataclass(frozen=True, slots=True)
class PairV(PureTerm):
    first: PureTerm
    second: PureTerm

    def __post_init__(self) -> None:
        if not (is_value(self.first) and is_value(self.second)):
            raise ValueError("pair components must be pure values")


@dataclass(frozen=True, slots=True)
class InlV(PureTerm):
    value: PureTerm

    def __post_init__(self) -> None:
        if not is_value(self.value):
            raise ValueError("injection argument must be a pure value")


@dataclass(frozen=True, slots=True)
class InrV(PureTerm):
    value: PureTerm

    def __post_init__(self) -> None:
        if not is_value(self.value):
            raise ValueError("injection argument must be a pure value")


@dataclass(frozen=True, slots=True)
class App(PureTerm):
    fun: PureTerm
    arg: PureTerm


@dataclass(frozen=True, slots=True)
class Seq(PureTerm):
    head: PureTerm
    tail: "Distribution"


@dataclass(frozen=True, slots=True)
class LetPair(PureTerm):
    left: str
    right: str
    scrutinee: PureTerm
    body: "Distribution"

    def __post_init__(self) -> None:
        if self.left == self.right:
            raise ValueError("pair destructuring needs two distinct names")


@dataclass(frozen=True, slots=True)
class Match(PureTerm):
    scrutinee: PureTerm
    left_name: str
    left_body: "Distribution"
    right_name: str
    right_body: "Distribution"


@dataclass(frozen=True, slots=True)
class Distribution:
    summands: tuple[tuple[complex, PureTerm], ...]

    def __post_init__(self) -> None:
        if not self.summands:
            raise ValueError("a distribution has at least one summand")
        fixed = []
        for entry in self.summands:
            a, t = entry
            a = complex(a)
            if not (cmath.isfinite(a)):
                raise ValueError(f"non-finite coefficient {a!r}")
            if not isinstance(t, PureTerm):
                raise ValueError(f"not a pure term: {t!r}")
            fixed.append((a, t))
        object.__setattr__(self, "summands", tuple(fixed))

    def __len__(self) -> int:
        return len(self.summands)

    def __str__(self) -> str:
        return show_dist(self)


def singleton(t: PureTerm, coeff: complex = 1) -> Distribution:
    return Distribution(((coeff, t),))


def is_value(t: PureTerm) -> bool:
    return isinstance(t, (Var, Lam, Void, PairV, InlV, InrV))


def is_value_distribution(d: Distribution) -> bool:
    return all(is_value(t) for _, t in d.summands)


# ---------------------------------------------------------------------------
# free variables and substitution

def free_vars(t: PureTerm) -> frozenset[str]:
    match t:
        case Var(x):
            return frozenset((x,))
        case Lam(x, _, body):
            return free_vars_dist(body) - {x}
        case Void():
            return frozenset()
        case PairV(a, b):
            return free_vars(a) | free_vars(b)
        case InlV(v) | InrV(v):
            return free_vars(v)
        case App(f, a):
            return free_vars(f) | free_vars(a)
        case Seq(h, tail):
            return free_vars(h) | free_vars_dist(tail)
        case LetPair(x, y, s, body):
            return free_vars(s) | (free_vars_dist(body) - {x, y})
        case Match(s, x1, b1, x2, b2):
            return (free_vars(s)
                    | (free_vars_dist(b1) - {x1})
                    | (free_vars_dist(b2) - {x2}))
        case _:
            raise TypeError(f"not a pure term: {t!r}")


def free_vars_dist(d: Distribution) -> frozenset[str]:
    out: frozenset[str] = frozenset()
    for _, t in d.summands:
        out |= free_vars(t)
    return out


_fresh_ticker = count(1)


def fresh_name(base: str, avoid: frozenset[str] | set[str]) -> str:
    for n in _fresh_ticker:
        candidate = f"{base}_{n}"
        if candidate not in avoid:
            return candidate
    raise AssertionError("unreachable")


def substitute(t: PureTerm, name: str, value: PureTerm) -> PureTerm:
    """Capture-avoiding substitution of a pure value for a free variable."""
    return substitute_many(t, {name: value})


def substitute_many(t: PureTerm, mapping: dict[str, PureTerm]) -> PureTerm:
    """Simultaneous capture-avoiding substitution of pure values."""
    for v in mapping.values():
        if not is_value(v):
            raise ValueError("only pure values may be substituted for variables")
    return _subst(t, mapping)


def substitute_dist(d: Distribution, name: str, value: PureTerm) -> Distribution:
    return substitute_many_dist(d, {name: value})


def substitute_many_dist(d: Distribution, mapping: dict[str, PureTerm]) -> Distribution:
    for v in mapping.values():
        if not is_value(v):
            raise ValueError("only pure values may be substituted for variables")
    return _subst_dist(d, mapping)


def _subst(t: PureTerm, mapping: dict[str, PureTerm]) -> PureTerm:
    if not mapping:
        return t
    match t:
        case Var(x):
            return mapping.get(x, t)
        case Lam(x, ann, body):
            x2, body2, inner = _under_binders((x,), body, mapping)
            if inner is None:
                return t if x2 == (x,) else Lam(x2[0], ann, body2)
            return Lam(x2[0], ann, _subst_dist(body2, inner))
        case Void():
            return t
        case PairV(a, b):
            return PairV(_subst(a, mapping), _subst(b, mapping))
        case InlV(v):
            return InlV(_subst(v, mapping))
        case InrV(v):
            return InrV(_subst(v, mapping))
        case App(f, a):
            return App(_subst(f, mapping), _subst(a, mapping))
        case Seq(h, tail):
            return Seq(_subst(h, mapping), _subst_dist(tail, mapping))
        case LetPair(x, y, s, body):
            s2 = _subst(s, mapping)
            names2, body2, inner = _under_binders((x, y), body, mapping)
            if inner is None:
                body3 = body2
            else:
                body3 = _subst_dist(body2, inner)
            return LetPair(names2[0], names2[1], s2, body3)
        case Match(s, x1, b1, x2, b2):
            s2 = _subst(s, mapping)
            n1, b1r, in1 = _under_binders((x1,), b1, mapping)
            n2, b2r, in2 = _under_binders((x2,), b2, mapping)
            b1f = b1r if in1 is None else _subst_dist(b1r, in1)
            b2f = b2r if in2 is None else _subst_dist(b2r, in2)
            return Match(s2, n1[0], b1f, n2[0], b2f)
        case _:
            raise TypeError(f"not a pure term: {t!r}")


def _subst_dist(d: Distribution, mapping: dict[str, PureTerm]) -> Distribution:
    if not mapping:
        return d
    return Distribution(tuple((a, _subst(t, mapping)) for a, t in d.summands))


def _under_binders(
    names: tuple[str, ...],
    body: Distribution,
    mapping: dict[str, PureTerm],
) -> tuple[tuple[str, ...], Distribution, dict[str, PureTerm] | None]:
    """Adjust a binder group for substitution under it.

    Drops shadowed entries, renames binders that would capture free variables
    of the substituted values.  Returns the (possibly renamed) binder names,
    the correspondingly renamed body, and the remaining mapping (None when
    nothing is left to substitute).
    """
    inner = {k: v for k, v in mapping.items() if k not in names}
    if not inner:
        return names, body, None
    clash = frozenset()
    for v in inner.values():
        clash |= free_vars(v)
    out_names = list(names)
    renames: dict[str, PureTerm] = {}
    for i, x in enumerate(out_names):
        if x in clash:
            avoid = clash | free_vars_dist(body) | set(inner) | set(out_names)
            x2 = fresh_name(x, avoid)
            renames[x] = Var(x2)
            out_names[i] = x2
    if renames:
        body = _subst_dist(body, renames)
    return tuple(out_names), body, inner


def bilinear_substitute(d: Distribution, name: str, values: Distribution) -> Distribution:
    """Substitute a value distribution for a variable, bilinearly.

    Every summand of `d` is paired with every summand of `values`, the
    coefficients multiply, and the result is canonicalized.
    """
    for _, v in values.summands:
        if not is_value(v):
            raise ValueError("only pure values may be substituted for variables")
    out = []
    for a, t in d.summands:
        for b, v in values.summands:
            out.append((a * b, _subst(t, {name: v})))
    return canonicalize(Distribution(tuple(out)))


# ---------------------------------------------------------------------------
# alpha-equivalence, canonical form, congruence

def term_key(t: PureTerm) -> tuple:
    """Structural key: equal on exactly the alpha-equivalent terms, and
    totally ordered (string tags, de Bruijn distances for bound variables,
    names for free ones, coefficients as real/imaginary pairs)."""
    return _key(t, {}, 0)


def dist_key(d: Distribution) -> tuple:
    return _dkey(d, {}, 0)


def _key(t: PureTerm, bound: dict[str, int], depth: int) -> tuple:
    match t:
        case Var(x):
            at = bound.get(x)
            if at is None:
                return ("fv", x)
            return ("bv", depth - at)
        case Lam(x, ann, body):
            return ("lam", type_key(ann), _dkey(body, {**bound, x: depth}, depth + 1))
        case Void():
            return ("void",)
        case PairV(a, b):
            return ("pair", _key(a, bound, depth), _key(b, bound, depth))
        case InlV(v):
            return ("inl", _key(v, bound, depth))
        case InrV(v):
            return ("inr", _key(v, bound, depth))
        case App(f, a):
            return ("app", _key(f, bound, depth), _key(a, bound, depth))
        case Seq(h, tail):
            return ("seq", _key(h, bound, depth), _dkey(tail, bound, depth))
        case LetPair(x, y, s, body):
            return ("letp", _key(s, bound, depth),
                    _dkey(body, {**bound, x: depth, y: depth + 1}, depth + 2))
        case Match(s, x1, b1, x2, b2):
            return ("match", _key(s, bound, depth),
                    _dkey(b1, {**bound, x1: depth}, depth + 1),
                    _dkey(b2, {**bound, x2: depth}, depth + 1))
        case _:
            raise TypeError(f"not a pure term: {t!r}")


def _dkey(d: Distribution, bound: dict[str, int], depth: int) -> tuple:
    return ("dist",) + tuple(
        (("c", a.real, a.imag), _key(t, bound, depth)) for a, t in d.summands
    )


def alpha_eq(t1: PureTerm, t2: PureTerm) -> bool:
    return term_key(t1) == term_key(t2)


def dist_alpha_eq(d1: Distribution, d2: Distribution) -> bool:
    return dist_key(d1) == dist_key(d2)


def canonicalize(d: Distribution) -> Distribution:
    """Merge alpha-equivalent summands by adding coefficients (zeros are
    kept), then sort by the structural key."""
    acc: dict[tuple, list] = {}
    for a, t in d.summands:
        k = term_key(t)
        slot = acc.get(k)
        if slot is None:
            acc[k] = [a, t]
        else:
            slot[0] += a
    items = sorted(acc.items(), key=lambda kv: kv[0])
    return Distribution(tuple((a, t) for _, (a, t) in items))


def congruent(d1: Distribution, d2: Distribution, tol: float | None = None) -> bool:
    """Equality up to the distribution congruence, with coefficients compared
    within `tol` (the global tolerance when omitted)."""
    if tol is None:
        tol = get_tolerance()
    c1 = canonicalize(d1)
    c2 = canonicalize(d2)
    if len(c1.summands) != len(c2.summands):
        return False
    for (a1, t1), (a2, t2) in zip(c1.summands, c2.summands):
        if abs(a1 - a2) > tol:
            return False
        if term_key(t1) != term_key(t2):
            return False
    return True


def scale(alpha: complex, d: Distribution) -> Distribution:
    return Distribution(tuple((complex(alpha) * a, t) for a, t in d.summands))


def add(*ds: Distribution) -> Distribution:
    if not ds:
        raise ValueError("add needs at least one distribution")
    out: list[tuple[complex, PureTerm]] = []
    for d in ds:
        out.extend(d.summands)
    return Distribution(tuple(out))


# ---------------------------------------------------------------------------
# composite constructors
#
# Distributions enter composite positions by multiplying out, so the stored
# syntax only ever carries pure terms at those positions.  All results are
# canonical.

def mk_pair(first: Distribution, second: Distribution) -> Distribution:
    _require_values(first, "pair components")
    _require_values(second, "pair components")
    out = tuple(
        (a * b, PairV(v, w))
        for a, v in first.summands
        for b, w in second.summands
    )
    return canonicalize(Distribution(out))


def mk_inl(d: Distribution) -> Distribution:
    _require_values(d, "injection arguments")
    return canonicalize(Distribution(tuple((a, InlV(v)) for a, v in d.summands)))


def mk_inr(d: Distribution) -> Distribution:
    _require_values(d, "injection arguments")
    return canonicalize(Distribution(tuple((a, InrV(v)) for a, v in d.summands)))


def mk_app(fun: PureTerm, arg: Distribution) -> Distribution:
    if not isinstance(fun, PureTerm):
        raise ValueError(f"operator must be a single pure term, got {fun!r}")
    return canonicalize(Distribution(tuple((a, App(fun, t)) for a, t in arg.summands)))


def mk_seq(heads: Distribution, tail: Distribution) -> Distribution:
    return canonicalize(Distribution(tuple((a, Seq(h, tail)) for a, h in heads.summands)))


def mk_let(left: str, right: str, scrutinees: Distribution, body: Distribution) -> Distribution:
    return canonicalize(Distribution(
        tuple((a, LetPair(left, right, s, body)) for a, s in scrutinees.summands)
    ))


def mk_match(
    scrutinees: Distribution,
    left_name: str,
    left_body: Distribution,
    right_name: str,
    right_body: Distribution,
) -> Distribution:
    return canonicalize(Distribution(
        tuple((a, Match(s, left_name, left_body, right_name, right_body))
              for a, s in scrutinees.summands)
    ))


def _require_values(d: Distribution, what: str) -> None:
    for _, t in d.summands:
        if not is_value(t):
            raise ValueError(f"{what} must be pure values, got {show_term(t)}")


# ---------------------------------------------------------------------------
# printing
#
# Levels: 0 terms that swallow everything to their right (abstraction, let),
# 1 sequencing, 2 application, 3 atoms.  Match is brace-delimited and counts
# as an atom.  The output re-parses to an alpha-equivalent distribution.

_LOW, _SEQ, _APP, _ATOMIC = 0, 1, 2, 3


def show_scalar(c: complex) -> str:
    re, im = c.real, c.imag
    if re < 0:
        return "-" + show_scalar(-c)
    if im == 0:
        return _show_float(re)
    if im >= 0:
        return f"{_show_float(re)}+{_show_float(im)}i"
    return f"{_show_float(re)}-{_show_float(-im)}i"


def _show_float(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def show_dist(d: Distribution) -> str:
    return " + ".join(_show_summand(a, t) for a, t in d.summands)


def _show_summand(a: complex, t: PureTerm) -> str:
    if a == 1:
        return _show_term(t, _SEQ)
    return f"{show_scalar(a)} * {_show_term(t, _SEQ)}"


def show_term(t: PureTerm, level: int = _LOW) -> str:
    return _show_term(t, level)


def _show_term(t: PureTerm, level: int) -> str:
    match t:
        case Var(x):
            return x
        case Void():
            return "*"
        case PairV(a, b):
            return f"({_show_term(a, _LOW)}, {_show_term(b, _LOW)})"
        case InlV(v):
            return f"inl {_show_term(v, _ATOMIC)}"
        case InrV(v):
            return f"inr {_show_term(v, _ATOMIC)}"
        case Match(s, x1, b1, x2, b2):
            return (f"match {_show_term(s, _LOW)} {{ inl {x1} -> {show_dist(b1)}"
                    f" | inr {x2} -> {show_dist(b2)} }}")
        case App(f, a):
            s = f"{_show_term(f, _APP)} {_show_term(a, _ATOMIC)}"
            return f"({s})" if level > _APP else s
        case Seq(h, tail):
            s = f"{_show_term(h, _APP)} ; {_show_seq_tail(tail)}"
            return f"({s})" if level > _SEQ else s
        case Lam(x, ann, body):
            s = f"\\{x}:{ann}. {show_dist(body)}"
            return f"({s})" if level > _LOW else s
        case LetPair(x, y, scrut, body):
            s = f"let ({x}, {y}) = {_show_term(scrut, _LOW)} in {show_dist(body)}"
            return f"({s})" if level > _LOW else s
        case _:
            raise TypeError(f"not a pure term: {t!r}")


def _show_seq_tail(tail: Distribution) -> str:
    if len(tail.summands) == 1 and tail.summands[0][0] == 1:
        return _show_term(tail.summands[0][1], _SEQ)
    return f"({show_dist(tail)})"

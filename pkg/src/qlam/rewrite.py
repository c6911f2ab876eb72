"""Weak reduction on distributions.

One step rewrites a single summand: the leftmost whose term is not a value
(or a randomly chosen one under the optional randomized strategy).  Inside a
term the order is fixed: in an application the argument reduces before the
operator, sequencing, destructuring and case analysis reduce their head
position first, and redexes fire only on values.  A summand's reduct is a
distribution; it splices in place with the coefficient multiplied through.
Nothing is canonicalized mid-flight, only `normalize` canonicalizes its final
answer, so traces show the raw arithmetic including interference terms that
later merge away.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .syntax import (
    App,
    Distribution,
    InlV,
    InrV,
    LetPair,
    Lam,
    Match,
    PairV,
    PureTerm,
    Seq,
    Void,
    canonicalize,
    is_value,
    mk_app,
    mk_let,
    mk_match,
    mk_seq,
    show_term,
    singleton,
    substitute_dist,
    substitute_many_dist,
)

DEFAULT_MAX_STEPS = 100_000


class StuckError(Exception):
    def __init__(self, term: PureTerm, reason: str):
        super().__init__(f"stuck term {show_term(term)}: {reason}")
        self.term = term
        self.reason = reason


class StepLimitExceeded(Exception):
    def __init__(self, limit: int):
        super().__init__(f"no normal form within {limit} steps")
        self.limit = limit


@dataclass(frozen=True)
class Stepped:
    dist: Distribution


@dataclass(frozen=True)
class NormalForm:
    pass


@dataclass(frozen=True)
class Stuck:
    term: PureTerm
    reason: str


StepResult = Stepped | NormalForm | Stuck


def reduce_term(t: PureTerm) -> Distribution | None:
    """One reduction of a single pure term, None when t is a value.

    Raises StuckError when the fixed strategy reaches a non-redex.
    """
    match t:
        case App(f, a):
            ra = reduce_term(a)
            if ra is not None:
                return mk_app(f, ra)
            rf = reduce_term(f)
            if rf is not None:
                return mk_app(_as_operator(t, rf), singleton(a))
            if isinstance(f, Lam):
                return substitute_dist(f.body, f.name, a)
            raise StuckError(t, f"{show_term(f, 3)} applied to {show_term(a, 3)}")
        case Seq(h, tail):
            if isinstance(h, Void):
                return tail
            rh = reduce_term(h)
            if rh is not None:
                return mk_seq(rh, tail)
            raise StuckError(t, "sequencing head is not the unit value")
        case LetPair(x, y, s, body):
            if isinstance(s, PairV):
                return substitute_many_dist(body, {x: s.first, y: s.second})
            rs = reduce_term(s)
            if rs is not None:
                return mk_let(x, y, rs, body)
            raise StuckError(t, "destructured term is not a pair value")
        case Match(s, x1, b1, x2, b2):
            if isinstance(s, InlV):
                return substitute_dist(b1, x1, s.value)
            if isinstance(s, InrV):
                return substitute_dist(b2, x2, s.value)
            rs = reduce_term(s)
            if rs is not None:
                return mk_match(rs, x1, b1, x2, b2)
            raise StuckError(t, "matched term is not an injection value")
        case _:
            return None


def _as_operator(at: PureTerm, d: Distribution) -> PureTerm:
    # an operator that reduces must stay a single unscaled term
    if len(d.summands) == 1 and d.summands[0][0] == 1:
        return d.summands[0][1]
    raise StuckError(at, "operator reduced to a proper distribution")


def step(d: Distribution, rng: random.Random | None = None) -> StepResult:
    """Reduce one summand, leftmost by default, any reducible one under rng."""
    res, _ = _step_from(d, 0, rng)
    return res


def _step_from(
    d: Distribution, start: int, rng: random.Random | None
) -> tuple[StepResult, int]:
    if rng is None:
        candidates = []
        for i in range(start, len(d.summands)):
            if not is_value(d.summands[i][1]):
                candidates = [i]
                break
    else:
        candidates = [i for i, (_, t) in enumerate(d.summands) if not is_value(t)]
        start = 0
    if not candidates:
        return NormalForm(), start
    i = candidates[0] if rng is None else rng.choice(candidates)
    a, t = d.summands[i]
    try:
        r = reduce_term(t)
    except StuckError as e:
        return Stuck(e.term, e.reason), start
    assert r is not None
    spliced = (
        d.summands[:i]
        + tuple((a * b, u) for b, u in r.summands)
        + d.summands[i + 1:]
    )
    return Stepped(Distribution(spliced)), i


def normalize(
    d: Distribution,
    max_steps: int = DEFAULT_MAX_STEPS,
    rng: random.Random | None = None,
) -> Distribution:
    """Iterate step to a normal form, canonicalized.  Raises StuckError on a
    stuck summand and StepLimitExceeded past max_steps."""
    cur = d
    cursor = 0
    steps = 0
    while True:
        res, cursor = _step_from(cur, cursor, rng)
        match res:
            case NormalForm():
                return canonicalize(cur)
            case Stuck(term, reason):
                raise StuckError(term, reason)
            case Stepped(nd):
                steps += 1
                if steps > max_steps:
                    raise StepLimitExceeded(max_steps)
                cur = nd


def trace_normalize(
    d: Distribution,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> list[Distribution]:
    """Like normalize but returns every intermediate distribution.

    The first element is the input, each later element is the result of one
    step, and the final element is canonicalized in place (it equals what
    normalize returns).  Length is at most max_steps + 1.
    """
    trace = [d]
    cur = d
    cursor = 0
    while True:
        res, cursor = _step_from(cur, cursor, None)
        match res:
            case NormalForm():
                trace[-1] = canonicalize(cur)
                return trace
            case Stuck(term, reason):
                raise StuckError(term, reason)
            case Stepped(nd):
                if len(trace) > max_steps:
                    raise StepLimitExceeded(max_steps)
                cur = nd
                trace.append(nd)

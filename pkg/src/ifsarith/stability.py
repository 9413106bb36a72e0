"""Refinement stability: the engine that makes finite-level images exact.

An operation F is *stable* at a pair of basic intervals (I, J) when
F(I, J) = F(tilde(I), tilde(J)).  When stability holds for every pair at
every rank, the image of the rank-k cover equals the image of the
attractor intersections themselves, so a finite computation is exact.

Two modes are provided:

* lemma mode evaluates closed-form sufficient conditions per pair that
  persist under refinement (left endpoints only grow, lengths shrink),
  and certifies the union image as the exact value;
* exhaustive mode verifies one-step stability pair by pair down to a
  requested extra depth and tags the result as verified-to-depth, never
  exact.

Closed-form conditions exist for addition, division and the sqrt-sum;
subtraction and multiplication are exhaustive-only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .ifs import Params, WordSet, basic_interval, tilde, wordset_union
from .intervals import (
    BinaryOp,
    Interval,
    IntervalUnion,
    Trace,
    TraceEntry,
    box_image,
    op_on_unions,
)

ZERO = Fraction(0)


class UnequalLengths(ValueError):
    """Pair hypotheses require basic intervals of one common length."""


class StabilityRefusal(Exception):
    """A stability certificate could not be issued.

    Carries the first failing pair and the named condition.
    """

    def __init__(self, pair, condition: str, message: str):
        self.pair = pair
        self.condition = condition
        super().__init__(message)


@dataclass
class StepCheck:
    """Outcome of a one-step stability check with its inequality trace."""

    stable: bool
    trace: list[TraceEntry] = field(default_factory=list)


def one_step_stable(op: BinaryOp, I: Interval, J: Interval, p: Params) -> StepCheck:
    """Is F(I,J) = F(tilde(I), tilde(J)), decided exactly?

    The trace records the adjacency inequality (previous child image's
    upper end minus next child image's lower end) for each consecutive
    pair of child boxes sorted by lower endpoint.
    """
    if I.length() != J.length():
        raise UnequalLengths(f"{I!r} and {J!r} have different lengths")
    whole = box_image(op, I, J)
    refined = op_on_unions(op, tilde(p, I), tilde(p, J))

    boxes = [
        box_image(op, a, b)
        for a in tilde(p, I).parts
        for b in tilde(p, J).parts
    ]
    boxes.sort(key=lambda iv: iv.lo)
    tr = Trace()
    k = 0
    for prev, cur in zip(boxes, boxes[1:]):
        if prev == cur:
            continue
        k += 1
        tr.check(
            f"children_overlap_{k}",
            prev.hi,
            cur.lo,
            ">=",
            detail=f"child image {prev!r} must reach the next child image {cur!r}",
        )
    stable = refined == IntervalUnion([whole])
    return StepCheck(stable, tr.entries)


@dataclass
class HypothesisCheck:
    """Closed-form sufficient conditions for one oriented pair."""

    op: BinaryOp
    has_closed_form: bool
    trace: list[TraceEntry] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.has_closed_form and all(e.ok for e in self.trace)


def stability_hypotheses(
    op: BinaryOp, I: Interval, J: Interval, p: Params
) -> HypothesisCheck:
    """Evaluate the per-pair sufficient conditions for refinement stability.

    The pair is oriented so that ``a`` is the smaller left endpoint; for
    division both operand orders arise in union images but reduce to the
    same condition set, which is evaluated once per ordered pair anyway.
    The two linear inequalities 2c+L-1 >= 0 and c+2L-1 >= 0 used inside
    the closed-form proofs are checked explicitly per parameter point
    rather than derived from c >= (1-L)^2.
    """
    t = I.length()
    if t != J.length():
        raise UnequalLengths(f"{I!r} and {J!r} have different lengths")
    a = min(I.lo, J.lo)
    lam, c = p.lam, p.c
    tr = Trace()

    if op is BinaryOp.ADD:
        tr.check("product_region", c, (1 - lam) ** 2, ">=", detail="c >= (1-lambda)^2")
        tr.check("linear_2c", 2 * c + lam - 1, ZERO, ">=", detail="2c+lambda-1 >= 0")
        tr.check("linear_2lam", c + 2 * lam - 1, ZERO, ">=", detail="c+2lambda-1 >= 0")
        return HypothesisCheck(op, True, tr.entries)

    if op is BinaryOp.DIV:
        tr.check(
            "left_endpoint_floor", a, 1 - c - lam, ">=", detail="a >= 1-c-lambda"
        )
        tr.check("product_region", c, (1 - lam) ** 2, ">=", detail="c >= (1-lambda)^2")
        tr.check("linear_2c", 2 * c + lam - 1, ZERO, ">=", detail="2c+lambda-1 >= 0")
        tr.check("linear_2lam", c + 2 * lam - 1, ZERO, ">=", detail="c+2lambda-1 >= 0")
        return HypothesisCheck(op, True, tr.entries)

    if op is BinaryOp.SQRT_SUM:
        tr.check(
            "left_endpoint_floor",
            a,
            (1 - c - lam) ** 2,
            ">=",
            detail="a >= (1-c-lambda)^2",
        )
        budget_lhs = 8 * a * (2 * lam + c - 1)
        budget_rhs = t * (3 - 4 * lam - 4 * lam * c - c * c - 2 * c)
        tr.check(
            "length_budget",
            budget_lhs,
            budget_rhs,
            ">=",
            detail="8a(2lambda+c-1) >= t(3-4lambda-4lambda*c-c^2-2c)",
        )
        tr.check("linear_2c", 2 * c + lam - 1, ZERO, ">=", detail="2c+lambda-1 >= 0")
        tr.check("linear_2lam", c + 2 * lam - 1, ZERO, ">=", detail="c+2lambda-1 >= 0")
        return HypothesisCheck(op, True, tr.entries)

    # SUB and MUL carry no closed-form stability conditions here
    return HypothesisCheck(op, False, [])


@dataclass
class StableImage:
    """A certified (lemma mode) or depth-verified (exhaustive) union image."""

    op: BinaryOp
    image: IntervalUnion
    mode: str  # "lemma" | "exhaustive"
    exact: bool
    verified_depth: int | None
    trace: list[TraceEntry] = field(default_factory=list)


def _lemma_closure(op, A, B, p) -> StableImage:
    entries: list[TraceEntry] = []
    for wa in A.sorted_words():
        ia = basic_interval(p, wa)
        for wb in B.sorted_words():
            ib = basic_interval(p, wb)
            hyp = stability_hypotheses(op, ia, ib, p)
            if not hyp.has_closed_form:
                raise StabilityRefusal(
                    (wa, wb),
                    "no_closed_form",
                    f"{op.value} has no closed-form stability conditions; "
                    "use exhaustive mode",
                )
            for e in hyp.trace:
                entries.append(
                    TraceEntry(
                        e.name, e.lhs, e.rhs, e.relation, e.sig,
                        (e.detail + f" [pair {wa}|{wb}]"),
                    )
                )
            bad = next((e for e in hyp.trace if not e.ok), None)
            if bad is not None:
                raise StabilityRefusal(
                    (wa, wb),
                    bad.name,
                    f"stability hypothesis {bad.name} fails at pair {wa}|{wb}: "
                    f"{bad.detail}",
                )
    image = op_on_unions(op, wordset_union(p, A), wordset_union(p, B))
    return StableImage(op, image, "lemma", True, None, entries)


def _exhaustive_closure(op, A, B, p, depth) -> StableImage:
    if depth < 0:
        raise ValueError("exhaustive depth must be nonnegative")
    entries: list[TraceEntry] = []
    ca, cb = A, B
    for level in range(depth + 1):
        for wa in ca.sorted_words():
            ia = basic_interval(p, wa)
            for wb in cb.sorted_words():
                ib = basic_interval(p, wb)
                step = one_step_stable(op, ia, ib, p)
                if not step.stable:
                    bad = next((e for e in step.trace if not e.ok), None)
                    name = bad.name if bad else "one_step"
                    raise StabilityRefusal(
                        (wa, wb),
                        name,
                        f"one-step stability fails for {op.value} at pair "
                        f"{wa}|{wb} (level {level})",
                    )
        if level < depth:
            ca = ca.refined()
            cb = cb.refined()
    image = op_on_unions(op, wordset_union(p, ca), wordset_union(p, cb))
    entries.append(
        TraceEntry(
            "exhaustive_verified",
            Fraction(depth),
            Fraction(depth),
            "==",
            0,
            f"one-step stability verified for all pairs to extra depth {depth}",
        )
    )
    return StableImage(op, image, "exhaustive", False, depth, entries)


def stable_closure(
    op: BinaryOp,
    A: WordSet,
    B: WordSet,
    p: Params,
    mode: str = "lemma",
    depth: int = 2,
) -> StableImage:
    """Certified image of the operation on attractor pieces.

    In lemma mode the closed-form hypotheses are required for every
    ordered pair of basic intervals and the returned union is the exact
    value of the operation on (K n union(A)) x (K n union(B)).  In
    exhaustive mode one-step stability is verified for all pairs down to
    ``depth`` extra ranks; the returned image is verified, not exact.
    Raises StabilityRefusal naming the first failing pair and condition.
    """
    if mode == "lemma":
        return _lemma_closure(op, A, B, p)
    if mode == "exhaustive":
        return _exhaustive_closure(op, A, B, p, depth)
    raise ValueError(f"unknown mode {mode!r}")

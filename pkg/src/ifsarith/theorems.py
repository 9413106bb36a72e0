"""Certified verdicts for the main set identities at a parameter point.

Each verifier re-derives its identity from scratch at the given exact
(lam, c): it builds the word-set construction, certifies the finite
image through the stability engine, checks every merge and covering
inequality exactly, and emits a machine-readable trace.  A verdict is
``CertifiedOnto`` only if every traced condition carries its claimed
sign; ``CertifiedNotOnto`` always carries an explicit witness gap.

Verified claims:

* sum        -- K+K = [0,2] via the two-piece rank-1 construction,
                geometric scaling by lam;
* sum-digit  -- K+K as the attractor of a six-map digit system, onto
                iff the one-step cover of [0,2] is gapless (an exact
                criterion, not just sufficiency);
* diff       -- K-K = [-1,1] via the seven-map digit system;
* div        -- K/K = [0,inf) via one of two routes: a single rank-1
                piece for large lam, or the rank-2 three-piece chain of
                nine quotient boxes for small lam;
* sqrtsum    -- sqrt(K)+sqrt(K) = [0,2]: necessity from the level-1
                envelope, sufficiency via the rank-1 route or the
                rank-2 route with two rank-3 bridge images.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .exact import SqrtSum2, format_rational
from .ifs import Params, WordSet
from .intervals import (
    BinaryOp,
    Interval,
    IntervalUnion,
    Trace,
    TraceEntry,
    endpoint_payload,
)
from .stability import StabilityRefusal, stable_closure

ZERO = Fraction(0)
ONE = Fraction(1)

SUM_WORDSET = WordSet.of((2,), (3,))
DIV_BIG_WORDSET = WordSet.of((3,))
DIV_SMALL_WORDSET = WordSet.of((2, 3), (3, 1), (3, 2), (3, 3))
SQRT_BLUE_WORDSET = WordSet.of((2,), (3,))
SQRT_ORANGE_WORDSET = WordSet.of((1, 3), (2, 3), (3, 1), (3, 2), (3, 3))
SQRT_GAP_A_WORDSETS = (
    WordSet.of((1, 2, 3)),
    WordSet.of((3, 2, 1), (3, 2, 2), (3, 2, 3), (3, 3, 1), (3, 3, 2)),
)
SQRT_GAP_B_WORDSETS = (WordSet.of((2, 1, 3)), WordSet.of((3, 3, 1)))


class Status(Enum):
    CERTIFIED_ONTO = "CertifiedOnto"
    CERTIFIED_NOT_ONTO = "CertifiedNotOnto"
    UNCERTIFIED = "Uncertified"


@dataclass
class Verdict:
    """Structured certification result with a full inequality trace."""

    claim: str
    params: Params
    status: Status
    certified_interval: IntervalUnion | None = None
    scaling_factor: Fraction | SqrtSum2 | None = None
    gap: Interval | None = None
    path: str | None = None
    trace: list[TraceEntry] = field(default_factory=list)

    def to_json(self) -> dict:
        scaling = None
        if self.scaling_factor is not None:
            scaling = endpoint_payload(self.scaling_factor)
        return {
            "claim": self.claim,
            "lambda": format_rational(self.params.lam),
            "c": format_rational(self.params.c),
            "status": self.status.value,
            "path": self.path,
            "seed": None
            if self.certified_interval is None
            else self.certified_interval.to_payload(),
            "scaling": scaling,
            "gap": None if self.gap is None else self.gap.to_payload(),
            "trace": [e.to_json() for e in self.trace],
        }


def _single_interval(u: IntervalUnion) -> bool:
    return len(u.parts) == 1


# ---------------------------------------------------------------------------
# addition
# ---------------------------------------------------------------------------


def verify_sum(p: Params) -> Verdict:
    """K+K = [0,2] via the rank-1 two-piece construction.

    Sufficiency only: when c < (1-lam)^2 the verdict is Uncertified (no
    necessity is claimed for the sum).
    """
    lam, c = p.lam, p.c
    tr = Trace()
    if not tr.check("product_region", c, (1 - lam) ** 2, ">=", detail="c >= (1-lambda)^2"):
        return Verdict("sum", p, Status.UNCERTIFIED, trace=tr.entries)
    try:
        closure = stable_closure(BinaryOp.ADD, SUM_WORDSET, SUM_WORDSET, p, "lemma")
    except StabilityRefusal as refusal:
        tr.check("stability_refusal", ZERO, ONE, ">=", detail=str(refusal))
        return Verdict("sum", p, Status.UNCERTIFIED, trace=tr.entries)
    tr.extend(closure.trace)

    # three pairwise piece images; both overlaps reduce to c+2*lam-1 >= 0
    tr.check(
        "piece_overlap_low",
        2 * c,
        c + 1 - 2 * lam,
        ">=",
        detail="first sum piece must reach the middle piece",
    )
    tr.check(
        "piece_overlap_high",
        1 + c,
        2 * (1 - lam),
        ">=",
        detail="middle sum piece must reach the top piece",
    )
    seed = Interval(2 * (c - lam), Fraction(2))
    ok_image = _single_interval(closure.image) and closure.image.parts[0] == seed
    tr.check(
        "seed_single_interval",
        ONE if ok_image else ZERO,
        ONE,
        ">=",
        detail=f"certified image must merge to {seed!r}",
    )
    tr.check(
        "seed_scaling_covers",
        lam * 2,
        2 * (c - lam),
        ">=",
        detail="lam * sup(seed) >= inf(seed): geometric copies tile [0,2]",
    )
    if not tr.all_ok:
        return Verdict("sum", p, Status.UNCERTIFIED, trace=tr.entries)
    return Verdict(
        "sum",
        p,
        Status.CERTIFIED_ONTO,
        certified_interval=closure.image,
        scaling_factor=lam,
        path="lemma",
        trace=tr.entries,
    )


def sum_digit_offsets(p: Params) -> list[Fraction]:
    """The six digit offsets of the sum system, already scaled by lam."""
    lam, c = p.lam, p.c
    d1 = c / lam - 1
    d2 = 1 / lam - 1
    return [lam * d for d in (ZERO, d1, d2, 2 * d1, d1 + d2, 2 * d2)]


def diff_digit_offsets(p: Params) -> list[Fraction]:
    """The seven digit offsets of the difference system, scaled by lam."""
    lam, c = p.lam, p.c
    d1 = c / lam - 1
    d2 = 1 / lam - 1
    return [lam * d for d in (-d2, -d1, d1 - d2, ZERO, d2 - d1, d1, d2)]


def digit_cover(p: Params, offsets: list[Fraction], target: Interval, times: int = 1) -> IntervalUnion:
    """Union of the digit-map images of ``target``, iterated ``times`` times."""
    cover = IntervalUnion([target])
    for _ in range(times):
        images = []
        for off in offsets:
            images.extend(cover.map_affine(p.lam, off).parts)
        cover = IntervalUnion(images)
    return cover


def _digit_verdict(claim: str, p: Params, offsets, target: Interval) -> Verdict:
    cover = digit_cover(p, offsets, target)
    tr = Trace()
    images = sorted(
        (Interval(p.lam * target.lo + off, p.lam * target.hi + off) for off in offsets),
        key=lambda iv: iv.lo,
    )
    k = 0
    for prev, cur in zip(images, images[1:]):
        k += 1
        tr.check(
            f"digit_overlap_{k}",
            prev.hi,
            cur.lo,
            ">=",
            detail=f"digit image {prev!r} must reach {cur!r}",
        )
    gaps = cover.complement_within(target)
    onto = not gaps and cover == IntervalUnion([target])
    tr.check(
        "digit_cover_complete",
        ONE if onto else ZERO,
        ONE,
        ">=",
        detail=f"digit images must cover {target!r} exactly",
    )
    if onto:
        return Verdict(
            claim,
            p,
            Status.CERTIFIED_ONTO,
            certified_interval=cover,
            scaling_factor=None,
            path="digit-cover",
            trace=tr.entries,
        )
    return Verdict(
        claim,
        p,
        Status.UNCERTIFIED,
        gap=gaps[0] if gaps else None,
        path="digit-cover",
        trace=tr.entries,
    )


def verify_sum_digit_ifs(p: Params) -> Verdict:
    """K+K as a six-map digit attractor: onto iff the cover of [0,2] is gapless."""
    return _digit_verdict("sum-digit", p, sum_digit_offsets(p), Interval(ZERO, Fraction(2)))


def verify_diff(p: Params) -> Verdict:
    """K-K as a seven-map digit attractor over [-1,1]."""
    return _digit_verdict("diff", p, diff_digit_offsets(p), Interval(Fraction(-1), ONE))


# ---------------------------------------------------------------------------
# division
# ---------------------------------------------------------------------------


def div_quotient_chain(p: Params) -> list[Interval]:
    """The nine quotient boxes of the rank-2 construction, in chain order.

    The middle two boxes (the two self-quotients) are ordered by the
    exact comparison of their left endpoints.
    """
    lam, c = p.lam, p.c
    j1 = (c - lam**2, c)
    j2 = (1 - lam, 1 - lam + lam * c)
    j3 = (1 - lam**2, ONE)

    def q(num, den):
        return Interval(num[0] / den[1], num[1] / den[0])

    self1 = q(j1, j1)
    self2 = q(j2, j2)
    if self2.lo >= self1.lo:
        middle = [self1, self2]
    else:
        middle = [self2, self1]
    return [
        q(j1, j3),
        q(j1, j2),
        q(j2, j3),
        middle[0],
        middle[1],
        q(j3, j3),
        q(j3, j2),
        q(j2, j1),
        q(j3, j1),
    ]


def verify_div(p: Params) -> Verdict:
    """K/K = [0,inf) when c >= (1-lam)^2, by one of two certified routes."""
    lam, c = p.lam, p.c
    tr = Trace()
    if not tr.check("product_region", c, (1 - lam) ** 2, ">=", detail="c >= (1-lambda)^2"):
        return Verdict("div", p, Status.UNCERTIFIED, trace=tr.entries)

    # route dispatch: lam >= (3-sqrt(5))/2 iff (3-2*lam)^2 <= 5, decided
    # by squaring (3-2*lam is positive throughout the feasible region)
    big_route = tr.check(
        "scale_threshold",
        Fraction(5),
        (3 - 2 * lam) ** 2,
        ">=",
        detail="5 >= (3-2*lambda)^2, i.e. lambda is above the route threshold",
    )

    if big_route:
        words = DIV_BIG_WORDSET
        seed = Interval((1 - lam) / 1, 1 / (1 - lam))
        path = "big"
    else:
        words = DIV_SMALL_WORDSET
        seed = Interval(c - lam**2, 1 / (c - lam**2))
        path = "small"
        tr.entries.pop()  # threshold recorded below with the opposite reading
        tr.check(
            "scale_threshold",
            (3 - 2 * lam) ** 2,
            Fraction(5),
            ">=",
            detail="(3-2*lambda)^2 >= 5, i.e. lambda is below the route threshold",
        )
        tr.check(
            "small_left_floor",
            c - lam**2,
            1 - c - lam,
            ">=",
            detail="c-lambda^2 >= 1-c-lambda (rank-2 pieces admit the division conditions)",
        )

    try:
        closure = stable_closure(BinaryOp.DIV, words, words, p, "lemma")
    except StabilityRefusal as refusal:
        tr.check("stability_refusal", ZERO, ONE, ">=", detail=str(refusal))
        return Verdict("div", p, Status.UNCERTIFIED, path=path, trace=tr.entries)
    tr.extend(closure.trace)

    if path == "small":
        chain = div_quotient_chain(p)
        for i in range(8):
            tr.check(
                f"chain_order_{i + 1}_{i + 2}",
                chain[i + 1].lo,
                chain[i].lo,
                ">=",
                detail=f"quotient box {i + 2} starts at or after box {i + 1}",
            )
            tr.check(
                f"chain_overlap_{i + 1}_{i + 2}",
                chain[i].hi,
                chain[i + 1].lo,
                ">=",
                detail=f"quotient box {i + 1} must reach box {i + 2}",
            )

    ok_image = _single_interval(closure.image) and closure.image.parts[0] == seed
    tr.check(
        "seed_single_interval",
        ONE if ok_image else ZERO,
        ONE,
        ">=",
        detail=f"certified image must merge to {seed!r}",
    )
    tr.check(
        "seed_scaling_covers",
        lam * seed.hi,
        seed.lo,
        ">=",
        detail="lam * sup(seed) >= inf(seed): two-sided geometric copies tile (0,inf)",
    )
    if not tr.all_ok:
        return Verdict("div", p, Status.UNCERTIFIED, path=path, trace=tr.entries)
    return Verdict(
        "div",
        p,
        Status.CERTIFIED_ONTO,
        certified_interval=closure.image,
        scaling_factor=lam,
        path=path,
        trace=tr.entries,
    )


# ---------------------------------------------------------------------------
# sqrt-sum
# ---------------------------------------------------------------------------


def sqrt_envelope_gap(p: Params) -> Interval:
    """The candidate gap (1+sqrt(c), 2*sqrt(1-lam)) of the level-1 envelope."""
    return Interval(SqrtSum2(p.c, ONE), SqrtSum2(4 * (1 - p.lam), ZERO))


def sqrt_chain_intervals(p: Params) -> list[Interval]:
    """The ten radical image boxes of the rank-2 construction, chain order."""
    lam, c = p.lam, p.c
    lo1, hi1 = lam - lam**2, lam
    lo2, hi2 = c - lam**2, c
    lo3, hi3 = 1 - lam, 1 - lam + lam * c
    lo4, hi4 = 1 - lam**2, ONE

    def box(x, y):
        return Interval(SqrtSum2(x[0], y[0]), SqrtSum2(x[1], y[1]))

    p1, p2, p3, p4 = (lo1, hi1), (lo2, hi2), (lo3, hi3), (lo4, hi4)
    return [
        box(p1, p1),
        box(p1, p2),
        box(p1, p3),
        box(p1, p4),
        box(p2, p2),
        box(p2, p3),
        box(p2, p4),
        box(p3, p3),
        box(p3, p4),
        box(p4, p4),
    ]


def _blue_attempt(p: Params) -> tuple[bool, list[TraceEntry], IntervalUnion | None]:
    lam, c = p.lam, p.c
    tr = Trace()
    ok = tr.check(
        "blue_left_floor",
        c - lam,
        (1 - c - lam) ** 2,
        ">=",
        detail="c-lambda >= (1-c-lambda)^2",
    )
    ok &= tr.check(
        "blue_length_budget",
        8 * (c - lam) * (2 * lam + c - 1),
        lam * (3 - 4 * lam - 4 * lam * c - c * c - 2 * c),
        ">=",
        detail="8(c-lambda)(2lambda+c-1) >= lambda(3-4lambda-4lambda*c-c^2-2c)",
    )
    ok &= tr.check("linear_2c", 2 * c + lam - 1, ZERO, ">=", detail="2c+lambda-1 >= 0")
    ok &= tr.check("linear_2lam", c + 2 * lam - 1, ZERO, ">=", detail="c+2lambda-1 >= 0")
    if not ok:
        return False, tr.entries, None
    try:
        closure = stable_closure(BinaryOp.SQRT_SUM, SQRT_BLUE_WORDSET, SQRT_BLUE_WORDSET, p, "lemma")
    except StabilityRefusal as refusal:
        tr.check("stability_refusal", ZERO, ONE, ">=", detail=str(refusal))
        return False, tr.entries, None
    tr.extend(closure.trace)
    ok = tr.check(
        "blue_merge_low",
        SqrtSum2(4 * c, ZERO),
        SqrtSum2(1 - lam, c - lam),
        ">=",
        detail="2*sqrt(c) >= sqrt(1-lambda)+sqrt(c-lambda)",
    )
    ok &= tr.check(
        "blue_merge_high",
        SqrtSum2(c, ONE),
        SqrtSum2(4 * (1 - lam), ZERO),
        ">=",
        detail="1+sqrt(c) >= 2*sqrt(1-lambda)",
    )
    seed = Interval(SqrtSum2(c - lam, c - lam), SqrtSum2(ONE, ONE))
    ok &= _single_interval(closure.image) and closure.image.parts[0] == seed
    tr.check(
        "seed_single_interval",
        ONE if ok else ZERO,
        ONE,
        ">=",
        detail=f"certified image must merge to {seed!r}",
    )
    ok &= tr.check(
        "seed_scaling_covers",
        SqrtSum2(4 * lam, ZERO),
        seed.lo,
        ">=",
        detail="2*sqrt(lambda) >= 2*sqrt(c-lambda): sqrt(lambda)-copies tile [0,2]",
    )
    return ok and tr.all_ok, tr.entries, closure.image if ok else None


def _orange_attempt(p: Params) -> tuple[bool, list[TraceEntry], IntervalUnion | None]:
    lam, c = p.lam, p.c
    tr = Trace()
    ok = tr.check(
        "orange_left_floor",
        lam - lam**2,
        (1 - c - lam) ** 2,
        ">=",
        detail="lambda-lambda^2 >= (1-c-lambda)^2",
    )
    poly = 3 - 4 * lam - 4 * lam * c - c * c - 2 * c
    ok &= tr.check(
        "orange_length_budget",
        8 * (lam - lam**2) * (2 * lam + c - 1),
        lam**2 * poly,
        ">=",
        detail="8(lambda-lambda^2)(2lambda+c-1) >= lambda^2(3-4lambda-4lambda*c-c^2-2c)",
    )
    ok &= tr.check("linear_2c", 2 * c + lam - 1, ZERO, ">=", detail="2c+lambda-1 >= 0")
    ok &= tr.check("linear_2lam", c + 2 * lam - 1, ZERO, ">=", detail="c+2lambda-1 >= 0")
    if not ok:
        return False, tr.entries, None
    try:
        main = stable_closure(
            BinaryOp.SQRT_SUM, SQRT_ORANGE_WORDSET, SQRT_ORANGE_WORDSET, p, "lemma"
        )
    except StabilityRefusal as refusal:
        tr.check("stability_refusal", ZERO, ONE, ">=", detail=str(refusal))
        return False, tr.entries, None
    tr.extend(main.trace)

    h = sqrt_chain_intervals(p)
    for i, j in ((3, 4), (6, 7), (7, 8), (8, 9), (9, 10)):
        ok &= tr.check(
            f"chain_merge_{i}_{j}",
            h[i - 1].hi,
            h[j - 1].lo,
            ">=",
            detail=f"radical box {i} must reach box {j}",
        )

    # first bridge image: covers the stretch between boxes 2 and 3
    ok &= tr.check(
        "bridge_a_left_floor",
        c * lam - lam**3,
        (1 - c - lam) ** 2,
        ">=",
        detail="c*lambda-lambda^3 >= (1-c-lambda)^2",
    )
    ok &= tr.check(
        "bridge_a_length_budget",
        8 * (c * lam - lam**3) * (2 * lam + c - 1),
        lam**3 * poly,
        ">=",
        detail="8(c*lambda-lambda^3)(2lambda+c-1) >= lambda^3(...)",
    )
    if not ok:
        return False, tr.entries, None
    try:
        bridge_a = stable_closure(BinaryOp.SQRT_SUM, *SQRT_GAP_A_WORDSETS, p, "lemma")
    except StabilityRefusal as refusal:
        tr.check("stability_refusal", ZERO, ONE, ">=", detail=str(refusal))
        return False, tr.entries, None
    tr.extend(bridge_a.trace)
    a1 = Interval(
        SqrtSum2(lam * c - lam**3, 1 - lam + lam * c - lam**2),
        SqrtSum2(lam * c, 1 - lam + lam * c - lam**2 + lam**2 * c),
    )
    a2 = Interval(
        SqrtSum2(lam * c - lam**3, 1 - lam + lam * c - lam**3),
        SqrtSum2(lam * c, 1 - lam + lam * c),
    )
    a3 = Interval(
        SqrtSum2(lam * c - lam**3, 1 - lam**2),
        SqrtSum2(lam * c, 1 - lam**2 + lam**2 * c),
    )
    ok &= tr.check("bridge_a_merge_1", a1.hi, a2.lo, ">=", detail="first bridge box reaches the second")
    ok &= tr.check("bridge_a_merge_2", a2.hi, a3.lo, ">=", detail="second bridge box reaches the third")
    ok &= tr.check(
        "bridge_a_lower_containment",
        h[1].hi,
        a1.lo,
        ">=",
        detail="bridge must start at or below sqrt(lambda)+sqrt(c)",
    )
    ok &= tr.check(
        "bridge_a_upper_containment",
        a3.hi,
        h[2].lo,
        ">=",
        detail="bridge must reach sqrt(lambda-lambda^2)+sqrt(1-lambda)",
    )

    # second bridge image: covers the stretch between boxes 4 and 6
    ok &= tr.check(
        "bridge_b_left_floor",
        c - lam + lam**2 - lam**3,
        (1 - c - lam) ** 2,
        ">=",
        detail="c-lambda+lambda^2-lambda^3 >= (1-c-lambda)^2",
    )
    ok &= tr.check(
        "bridge_b_length_budget",
        8 * (c - lam + lam**2 - lam**3) * (2 * lam + c - 1),
        lam**3 * poly,
        ">=",
        detail="8(c-lambda+lambda^2-lambda^3)(2lambda+c-1) >= lambda^3(...)",
    )
    if not ok:
        return False, tr.entries, None
    try:
        bridge_b = stable_closure(BinaryOp.SQRT_SUM, *SQRT_GAP_B_WORDSETS, p, "lemma")
    except StabilityRefusal as refusal:
        tr.check("stability_refusal", ZERO, ONE, ">=", detail=str(refusal))
        return False, tr.entries, None
    tr.extend(bridge_b.trace)
    b_box = Interval(
        SqrtSum2(c - lam + lam**2 - lam**3, 1 - lam**2),
        SqrtSum2(c - lam + lam**2, 1 - lam**2 + lam**3),
    )
    ok &= tr.check(
        "bridge_b_lower_containment",
        h[3].hi,
        b_box.lo,
        ">=",
        detail="bridge must start at or below sqrt(lambda)+1",
    )
    ok &= tr.check(
        "bridge_b_upper_containment",
        b_box.hi,
        h[5].lo,
        ">=",
        detail="bridge must reach sqrt(c-lambda^2)+sqrt(1-lambda)",
    )

    seed = Interval(h[1].lo, SqrtSum2(ONE, ONE))
    ok &= tr.check(
        "seed_scaling_covers",
        SqrtSum2(4 * lam, ZERO),
        seed.lo,
        ">=",
        detail="2*sqrt(lambda) >= sqrt(lambda-lambda^2)+sqrt(c-lambda^2)",
    )
    full = IntervalUnion(
        list(main.image.parts) + list(bridge_a.image.parts) + list(bridge_b.image.parts)
    )
    contains = full.contains_interval(seed)
    tr.check(
        "seed_single_interval",
        ONE if contains else ZERO,
        ONE,
        ">=",
        detail=f"combined certified image must contain {seed!r}",
    )
    ok &= contains
    if not (ok and tr.all_ok):
        return False, tr.entries, None
    return True, tr.entries, IntervalUnion([seed])


def verify_sqrtsum(p: Params) -> Verdict:
    """sqrt(K)+sqrt(K) = [0,2] iff 1+sqrt(c) >= 2*sqrt(1-lam).

    Necessity: when the radical inequality fails, the level-1 envelope
    leaves the explicit gap (1+sqrt(c), 2*sqrt(1-lam)).  Sufficiency is
    attempted along the rank-1 route first, then the rank-2 route with
    its two bridges; if the necessary inequality holds but neither route
    completes, the verdict is honestly Uncertified.
    """
    lam, c = p.lam, p.c
    tr = Trace()
    necessary = tr.check(
        "sqrt_onto_necessity",
        SqrtSum2(c, ONE),
        SqrtSum2(4 * (1 - lam), ZERO),
        ">=",
        detail="1+sqrt(c) >= 2*sqrt(1-lambda)",
    )
    if not necessary:
        gap = sqrt_envelope_gap(p)
        tr.check(
            "envelope_first_block_below_gap",
            SqrtSum2(c, ONE),
            SqrtSum2(4 * c, ZERO),
            ">=",
            detail="1+sqrt(c) >= 2*sqrt(c): the low envelope block stays below the gap",
        )
        return Verdict(
            "sqrtsum",
            p,
            Status.CERTIFIED_NOT_ONTO,
            gap=gap,
            path="envelope",
            trace=tr.entries,
        )

    ok, entries, image = _blue_attempt(p)
    if ok:
        return Verdict(
            "sqrtsum",
            p,
            Status.CERTIFIED_ONTO,
            certified_interval=image,
            scaling_factor=SqrtSum2(lam, ZERO),
            path="blue",
            trace=tr.entries + entries,
        )
    blue_entries = entries

    ok, entries, image = _orange_attempt(p)
    if ok:
        return Verdict(
            "sqrtsum",
            p,
            Status.CERTIFIED_ONTO,
            certified_interval=image,
            scaling_factor=SqrtSum2(lam, ZERO),
            path="orange",
            trace=tr.entries + entries,
        )
    return Verdict(
        "sqrtsum",
        p,
        Status.UNCERTIFIED,
        path=None,
        trace=tr.entries + blue_entries + entries,
    )


# ---------------------------------------------------------------------------
# corollary
# ---------------------------------------------------------------------------


@dataclass
class MulSupport:
    """Evidence for the product identity: oracle density plus piece checks.

    The product identity is a cited result, not re-proved here, so its
    status is 'supported' or 'unsupported', never 'certified'.  The
    one-step stability attempt is reported as data only: multiplication
    is genuinely not one-step stable at some refined pairs (for example
    the rank-2 pair 21|33 at lambda=2/5, c=9/20), so a refusal there
    says nothing against the identity itself.
    """

    stability_verified: bool
    stability_note: str
    merged_ok: bool
    scaling_ok: bool
    density_ok: bool
    worst_gap: Interval | None
    trace: list[TraceEntry] = field(default_factory=list)

    @property
    def supported(self) -> bool:
        return self.merged_ok and self.scaling_ok and self.density_ok

    def to_json(self) -> dict:
        return {
            "stability_verified": self.stability_verified,
            "stability_note": self.stability_note,
            "merged_ok": self.merged_ok,
            "scaling_ok": self.scaling_ok,
            "density_ok": self.density_ok,
            "worst_gap": None if self.worst_gap is None else self.worst_gap.to_payload(),
            "supported": self.supported,
            "trace": [e.to_json() for e in self.trace],
        }


def multiplication_support(p: Params, depth: int = 6, eps: Fraction = Fraction(1, 50)) -> MulSupport:
    """Oracle density over [0,1] plus piece checks; stability attempt recorded."""
    from . import oracle  # local import: oracle depends only on lower layers

    lam, c = p.lam, p.c
    tr = Trace()
    stability_verified = False
    note = ""
    try:
        closure = stable_closure(
            BinaryOp.MUL, SUM_WORDSET, SUM_WORDSET, p, "exhaustive", depth=2
        )
        stability_verified = True
        note = "one-step stability verified to extra depth 2"
        tr.extend(closure.trace)
    except StabilityRefusal as refusal:
        note = str(refusal)

    merged_ok = tr.check(
        "product_piece_overlap_low",
        c * c,
        (c - lam) * (1 - lam),
        ">=",
        detail="first product piece must reach the middle piece",
    )
    merged_ok &= tr.check(
        "product_piece_overlap_high",
        c,
        (1 - lam) ** 2,
        ">=",
        detail="middle product piece must reach the top piece",
    )
    scaling_ok = tr.check(
        "product_scaling_covers",
        lam * lam * 1,
        (c - lam) ** 2,
        ">=",
        detail="lam^2 * sup >= inf: lam^2-copies tile [0,1]",
    )
    pts = oracle.enumerate_endpoints(p, depth)
    density = oracle.pairwise_density(
        BinaryOp.MUL, pts, Interval(ZERO, ONE), eps
    )
    return MulSupport(
        stability_verified=stability_verified,
        stability_note=note,
        merged_ok=merged_ok,
        scaling_ok=scaling_ok,
        density_ok=density.covered,
        worst_gap=density.worst_gap,
        trace=tr.entries,
    )


@dataclass
class CorollaryReport:
    """Whether all five representations work at this parameter point."""

    params: Params
    condition_holds: bool
    condition_trace: list[TraceEntry]
    verdicts: dict[str, Verdict]
    multiplication: MulSupport | None
    necessity_witness: Verdict | None

    @property
    def all_supported(self) -> bool:
        if not self.condition_holds or self.multiplication is None:
            return False
        return (
            all(v.status is Status.CERTIFIED_ONTO for v in self.verdicts.values())
            and self.multiplication.supported
        )

    def to_json(self) -> dict:
        return {
            "lambda": format_rational(self.params.lam),
            "c": format_rational(self.params.c),
            "condition": "c >= (1-lambda)^2",
            "condition_holds": self.condition_holds,
            "condition_trace": [e.to_json() for e in self.condition_trace],
            "verdicts": {k: v.to_json() for k, v in self.verdicts.items()},
            "multiplication": None
            if self.multiplication is None
            else self.multiplication.to_json(),
            "necessity_witness": None
            if self.necessity_witness is None
            else self.necessity_witness.to_json(),
            "all_supported": self.all_supported,
        }


def corollary_report(p: Params) -> CorollaryReport:
    """Evaluate c >= (1-lam)^2 and, when it holds, certify all five claims.

    When the condition fails nothing is certified; only the radical-sum
    necessity witness (if any) is reported.
    """
    lam, c = p.lam, p.c
    tr = Trace()
    holds = tr.check(
        "product_region", c, (1 - lam) ** 2, ">=", detail="c >= (1-lambda)^2"
    )
    if not holds:
        witness = None
        probe = verify_sqrtsum(p)
        if probe.status is Status.CERTIFIED_NOT_ONTO:
            witness = probe
        return CorollaryReport(p, False, tr.entries, {}, None, witness)
    verdicts = {
        "sum": verify_sum(p),
        "diff": verify_diff(p),
        "div": verify_div(p),
        "sqrtsum": verify_sqrtsum(p),
    }
    mul = multiplication_support(p)
    return CorollaryReport(p, True, tr.entries, verdicts, mul, None)

"""Interval unions and exact box images of the five operations."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ifsarith.exact import SqrtSum2
from ifsarith.intervals import (
    BinaryOp,
    DivisionByZeroBoundary,
    Interval,
    IntervalUnion,
    MixedEndpointKinds,
    NegativeOperand,
    apply_op,
    box_image,
    normalize,
    op_on_unions,
)

F = Fraction


def iv(a, b):
    return Interval(F(a), F(b))


def test_touching_intervals_merge():
    assert normalize([iv(0, 1), iv(1, 2)]) == IntervalUnion([iv(0, 2)])


def test_normalize_three_sum_pieces():
    # the three pairwise sum images of the two-piece rank-1 set at
    # lam=2/5, c=9/20 merge into [1/10, 2]
    lam, c = F(2, 5), F(9, 20)
    pieces = [
        Interval(2 * (c - lam), 2 * c),
        Interval(c + 1 - 2 * lam, 1 + c),
        Interval(2 - 2 * lam, F(2)),
    ]
    assert normalize(pieces) == IntervalUnion([Interval(F(1, 10), F(2))])


def test_gap_preserved():
    u = normalize([iv(0, 1) , Interval(F(1, 2), F(1))])
    assert len(u.parts) == 1
    u = normalize([Interval(F(0), F(1, 3)), Interval(F(1, 2), F(1))])
    assert len(u.parts) == 2
    assert u.parts[0] == Interval(F(0), F(1, 3))


def test_normalize_idempotent():
    rng = random.Random(1)
    for _ in range(100):
        ivs = []
        for _ in range(rng.randint(0, 8)):
            a = F(rng.randint(-20, 20), rng.randint(1, 9))
            b = a + F(rng.randint(0, 10), rng.randint(1, 9))
            ivs.append(Interval(a, b))
        once = normalize(ivs)
        again = normalize(once.parts)
        assert once == again


def test_mixed_kinds_rejected():
    with pytest.raises(MixedEndpointKinds):
        Interval(F(0), SqrtSum2(2, 0))
    with pytest.raises(MixedEndpointKinds):
        normalize([iv(0, 1), Interval(SqrtSum2(1, 0), SqrtSum2(2, 0))])


def test_embedding_lifts_rational_union():
    u = normalize([iv(0, 1)]).embedded_sqrt()
    assert u.parts[0].lo == SqrtSum2(0, 0)
    assert u.parts[0].hi == SqrtSum2(1, 0)


def test_empty_union_propagates():
    empty = IntervalUnion.empty()
    assert empty.is_empty()
    assert op_on_unions(BinaryOp.ADD, empty, normalize([iv(0, 1)])).is_empty()


def test_box_image_div():
    lam = F(9, 20)
    box = box_image(BinaryOp.DIV, Interval(1 - lam, F(1)), Interval(1 - lam, F(1)))
    assert box == Interval(F(11, 20), F(20, 11))


def test_box_image_degenerate_add():
    assert box_image(BinaryOp.ADD, iv(0, 0), iv(0, 0)) == iv(0, 0)


def test_box_image_sqrt_sum():
    lam = F(2, 5)
    box = box_image(BinaryOp.SQRT_SUM, Interval(1 - lam, F(1)), Interval(1 - lam, F(1)))
    assert box.lo == SqrtSum2(F(3, 5), F(3, 5))
    assert box.hi == SqrtSum2(1, 1)
    # 2*sqrt(3/5) written as one radical
    assert box.lo == SqrtSum2(F(12, 5), 0)


def test_box_image_preconditions():
    with pytest.raises(DivisionByZeroBoundary):
        box_image(BinaryOp.DIV, iv(1, 2), iv(0, 1))
    with pytest.raises(NegativeOperand):
        box_image(BinaryOp.MUL, iv(-1, 1), iv(0, 1))
    with pytest.raises(NegativeOperand):
        box_image(BinaryOp.SQRT_SUM, iv(-1, 1), iv(0, 1))


def test_op_on_unions_sum_construction():
    lam, c = F(2, 5), F(9, 20)
    u = normalize([Interval(c - lam, c), Interval(1 - lam, F(1))])
    assert op_on_unions(BinaryOp.ADD, u, u) == IntervalUnion([Interval(F(1, 10), F(2))])


def test_op_on_unions_point_operands():
    u = normalize([iv(3, 3)])
    v = normalize([iv(7, 7)])
    assert op_on_unions(BinaryOp.MUL, u, v) == IntervalUnion([iv(21, 21)])


def test_op_on_unions_nine_quotient_boxes():
    # the rank-2 three-piece set at lam=7/20, c=1/2; nine quotient boxes
    # must merge into [c-lam^2, 1/(c-lam^2)] = [151/400, 400/151]
    lam, c = F(7, 20), F(1, 2)
    u = normalize(
        [
            Interval(c - lam**2, c),
            Interval(1 - lam, 1 - lam + lam * c),
            Interval(1 - lam**2, F(1)),
        ]
    )
    got = op_on_unions(BinaryOp.DIV, u, u)
    assert got == IntervalUnion([Interval(F(151, 400), F(400, 151))])

    # independent check: merge the nine directly computed endpoint pairs
    parts = [(c - lam**2, c), (1 - lam, 1 - lam + lam * c), (1 - lam**2, F(1))]
    boxes = [
        Interval(a_lo / b_hi, a_hi / b_lo)
        for a_lo, a_hi in parts
        for b_lo, b_hi in parts
    ]
    assert normalize(boxes) == got


def test_div_rejects_union_touching_zero():
    u = normalize([iv(0, 1)])
    with pytest.raises(DivisionByZeroBoundary):
        op_on_unions(BinaryOp.DIV, u, u)


def _random_union(rng, lo=-5, hi=5, max_parts=4):
    ivs = []
    for _ in range(rng.randint(1, max_parts)):
        a = F(rng.randint(lo * 6, hi * 6), 6)
        b = a + F(rng.randint(0, 12), 6)
        ivs.append(Interval(a, b))
    return normalize(ivs)


def _sub_union(rng, u):
    # a union of random subintervals of u's parts
    ivs = []
    for part in u.parts:
        if rng.random() < 0.4:
            continue
        width = part.hi - part.lo
        a = part.lo + width * F(rng.randint(0, 3), 7)
        b = part.hi - width * F(rng.randint(0, 3), 7)
        if a <= b:
            ivs.append(Interval(a, b))
    return normalize(ivs) if ivs else u


def test_monotonicity_in_operands():
    rng = random.Random(5)
    for _ in range(60):
        u = _random_union(rng, 1, 6)
        v = _random_union(rng, 1, 6)
        usub, vsub = _sub_union(rng, u), _sub_union(rng, v)
        for op in (BinaryOp.ADD, BinaryOp.SUB, BinaryOp.MUL, BinaryOp.DIV):
            big = op_on_unions(op, u, v)
            small = op_on_unions(op, usub, vsub)
            assert big.contains_union(small)


def test_extremes_match_extreme_box():
    rng = random.Random(11)
    for _ in range(40):
        u = _random_union(rng, 0, 6)
        v = _random_union(rng, 0, 6)
        for op in (BinaryOp.ADD, BinaryOp.MUL):
            out = op_on_unions(op, u, v)
            extreme = box_image(op, u.hull(), v.hull())
            assert out.min() == extreme.lo
            assert out.max() == extreme.hi


def test_pointwise_soundness():
    rng = random.Random(17)
    u = _random_union(rng, 1, 5)
    v = _random_union(rng, 1, 5)
    ops = (BinaryOp.ADD, BinaryOp.SUB, BinaryOp.MUL, BinaryOp.DIV)
    images = {op: op_on_unions(op, u, v) for op in ops}
    for _ in range(1000):
        pu = rng.choice(u.parts)
        pv = rng.choice(v.parts)
        t1 = F(rng.randint(0, 16), 16)
        t2 = F(rng.randint(0, 16), 16)
        x = pu.lo + (pu.hi - pu.lo) * t1
        y = pv.lo + (pv.hi - pv.lo) * t2
        for op in ops:
            assert images[op].contains_point(apply_op(op, x, y))


def test_sqrt_sum_pointwise_soundness():
    u = normalize([Interval(F(1, 4), F(1, 2)), Interval(F(3, 4), F(1))])
    image = op_on_unions(BinaryOp.SQRT_SUM, u, u)
    rng = random.Random(23)
    for _ in range(200):
        pu, pv = rng.choice(u.parts), rng.choice(u.parts)
        x = pu.lo + (pu.hi - pu.lo) * F(rng.randint(0, 8), 8)
        y = pv.lo + (pv.hi - pv.lo) * F(rng.randint(0, 8), 8)
        assert image.contains_point(SqrtSum2(x, y))


@given(st.lists(st.tuples(st.integers(-30, 30), st.integers(0, 15)), max_size=8))
@settings(max_examples=200, deadline=None)
def test_union_parts_sorted_and_gapped(raw):
    ivs = [Interval(F(a, 4), F(a, 4) + F(w, 4)) for a, w in raw]
    u = normalize(ivs)
    for left, right in zip(u.parts, u.parts[1:]):
        assert left.hi < right.lo


def test_complement_within():
    u = normalize([iv(0, 1), iv(2, 3)])
    gaps = u.complement_within(Interval(F(-1), F(4)))
    assert gaps == [Interval(F(-1), F(0)), iv(1, 2), iv(3, 4)]
    assert u.complement_within(iv(0, 1)) == []


def test_union_independent_of_construction_order():
    rng = random.Random(31)
    ivs = []
    for _ in range(40):
        a = F(rng.randint(0, 60), 12)
        ivs.append(Interval(a, a + F(rng.randint(0, 8), 12)))
    reference = normalize(ivs)
    for _ in range(5):
        rng.shuffle(ivs)
        assert normalize(ivs) == reference

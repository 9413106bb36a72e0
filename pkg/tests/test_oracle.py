"""Brute-force oracle: endpoint sets, density checks, covers and gaps."""

from fractions import Fraction

import pytest

from ifsarith.exact import SqrtSum2
from ifsarith.ifs import Params
from ifsarith.intervals import BinaryOp, Interval, IntervalUnion, apply_op
from ifsarith.oracle import (
    DepthLimit,
    enumerate_endpoints,
    gap_search,
    outer_cover,
    pairwise_density,
    restriction_note,
)

F = Fraction

P = Params(F(2, 5), F(9, 20))
P_BAD = Params(F(1, 5), F(1, 4))
P_NO = Params(F(3, 10), F(2, 5))
SQRT_GAP = Interval(SqrtSum2(F(2, 5), 1), SqrtSum2(F(14, 5), 0))


def test_enumerate_endpoints_depth0_and_1():
    assert enumerate_endpoints(P, 0) == [F(0), F(1)]
    assert enumerate_endpoints(P, 1) == [
        F(0), F(1, 20), F(2, 5), F(9, 20), F(3, 5), F(1),
    ]


def test_enumerate_endpoints_count_bound_and_membership():
    pts = enumerate_endpoints(P, 2)
    assert len(pts) <= 18
    # each depth-2 point survives into depth 3 (images of members are members)
    deeper = set(enumerate_endpoints(P, 3))
    for x in pts:
        assert any(P.map_point(i, x) in deeper for i in (1, 2, 3))


def test_enumerate_endpoints_depth_limit():
    with pytest.raises(DepthLimit):
        enumerate_endpoints(P, 11)
    assert enumerate_endpoints(P, 3, limit=3)


def test_density_trivial_coarse_eps():
    res = pairwise_density(BinaryOp.ADD, [F(0), F(1)], Interval(F(0), F(2)), F(2))
    assert res.covered


def test_density_add_passes_at_reference_point():
    pts = enumerate_endpoints(P, 6)
    res = pairwise_density(BinaryOp.ADD, pts, Interval(F(0), F(2)), F(1, 50))
    assert res.covered


def test_density_add_fails_below_region_with_gap():
    from math import lcm

    pts = enumerate_endpoints(P_BAD, 6)
    res = pairwise_density(BinaryOp.ADD, pts, Interval(F(0), F(2)), F(1, 50))
    assert not res.covered
    assert res.worst_gap is not None
    a, b = res.worst_gap.lo, res.worst_gap.hi
    assert b - a > F(1, 25)  # a macroscopic hole
    # independent check with plain integers: no pairwise sum in the hole
    d = 1
    for x in pts:
        d = lcm(d, x.denominator)
    ns = [x.numerator * (d // x.denominator) for x in pts]
    lo = a * d
    hi = b * d
    assert not any(lo < u + v < hi for u in ns for v in ns)


def test_density_sqrt_sum_runs_exactly_once_scaled():
    pts = enumerate_endpoints(P, 3)
    res = pairwise_density(BinaryOp.SQRT_SUM, pts, Interval(F(0), F(2)), F(1, 10))
    assert res.covered


def test_outer_cover_depth0():
    assert outer_cover(BinaryOp.ADD, P, 0) == IntervalUnion([Interval(F(0), F(2))])
    assert outer_cover(BinaryOp.SUB, P, 0) == IntervalUnion([Interval(F(-1), F(1))])


def test_outer_cover_nesting():
    prev = None
    for depth in range(7):
        cover = outer_cover(BinaryOp.ADD, P_NO, depth)
        if prev is not None:
            assert prev.contains_union(cover)
        prev = cover


def test_outer_cover_contains_pairwise_values():
    for op in (BinaryOp.ADD, BinaryOp.SUB, BinaryOp.MUL, BinaryOp.SQRT_SUM):
        cover = outer_cover(op, P_NO, 4)
        pts = enumerate_endpoints(P_NO, 4)
        for x in pts[::9]:
            for y in pts[::9]:
                assert cover.contains_point(apply_op(op, x, y))


def test_outer_cover_div_restriction():
    note = restriction_note(BinaryOp.DIV, P, 3)
    assert note is not None and "dropped" in note
    cover = outer_cover(BinaryOp.DIV, P, 3)
    # the certified big-route seed at valid params stays inside the cover
    assert cover.contains_interval(Interval(F(3, 5), F(5, 3)))
    assert restriction_note(BinaryOp.ADD, P, 3) is None


def test_gap_search_empty_over_certified_seed():
    gaps = gap_search(BinaryOp.ADD, P, 8, Interval(F(0), F(2)))
    assert gaps == []


def test_gap_search_finds_envelope_gap():
    # window straddling the radical-sum envelope gap at (3/10, 2/5)
    window = Interval(F(8, 5), F(17, 10))
    gaps = gap_search(BinaryOp.SQRT_SUM, P_NO, 10, window)
    assert len(gaps) == 1
    gap = gaps[0]
    # the certified gap must contain the open envelope gap
    assert gap.lo <= SQRT_GAP.lo and SQRT_GAP.hi <= gap.hi


def test_gap_search_exact_on_envelope_window():
    gaps = gap_search(BinaryOp.SQRT_SUM, P_NO, 10, SQRT_GAP)
    assert gaps == [SQRT_GAP.embedded_sqrt()]


def test_gap_soundness_against_deeper_points():
    window = Interval(F(8, 5), F(17, 10))
    gaps = gap_search(BinaryOp.SQRT_SUM, P_NO, 8, window)
    assert gaps
    pts = enumerate_endpoints(P_NO, 10)
    lo_f, hi_f = 1.55, 1.75
    nearby = [x for x in pts if 0 <= x <= 1]
    for gap in gaps:
        for x in nearby[:: max(1, len(nearby) // 60)]:
            for y in nearby[:: max(1, len(nearby) // 60)]:
                v = SqrtSum2(x, y)
                inside = gap.lo.cmp(v) < 0 and v.cmp(gap.hi) < 0
                assert not inside


def test_gap_search_depth_limit():
    with pytest.raises(DepthLimit):
        gap_search(BinaryOp.ADD, P, 15, Interval(F(0), F(2)))

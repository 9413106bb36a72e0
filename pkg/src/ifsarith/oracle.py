"""Brute-force evidence, independent of the certification path.

Three instruments:

* ``enumerate_endpoints`` produces finite point sets provably inside the
  attractor (images of 0 and 1 under all rank-n map compositions);
* ``pairwise_density`` checks an eps-grid of a target interval against
  all pairwise operation values of such a point set;
* ``outer_cover`` / ``gap_search`` compute the operation image of the
  rank-n cover, a superset of the true image, so any open interval
  disjoint from it is a certified gap of the true image.

Density checks are the one place an explicit eps appears.  For addition,
subtraction and multiplication the check is exact integer arithmetic
over a common denominator.  Radical-sum and quotient values are located
with deterministic floor square roots / floor divisions at a fixed huge
scale (10**40); the bound error per value is below 4e-40, forty orders
of magnitude under any eps in use.  Certificates never touch this code
path.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm

from .exact import SqrtSum2, floor_sqrt_scaled as _floor_sqrt_scaled_frac
from .ifs import Params, level_cover
from .intervals import (
    BinaryOp,
    DivisionByZeroBoundary,
    Interval,
    IntervalUnion,
    box_image,
    cmp_endpoint,
)

DEFAULT_ENDPOINT_DEPTH_LIMIT = 10
_COVER_DEPTH_LIMIT = 14
_SQRT_SCALE = 10**40


class DepthLimit(ValueError):
    """Requested depth exceeds the configured desk-scale limit."""


def enumerate_endpoints(
    p: Params, depth: int, limit: int = DEFAULT_ENDPOINT_DEPTH_LIMIT
) -> list[Fraction]:
    """Sorted distinct values f_w(0), f_w(1) over all rank-``depth`` words.

    Both 0 and 1 lie in the attractor and the maps preserve membership,
    so every returned point is provably in it.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if depth > limit:
        raise DepthLimit(f"endpoint depth {depth} exceeds limit {limit}")
    pts = {Fraction(0), Fraction(1)}
    offs = p.offsets
    for _ in range(depth):
        pts = {p.lam * x + off for off in offs for x in pts}
    return sorted(pts)


@dataclass
class DensityResult:
    """Outcome of an eps-grid coverage check."""

    covered: bool
    worst_gap: Interval | None
    grid_points: int
    value_count: int

    def to_json(self) -> dict:
        return {
            "covered": self.covered,
            "worst_gap": None if self.worst_gap is None else self.worst_gap.to_payload(),
            "grid_points": self.grid_points,
            "value_count": self.value_count,
        }


def _pairwise_scaled_values(op: BinaryOp, pts: list[Fraction]) -> tuple[list[int], int]:
    # all pairwise op values as integers over one denominator
    d = 1
    for x in pts:
        d = lcm(d, x.denominator)
    ns = sorted({x.numerator * (d // x.denominator) for x in pts})
    if op is BinaryOp.ADD:
        vals = {a + b for i, a in enumerate(ns) for b in ns[i:]}
        return sorted(vals), d
    if op is BinaryOp.SUB:
        diffs = {a - b for i, a in enumerate(ns) for b in ns[i:]}
        vals = set(diffs)
        vals.update(-v for v in diffs)
        return sorted(vals), d
    if op is BinaryOp.MUL:
        vals = {a * b for i, a in enumerate(ns) for b in ns[i:]}
        return sorted(vals), d * d
    if op is BinaryOp.SQRT_SUM:
        # floor(sqrt(n/d) * SCALE), deterministic, error within 2 units
        roots = [isqrt(n * d * _SQRT_SCALE * _SQRT_SCALE) // d for n in ns]
        vals = {a + b for i, a in enumerate(roots) for b in roots[i:]}
        return sorted(vals), _SQRT_SCALE
    if op is BinaryOp.DIV:
        # quotients do not share a denominator; scale to the same grid
        vals = set()
        for a in ns:
            for b in ns:
                if b > 0:
                    vals.add(a * _SQRT_SCALE // b)
        return sorted(vals), _SQRT_SCALE
    raise AssertionError(op)


def pairwise_density(
    op: BinaryOp, pts: list[Fraction], target: Interval, eps: Fraction
) -> DensityResult:
    """Is every point of an eps-grid of ``target`` within eps of a value?

    Also reports the widest uncovered stretch between consecutive
    computed values inside the target (the located gap on failure).
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    vals, d = _pairwise_scaled_values(op, pts)

    def covered_at(g: Fraction) -> bool:
        lo = (g - eps) * d
        hi = (g + eps) * d
        lo_int = -((-lo.numerator) // lo.denominator)  # ceil
        hi_int = hi.numerator // hi.denominator  # floor
        i = bisect_left(vals, lo_int)
        return i < len(vals) and vals[i] <= hi_int

    grid = []
    g = target.lo
    while g < target.hi:
        grid.append(g)
        g += eps
    grid.append(target.hi)
    ok = all(covered_at(g) for g in grid)

    # widest stretch between consecutive values inside the target, walked
    # in integer space; only the winner converts back to rationals
    ta = target.lo * d
    tb = target.hi * d
    j0 = bisect_left(vals, -((-ta.numerator) // ta.denominator))  # first >= lo
    j1 = bisect_left(vals, tb.numerator // tb.denominator + 1)  # first > hi
    inner = vals[j0:j1]
    if not inner:
        worst = Interval(target.lo, target.hi)
    else:
        best = None
        best_w = 0
        prev = inner[0]
        for v in inner[1:]:
            if v - prev > best_w:
                best_w = v - prev
                best = (prev, v)
            prev = v
        candidates = [(target.lo, Fraction(inner[0], d)), (Fraction(inner[-1], d), target.hi)]
        if best is not None:
            candidates.append((Fraction(best[0], d), Fraction(best[1], d)))
        worst = None
        worst_width = Fraction(-1)
        for a, b in candidates:
            if b - a > worst_width:
                worst_width = b - a
                worst = Interval(a, b)
    return DensityResult(ok, worst, len(grid), len(vals))


def _restricted_cover(op: BinaryOp, p: Params, depth: int) -> tuple[IntervalUnion, IntervalUnion, str | None]:
    cover = level_cover(p, depth)
    note = None
    right = cover
    if op is BinaryOp.DIV:
        kept = tuple(part for part in cover.parts if part.lo > 0)
        dropped = [part for part in cover.parts if part.lo <= 0]
        right = IntervalUnion._from_disjoint_sorted(kept)
        if dropped:
            note = (
                "denominators restricted to cover parts bounded away from zero; "
                f"dropped {dropped[0]!r}"
            )
    return cover, right, note


def restriction_note(op: BinaryOp, p: Params, depth: int) -> str | None:
    """The denominator restriction applied for division, if any."""
    return _restricted_cover(op, p, depth)[2]


def outer_cover(op: BinaryOp, p: Params, depth: int) -> IntervalUnion:
    """Image of the rank-``depth`` cover: a superset of the true image.

    Decreasing in depth.  For division the denominator union drops the
    single part touching zero (see ``restriction_note``).
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if depth > _COVER_DEPTH_LIMIT:
        raise DepthLimit(f"cover depth {depth} exceeds limit {_COVER_DEPTH_LIMIT}")
    left, right, _ = _restricted_cover(op, p, depth)
    n_boxes = len(left.parts) * len(right.parts)
    if n_boxes > 2_500_000:
        raise DepthLimit(
            f"{n_boxes} boxes at depth {depth}; use gap_search with a window instead"
        )
    boxes = [box_image(op, i, j) for i in left.parts for j in right.parts]
    return IntervalUnion(boxes)


def _sqrt_boxes_meeting_window(
    U: IntervalUnion, V: IntervalUnion, window: Interval
) -> list[Interval]:
    # Integer sqrt enclosures at 64 bits prefilter the candidate boxes per
    # row (an enclosure is a proved bound, so no box that meets the window
    # is ever discarded; extra survivors are genuine cover pieces and only
    # sharpen the result).  Within a row the boxes ordered by the second
    # operand have increasing endpoints, so they are merged into runs on
    # the fly; adjacency is decided by the enclosures except for
    # near-ties, which fall back to the exact comparison.  Radical values
    # are materialized once per merged run, keeping wide-window searches
    # tractable at depths with millions of raw boxes.
    bits = 64
    out = []
    vlo = [j.lo for j in V.parts]
    vhi = [j.hi for j in V.parts]
    vlo_enc = [_floor_sqrt_scaled_frac(x, bits) for x in vlo]
    vhi_enc = [_floor_sqrt_scaled_frac(x, bits) for x in vhi]
    w_lo_enc = window.lo.floor_scaled(bits)
    w_hi_enc = window.hi.floor_scaled(bits)
    for i in U.parts:
        filo = _floor_sqrt_scaled_frac(i.lo, bits)
        fihi = _floor_sqrt_scaled_frac(i.hi, bits)
        # box.hi can reach window.lo only if fihi + fjhi + 2 > w_lo_enc
        j0 = bisect_left(vhi_enc, w_lo_enc - fihi - 1)
        # box.lo can stay under window.hi only if filo + fjlo <= w_hi_enc + 1
        j1 = bisect_right(vlo_enc, w_hi_enc - filo + 1)
        if j0 >= j1:
            continue
        run_start = j0
        for k in range(j0, j1 - 1):
            bhi = fihi + vhi_enc[k]
            nlo = filo + vlo_enc[k + 1]
            if bhi >= nlo + 2:
                continue  # surely overlapping, run continues
            if bhi + 2 <= nlo or SqrtSum2(i.hi, vhi[k]).cmp(
                SqrtSum2(i.lo, vlo[k + 1])
            ) < 0:
                out.append(
                    Interval(SqrtSum2(i.lo, vlo[run_start]), SqrtSum2(i.hi, vhi[k]))
                )
                run_start = k + 1
        out.append(
            Interval(SqrtSum2(i.lo, vlo[run_start]), SqrtSum2(i.hi, vhi[j1 - 1]))
        )
    return out


def _boxes_meeting_window(
    op: BinaryOp, U: IntervalUnion, V: IntervalUnion, window: Interval
) -> list[Interval]:
    # Boxes in one row (fixed first operand, second operand ordered so that
    # image endpoints increase) form a contiguous run over the window, so a
    # binary search finds the first candidate and a forward scan collects
    # the rest; rows themselves start further and further right, allowing
    # an outer break.
    if op is BinaryOp.SQRT_SUM:
        return _sqrt_boxes_meeting_window(U, V, window)
    out = []
    reverse = op in (BinaryOp.SUB, BinaryOp.DIV)  # endpoints fall in the 2nd arg
    vparts = list(V.parts)[::-1] if reverse else list(V.parts)
    m = len(vparts)
    for i in U.parts:
        first = box_image(op, i, vparts[0])
        if cmp_endpoint(first.lo, window.hi) > 0:
            break  # this and all later rows lie right of the window
        if cmp_endpoint(box_image(op, i, vparts[-1]).hi, window.lo) < 0:
            continue  # whole row lies left of the window
        lo_k, hi_k = 0, m - 1  # first k with box(i,k).hi >= window.lo
        while lo_k < hi_k:
            mid = (lo_k + hi_k) // 2
            if cmp_endpoint(box_image(op, i, vparts[mid]).hi, window.lo) < 0:
                lo_k = mid + 1
            else:
                hi_k = mid
        for j in vparts[lo_k:]:
            box = box_image(op, i, j)
            if cmp_endpoint(box.lo, window.hi) > 0:
                break
            if cmp_endpoint(box.hi, window.lo) >= 0:
                out.append(box)
    return out


def gap_search(
    op: BinaryOp, p: Params, depth: int, window: Interval
) -> list[Interval]:
    """Maximal open subintervals of ``window`` disjoint from the outer cover.

    Every returned interval is a certified gap of the true image (the
    cover is a superset).  For division the window is interpreted on the
    restricted quotient set (denominators bounded away from zero).
    """
    if depth > _COVER_DEPTH_LIMIT:
        raise DepthLimit(f"cover depth {depth} exceeds limit {_COVER_DEPTH_LIMIT}")
    left, right, _ = _restricted_cover(op, p, depth)
    if right.is_empty():
        raise DivisionByZeroBoundary("no denominator parts remain after restriction")
    if op is BinaryOp.SQRT_SUM:
        window = window.embedded_sqrt()
    boxes = _boxes_meeting_window(op, left, right, window)
    cover_near_window = IntervalUnion(boxes)
    return cover_near_window.complement_within(window)

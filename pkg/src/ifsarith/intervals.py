"""Normalized interval unions and exact box images of the five binary ops.

An ``Interval`` is a closed interval whose endpoints are either both
rational (``Fraction``) or both radical sums (``SqrtSum2``).  An
``IntervalUnion`` is the canonical form of a finite union: parts sorted
by left endpoint, pairwise separated by a gap; touching or overlapping
inputs merge on construction.

``box_image`` evaluates one of the five monotone binary operations
(x+y, x-y, x*y, x/y, sqrt(x)+sqrt(y)) exactly on a box I x J, and
``op_on_unions`` extends it to unions by normalizing all pairwise boxes.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import lcm

from .exact import (
    LT,
    NegativeRadicand,
    SqrtSum2,
    cmp_rational,
    format_rational,
)

# above this many intervals the rational normalize path switches to
# common-denominator integer keys (sorting Fractions is interpreter-slow)
_FAST_SORT_THRESHOLD = 4096


class MixedEndpointKinds(TypeError):
    """Rational and radical endpoints were mixed without an explicit embed."""


class DivisionByZeroBoundary(ZeroDivisionError):
    """Division by an interval whose lower endpoint is not positive."""


class NegativeOperand(ValueError):
    """Mul / sqrt-sum applied to an interval extending below zero."""


Endpoint = Fraction | SqrtSum2


def is_rational_endpoint(x: Endpoint) -> bool:
    return isinstance(x, Fraction)


def cmp_endpoint(x, y) -> int:
    """Exact three-way comparison; rationals embed against radical sums."""
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(y, int):
        y = Fraction(y)
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return cmp_rational(x, y)
    if isinstance(x, SqrtSum2) and isinstance(y, SqrtSum2):
        return x.cmp(y)
    if isinstance(x, Fraction):
        if x < 0:
            return LT  # radical sums are nonnegative
        return SqrtSum2.from_rational(x).cmp(y)
    if isinstance(y, Fraction):
        return -cmp_endpoint(y, x)
    raise TypeError(f"cannot compare {type(x).__name__} with {type(y).__name__}")


def endpoint_str(x: Endpoint) -> str:
    return format_rational(x) if isinstance(x, Fraction) else str(x)


def endpoint_payload(x: Endpoint) -> dict:
    """JSON payload for an endpoint: {"rational": "p/q"} or {"sqrtsum": [..]}."""
    if isinstance(x, Fraction):
        return {"rational": format_rational(x)}
    r = x.as_rational()
    if r is not None:
        return {"rational": format_rational(r)}
    return {"sqrtsum": [format_rational(x.a), format_rational(x.b)]}


@dataclass(frozen=True)
class TraceEntry:
    """One exactly-decided inequality: sign of lhs - rhs against a relation."""

    name: str
    lhs: Endpoint
    rhs: Endpoint
    relation: str  # one of >=, >, <=, <, ==
    sig: int
    detail: str = ""

    _RELATION_OK = {
        ">=": lambda s: s >= 0,
        ">": lambda s: s > 0,
        "<=": lambda s: s <= 0,
        "<": lambda s: s < 0,
        "==": lambda s: s == 0,
    }

    @property
    def ok(self) -> bool:
        return self._RELATION_OK[self.relation](self.sig)

    def reevaluate(self) -> int:
        """Recompute the sign from the stored operands (must equal .sig)."""
        return cmp_endpoint(self.lhs, self.rhs)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "lhs": endpoint_payload(self.lhs),
            "rhs": endpoint_payload(self.rhs),
            "relation": self.relation,
            "lhs_minus_rhs_sign": self.sig,
            "ok": self.ok,
            "detail": self.detail
            or f"{endpoint_str(self.lhs)} {self.relation} {endpoint_str(self.rhs)}",
        }


class Trace:
    """Accumulates TraceEntry records; check() returns whether one holds."""

    def __init__(self):
        self.entries: list[TraceEntry] = []

    def check(self, name: str, lhs, rhs, relation: str = ">=", detail: str = "") -> bool:
        if isinstance(lhs, int):
            lhs = Fraction(lhs)
        if isinstance(rhs, int):
            rhs = Fraction(rhs)
        entry = TraceEntry(name, lhs, rhs, relation, cmp_endpoint(lhs, rhs), detail)
        self.entries.append(entry)
        return entry.ok

    def extend(self, entries) -> None:
        self.entries.extend(entries)

    @property
    def all_ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def first_failure(self) -> TraceEntry | None:
        for e in self.entries:
            if not e.ok:
                return e
        return None


class Interval:
    """Closed interval [lo, hi]; endpoint kinds are homogeneous."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        if isinstance(lo, int):
            lo = Fraction(lo)
        if isinstance(hi, int):
            hi = Fraction(hi)
        if type(lo) is not type(hi) or not isinstance(lo, (Fraction, SqrtSum2)):
            raise MixedEndpointKinds(
                f"interval endpoints must share a kind: {type(lo).__name__} vs {type(hi).__name__}"
            )
        if cmp_endpoint(lo, hi) > 0:
            raise ValueError(f"interval lower end exceeds upper end: {lo!r} > {hi!r}")
        self.lo = lo
        self.hi = hi

    @classmethod
    def _raw(cls, lo, hi) -> "Interval":
        # trusted constructor for hot paths where lo <= hi is structural
        iv = cls.__new__(cls)
        iv.lo = lo
        iv.hi = hi
        return iv

    @property
    def kind(self) -> type:
        return type(self.lo)

    def length(self) -> Fraction:
        if not is_rational_endpoint(self.lo):
            raise TypeError("length is defined for rational-endpoint intervals only")
        return self.hi - self.lo

    def is_point(self) -> bool:
        return cmp_endpoint(self.lo, self.hi) == 0

    def contains_point(self, x) -> bool:
        return cmp_endpoint(self.lo, x) <= 0 and cmp_endpoint(x, self.hi) <= 0

    def contains_interval(self, other: "Interval") -> bool:
        return (
            cmp_endpoint(self.lo, other.lo) <= 0 and cmp_endpoint(other.hi, self.hi) <= 0
        )

    def intersects(self, other: "Interval") -> bool:
        return (
            cmp_endpoint(self.lo, other.hi) <= 0 and cmp_endpoint(other.lo, self.hi) <= 0
        )

    def map_affine(self, scale: Fraction, offset: Fraction) -> "Interval":
        """Image under x -> scale*x + offset with scale > 0 (rational kind)."""
        if not is_rational_endpoint(self.lo):
            raise TypeError("affine maps apply to rational-endpoint intervals only")
        if scale <= 0:
            raise ValueError("affine scale must be positive")
        return Interval._raw(scale * self.lo + offset, scale * self.hi + offset)

    def embedded_sqrt(self) -> "Interval":
        """The same interval with rational endpoints embedded as radical sums."""
        if isinstance(self.lo, SqrtSum2):
            return self
        if self.lo < 0:
            raise NegativeRadicand("cannot embed an interval extending below zero")
        return Interval(SqrtSum2.from_rational(self.lo), SqrtSum2.from_rational(self.hi))

    def __eq__(self, other):
        if not isinstance(other, Interval):
            return NotImplemented
        return (
            cmp_endpoint(self.lo, other.lo) == 0 and cmp_endpoint(self.hi, other.hi) == 0
        )

    __hash__ = None

    def __repr__(self):
        return f"[{endpoint_str(self.lo)}, {endpoint_str(self.hi)}]"

    def to_payload(self) -> list:
        return [endpoint_payload(self.lo), endpoint_payload(self.hi)]


def _merge_sorted(ivs: list[Interval]) -> tuple[Interval, ...]:
    # input sorted by lo; merge touching/overlapping neighbours
    parts: list[Interval] = []
    cur_lo, cur_hi = ivs[0].lo, ivs[0].hi
    for iv in ivs[1:]:
        if cmp_endpoint(iv.lo, cur_hi) <= 0:
            if cmp_endpoint(iv.hi, cur_hi) > 0:
                cur_hi = iv.hi
        else:
            parts.append(Interval(cur_lo, cur_hi))
            cur_lo, cur_hi = iv.lo, iv.hi
    parts.append(Interval(cur_lo, cur_hi))
    return tuple(parts)


def _sort_radical_keyed(ivs: list[Interval]) -> list[Interval]:
    # Sort by a 96-bit integer-sqrt enclosure of the lower endpoint.  The
    # key is a proved bound within two units of the scaled value, so the
    # keyed order can disagree with the true order only inside runs of
    # near-equal keys, which are re-sorted exactly.
    bits = 96
    keyed = sorted((iv.lo.floor_scaled(bits), k) for k, iv in enumerate(ivs))
    out: list[Interval] = []
    i = 0
    n = len(keyed)
    while i < n:
        j = i + 1
        while j < n and keyed[j][0] - keyed[j - 1][0] <= 2:
            j += 1
        run = [ivs[k] for _, k in keyed[i:j]]
        if len(run) > 1:
            run.sort(key=lambda iv: iv.lo)
        out.extend(run)
        i = j
    return out


def _normalize_rational_fast(ivs: list[Interval]) -> tuple[Interval, ...]:
    # common-denominator integer keys: exact and much faster than Fraction sorts
    d = 1
    for iv in ivs:
        d = lcm(d, iv.lo.denominator, iv.hi.denominator)
    keyed = sorted(
        (iv.lo.numerator * (d // iv.lo.denominator), iv.hi.numerator * (d // iv.hi.denominator))
        for iv in ivs
    )
    parts = []
    cur_lo, cur_hi = keyed[0]
    for lo, hi in keyed[1:]:
        if lo <= cur_hi:
            if hi > cur_hi:
                cur_hi = hi
        else:
            parts.append(Interval(Fraction(cur_lo, d), Fraction(cur_hi, d)))
            cur_lo, cur_hi = lo, hi
    parts.append(Interval(Fraction(cur_lo, d), Fraction(cur_hi, d)))
    return tuple(parts)


class IntervalUnion:
    """Canonical finite union of disjoint closed intervals.

    Invariants: parts are sorted by lo and strictly separated
    (part[i].hi < part[i+1].lo); the union equals the set union of its
    parts; an empty union is representable.
    """

    __slots__ = ("parts",)

    def __init__(self, intervals=()):
        ivs = list(intervals)
        if not ivs:
            self.parts: tuple[Interval, ...] = ()
            return
        kinds = {iv.kind for iv in ivs}
        if len(kinds) != 1:
            raise MixedEndpointKinds(
                "a union cannot mix rational and radical endpoints; embed first"
            )
        if kinds == {Fraction} and len(ivs) > _FAST_SORT_THRESHOLD:
            self.parts = _normalize_rational_fast(ivs)
        elif kinds == {SqrtSum2} and len(ivs) > 512:
            self.parts = _merge_sorted(_sort_radical_keyed(ivs))
        else:
            ivs.sort(key=lambda iv: iv.lo)
            self.parts = _merge_sorted(ivs)

    @classmethod
    def empty(cls) -> "IntervalUnion":
        return cls(())

    @classmethod
    def _from_disjoint_sorted(cls, parts: tuple[Interval, ...]) -> "IntervalUnion":
        u = cls.__new__(cls)
        u.parts = parts
        return u

    def is_empty(self) -> bool:
        return not self.parts

    def hull(self) -> Interval | None:
        if not self.parts:
            return None
        return Interval(self.parts[0].lo, self.parts[-1].hi)

    def min(self) -> Endpoint:
        return self.parts[0].lo

    def max(self) -> Endpoint:
        return self.parts[-1].hi

    def total_length(self) -> Fraction:
        return sum((p.length() for p in self.parts), Fraction(0))

    def contains_point(self, x) -> bool:
        return any(p.contains_point(x) for p in self.parts)

    def contains_interval(self, iv: Interval) -> bool:
        return any(p.contains_interval(iv) for p in self.parts)

    def contains_union(self, other: "IntervalUnion") -> bool:
        return all(self.contains_interval(p) for p in other.parts)

    def map_affine(self, scale: Fraction, offset: Fraction) -> "IntervalUnion":
        # order and gaps are preserved for scale > 0, so no re-normalization
        return IntervalUnion._from_disjoint_sorted(
            tuple(p.map_affine(scale, offset) for p in self.parts)
        )

    def embedded_sqrt(self) -> "IntervalUnion":
        return IntervalUnion._from_disjoint_sorted(
            tuple(p.embedded_sqrt() for p in self.parts)
        )

    def intersect_interval(self, window: Interval) -> "IntervalUnion":
        out = []
        for p in self.parts:
            if not p.intersects(window):
                continue
            lo = p.lo if cmp_endpoint(p.lo, window.lo) >= 0 else window.lo
            hi = p.hi if cmp_endpoint(p.hi, window.hi) <= 0 else window.hi
            out.append(Interval(lo, hi))
        return IntervalUnion._from_disjoint_sorted(tuple(out))

    def complement_within(self, window: Interval) -> list[Interval]:
        """Maximal open gaps of the union inside ``window`` (closed reprs)."""
        inside = self.intersect_interval(window)
        gaps = []
        cursor = window.lo
        for p in inside.parts:
            if cmp_endpoint(cursor, p.lo) < 0:
                gaps.append(Interval(cursor, p.lo))
            cursor = p.hi
        if cmp_endpoint(cursor, window.hi) < 0:
            gaps.append(Interval(cursor, window.hi))
        return gaps

    def __eq__(self, other):
        if not isinstance(other, IntervalUnion):
            return NotImplemented
        return len(self.parts) == len(other.parts) and all(
            a == b for a, b in zip(self.parts, other.parts)
        )

    __hash__ = None

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __repr__(self):
        if not self.parts:
            return "{}"
        return " u ".join(repr(p) for p in self.parts)

    def to_payload(self) -> list:
        return [p.to_payload() for p in self.parts]


def normalize(intervals) -> IntervalUnion:
    """Sorted, merged, gap-separated union of the given intervals."""
    return IntervalUnion(intervals)


class BinaryOp(Enum):
    """The five supported operations, each monotone in both arguments."""

    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    DIV = "div"
    SQRT_SUM = "sqrtsum"

    @classmethod
    def from_name(cls, name: str) -> "BinaryOp":
        for op in cls:
            if op.value == name:
                return op
        raise ValueError(f"unknown operation {name!r}")


def _require_rational_operands(op: BinaryOp, I: Interval, J: Interval):
    if not (is_rational_endpoint(I.lo) and is_rational_endpoint(J.lo)):
        raise MixedEndpointKinds(f"{op.value} operands must have rational endpoints")


def box_image(op: BinaryOp, I: Interval, J: Interval) -> Interval:
    """Exact image of the box I x J under the monotone operation.

    Preconditions: J.lo > 0 for DIV; I.lo >= 0 and J.lo >= 0 for MUL and
    SQRT_SUM.  SQRT_SUM produces radical-sum endpoints; the others stay
    rational.
    """
    _require_rational_operands(op, I, J)
    if op is BinaryOp.ADD:
        return Interval._raw(I.lo + J.lo, I.hi + J.hi)
    if op is BinaryOp.SUB:
        return Interval._raw(I.lo - J.hi, I.hi - J.lo)
    if op is BinaryOp.MUL:
        if I.lo < 0 or J.lo < 0:
            raise NegativeOperand("mul requires nonnegative boxes")
        return Interval._raw(I.lo * J.lo, I.hi * J.hi)
    if op is BinaryOp.DIV:
        if J.lo <= 0:
            raise DivisionByZeroBoundary(
                f"denominator interval {J!r} is not bounded away from zero"
            )
        return Interval._raw(I.lo / J.hi, I.hi / J.lo)
    if op is BinaryOp.SQRT_SUM:
        if I.lo < 0 or J.lo < 0:
            raise NegativeOperand("sqrt-sum requires nonnegative boxes")
        return Interval._raw(SqrtSum2(I.lo, J.lo), SqrtSum2(I.hi, J.hi))
    raise AssertionError(op)


def apply_op(op: BinaryOp, x: Fraction, y: Fraction):
    """Pointwise value of the operation; SQRT_SUM yields a SqrtSum2."""
    if op is BinaryOp.ADD:
        return x + y
    if op is BinaryOp.SUB:
        return x - y
    if op is BinaryOp.MUL:
        return x * y
    if op is BinaryOp.DIV:
        if y == 0:
            raise DivisionByZeroBoundary("division by zero point")
        return x / y
    if op is BinaryOp.SQRT_SUM:
        return SqrtSum2(x, y)
    raise AssertionError(op)


def op_on_unions(op: BinaryOp, U: IntervalUnion, V: IntervalUnion) -> IntervalUnion:
    """Normalized union of all pairwise box images; exact.

    Empty operands propagate to an empty result.  DIV demands every part
    of V be bounded away from zero.
    """
    if U.is_empty() or V.is_empty():
        return IntervalUnion.empty()
    if op is BinaryOp.DIV and V.parts[0].lo <= 0:
        raise DivisionByZeroBoundary(
            f"denominator union {V!r} has a part touching zero"
        )
    boxes = [box_image(op, i, j) for i in U.parts for j in V.parts]
    return IntervalUnion(boxes)

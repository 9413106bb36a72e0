"""Exact classification of parameter points and grid scans of the plane.

Every named predicate is a conjunction of polynomial and two-radical
inequalities in (lam, c), evaluated exactly at rational points; grid
lattices are exact rationals (i/n spacing), so no boundary tolerance
exists anywhere.  Scans reproduce the five parameter-region figures;
``check_implication`` evaluates containments between predicate
expressions and reports counterexamples as data rather than asserting
them (with one exception that is algebraically forced and may be
asserted by callers: the product-region condition implies the radical
onto condition via (sqrt(1-lam) - 1)^2 >= 0).
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass
from fractions import Fraction

from .exact import NegativeRadicand, SqrtSum2, as_fraction, format_rational
from .ifs import param_violations
from .intervals import Trace, TraceEntry

# column order is part of the CSV wire format; keep stable
CSV_PREDICATES = (
    "P_fund",
    "P_prod",
    "P_sqrt",
    "P_blue",
    "P_orange3",
    "P_fig4",
    "P_fig5",
    "P_smallpath_pre",
)

ALL_PREDICATES = CSV_PREDICATES + ("P_useful_conclusions",)

CSV_HEADER = (
    "lambda_num,lambda_den,c_num,c_den,"
    "P_fund,P_prod,P_sqrt,P_blue,P_orange3,P_fig4,P_fig5,P_smallpath_pre"
)

# predicate subsets used when reproducing the five region figures
FIGURE_PREDICATES = {
    1: ("P_fund", "P_prod", "P_sqrt"),
    2: ("P_fund", "P_sqrt", "P_blue"),
    3: ("P_fund", "P_sqrt", "P_orange3"),
    4: ("P_fund", "P_sqrt", "P_fig4"),
    5: ("P_fund", "P_sqrt", "P_fig5"),
}

ZERO = Fraction(0)
ONE = Fraction(1)


def _p_fund(ctx, tr: Trace) -> bool:
    violations = ctx.violations
    ok = not violations
    tr.check(
        "P_fund",
        ONE if ok else ZERO,
        ONE,
        ">=",
        detail="lambda<=c<=2*lambda and c+lambda<1"
        + (f" (violated: {', '.join(violations)})" if violations else ""),
    )
    return ok


def _p_prod(ctx, tr: Trace) -> bool:
    return tr.check(
        "prod_condition", ctx.c, ctx.one_minus_lam_sq, ">=", detail="c >= (1-lambda)^2"
    )


def _p_sqrt(ctx, tr: Trace) -> bool:
    return tr.check(
        "sqrt_condition",
        SqrtSum2(ctx.c, ONE),
        SqrtSum2(4 * (1 - ctx.lam), ZERO),
        ">=",
        detail="1+sqrt(c) >= 2*sqrt(1-lambda)",
    )


def _p_blue(ctx, tr: Trace) -> bool:
    lam, c = ctx.lam, ctx.c
    if not tr.check(
        "blue_left_floor", c - lam, ctx.gap_sq, ">=",
        detail="c-lambda >= (1-c-lambda)^2",
    ):
        return False
    return tr.check(
        "blue_length_budget",
        8 * (c - lam) * ctx.linear_2lam,
        lam * ctx.budget_poly,
        ">=",
        detail="8(c-lambda)(2lambda+c-1) >= lambda(3-4lambda-4lambda*c-c^2-2c)",
    )


def _p_orange3(ctx, tr: Trace) -> bool:
    lam, c = ctx.lam, ctx.c
    if not tr.check(
        "orange_left_floor", lam - ctx.lam2, ctx.gap_sq, ">=",
        detail="lambda-lambda^2 >= (1-c-lambda)^2",
    ):
        return False
    return tr.check(
        "orange_length_budget",
        8 * (lam - ctx.lam2) * ctx.linear_2lam,
        ctx.lam2 * ctx.budget_poly,
        ">=",
        detail="8(lambda-lambda^2)(2lambda+c-1) >= lambda^2(...)",
    )


def _p_fig4(ctx, tr: Trace) -> bool:
    lam, c, lam2, lam3 = ctx.lam, ctx.c, ctx.lam2, ctx.lam3
    if not tr.check(
        "bridge_a_left_floor", c * lam - lam3, ctx.gap_sq, ">=",
        detail="c*lambda-lambda^3 >= (1-c-lambda)^2",
    ):
        return False
    if not tr.check(
        "bridge_a_length_budget",
        8 * (c * lam - lam3) * ctx.linear_2lam,
        lam3 * ctx.budget_poly,
        ">=",
        detail="8(c*lambda-lambda^3)(2lambda+c-1) >= lambda^3(...)",
    ):
        return False
    lc = lam * c
    if not tr.check(
        "bridge_a_merge_1",
        SqrtSum2(lc, 1 - lam + lc - lam2 + lam2 * c),
        SqrtSum2(lc - lam3, 1 - lam + lc - lam3),
        ">=",
        detail="first bridge box reaches the second",
    ):
        return False
    if not tr.check(
        "bridge_a_merge_2",
        SqrtSum2(lc, 1 - lam + lc),
        SqrtSum2(lc - lam3, 1 - lam2),
        ">=",
        detail="second bridge box reaches the third",
    ):
        return False
    if not tr.check(
        "bridge_a_lower_containment",
        SqrtSum2(lam, c),
        SqrtSum2(lc - lam3, 1 - lam + lc - lam2),
        ">=",
        detail="bridge starts at or below sqrt(lambda)+sqrt(c)",
    ):
        return False
    if not tr.check(
        "bridge_a_upper_containment",
        SqrtSum2(lc, 1 - lam2 + lam2 * c),
        SqrtSum2(lam - lam2, 1 - lam),
        ">=",
        detail="bridge reaches sqrt(lambda-lambda^2)+sqrt(1-lambda)",
    ):
        return False
    return tr.check(
        "scaling_covers_seed",
        SqrtSum2(4 * lam, ZERO),
        SqrtSum2(lam - lam2, c - lam2),
        ">=",
        detail="2*sqrt(lambda) >= sqrt(lambda-lambda^2)+sqrt(c-lambda^2)",
    )


def _p_fig5(ctx, tr: Trace) -> bool:
    lam, c, lam2, lam3 = ctx.lam, ctx.c, ctx.lam2, ctx.lam3
    base = c - lam + lam2 - lam3
    if not tr.check(
        "bridge_b_left_floor", base, ctx.gap_sq, ">=",
        detail="c-lambda+lambda^2-lambda^3 >= (1-c-lambda)^2",
    ):
        return False
    if not tr.check(
        "bridge_b_length_budget",
        8 * base * ctx.linear_2lam,
        lam3 * ctx.budget_poly,
        ">=",
        detail="8(c-lambda+lambda^2-lambda^3)(2lambda+c-1) >= lambda^3(...)",
    ):
        return False
    if not tr.check(
        "bridge_b_lower_containment",
        SqrtSum2(lam, ONE),
        SqrtSum2(base, 1 - lam2),
        ">=",
        detail="bridge starts at or below sqrt(lambda)+1",
    ):
        return False
    return tr.check(
        "bridge_b_upper_containment",
        SqrtSum2(c - lam + lam2, 1 - lam2 + lam3),
        SqrtSum2(c - lam2, 1 - lam),
        ">=",
        detail="bridge reaches sqrt(c-lambda^2)+sqrt(1-lambda)",
    )


def _p_smallpath_pre(ctx, tr: Trace) -> bool:
    return tr.check(
        "small_left_floor", ctx.c - ctx.lam2, 1 - ctx.c - ctx.lam, ">=",
        detail="c-lambda^2 >= 1-c-lambda",
    )


def _p_useful(ctx, tr: Trace) -> bool:
    lam, c = ctx.lam, ctx.c
    ok = tr.check("useful_prod", c, ctx.one_minus_lam_sq, ">=", detail="c >= (1-lambda)^2")
    ok &= tr.check("useful_2lam", ctx.linear_2lam, ZERO, ">=", detail="2lambda+c-1 >= 0")
    ok &= tr.check("useful_2c", lam + 2 * c - 1, ZERO, ">=", detail="lambda+2c-1 >= 0")
    ok &= tr.check("useful_4c", 4 * c + lam - 1, ZERO, ">=", detail="4c+lambda >= 1")
    return ok


class _PointContext:
    """Cached subexpressions shared by the predicate evaluators."""

    __slots__ = (
        "lam", "c", "lam2", "lam3", "gap_sq", "one_minus_lam_sq",
        "linear_2lam", "budget_poly", "violations",
    )

    def __init__(self, lam: Fraction, c: Fraction):
        self.lam = lam
        self.c = c
        self.lam2 = lam * lam
        self.lam3 = self.lam2 * lam
        gap = 1 - c - lam
        self.gap_sq = gap * gap
        oml = 1 - lam
        self.one_minus_lam_sq = oml * oml
        self.linear_2lam = 2 * lam + c - 1
        self.budget_poly = 3 - 4 * lam - 4 * lam * c - c * c - 2 * c
        self.violations = param_violations(lam, c)


def _total(fn):
    # predicates are total on 0 < lam < 1, c in Q: a negative radicand
    # means the point lies outside the radical system's domain, which the
    # conjunction treats as false (recorded in the trace)
    def wrapped(ctx, tr: Trace) -> bool:
        try:
            return fn(ctx, tr)
        except NegativeRadicand as exc:
            tr.check("radicands_nonnegative", ZERO, ONE, ">=", detail=str(exc))
            return False

    wrapped.__name__ = fn.__name__
    return wrapped


_EVALUATORS = {
    "P_fund": _total(_p_fund),
    "P_prod": _total(_p_prod),
    "P_sqrt": _total(_p_sqrt),
    "P_blue": _total(_p_blue),
    "P_orange3": _total(_p_orange3),
    "P_fig4": _total(_p_fig4),
    "P_fig5": _total(_p_fig5),
    "P_smallpath_pre": _total(_p_smallpath_pre),
    "P_useful_conclusions": _total(_p_useful),
}


@dataclass
class PointClassification:
    lam: Fraction
    c: Fraction
    values: dict[str, bool]
    traces: dict[str, list[TraceEntry]]

    @property
    def bitmask(self) -> int:
        mask = 0
        for k, name in enumerate(CSV_PREDICATES):
            if self.values[name]:
                mask |= 1 << k
        return mask

    def to_json(self) -> dict:
        return {
            "lambda": format_rational(self.lam),
            "c": format_rational(self.c),
            "predicates": {name: self.values[name] for name in ALL_PREDICATES},
            "bitmask": self.bitmask,
            "traces": {
                name: [e.to_json() for e in entries]
                for name, entries in self.traces.items()
            },
        }


def classify_point(lam, c, predicates=ALL_PREDICATES) -> PointClassification:
    """Exact truth value of every named predicate at one rational point."""
    lam = as_fraction(lam)
    c = as_fraction(c)
    ctx = _PointContext(lam, c)
    values: dict[str, bool] = {}
    traces: dict[str, list[TraceEntry]] = {}
    for name in predicates:
        tr = Trace()
        values[name] = _EVALUATORS[name](ctx, tr)
        traces[name] = tr.entries
    return PointClassification(lam, c, values, traces)


def _mask_at(lam, c) -> int:
    ctx = _PointContext(lam, c)
    mask = 0
    for k, name in enumerate(CSV_PREDICATES):
        if _EVALUATORS[name](ctx, Trace()):
            mask |= 1 << k
    return mask


@dataclass(frozen=True)
class GridSpec:
    """An exact rational lattice over a rectangle of the parameter plane."""

    lmin: Fraction
    lmax: Fraction
    cmin: Fraction
    cmax: Fraction
    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid needs nx >= 2 and ny >= 2")
        if self.lmin > self.lmax or self.cmin > self.cmax:
            raise ValueError("grid ranges are reversed")

    def lam_at(self, i: int) -> Fraction:
        return self.lmin + Fraction(i, self.nx - 1) * (self.lmax - self.lmin)

    def c_at(self, j: int) -> Fraction:
        return self.cmin + Fraction(j, self.ny - 1) * (self.cmax - self.cmin)

    def points(self):
        for i in range(self.nx):
            lam = self.lam_at(i)
            for j in range(self.ny):
                yield i, j, lam, self.c_at(j)


DEFAULT_GRID_RANGES = dict(
    lmin=Fraction(0), lmax=Fraction(1, 2), cmin=Fraction(0), cmax=Fraction(1)
)


def default_grid(nx: int, ny: int) -> GridSpec:
    return GridSpec(nx=nx, ny=ny, **DEFAULT_GRID_RANGES)


@dataclass
class RegionMap:
    """Per-point predicate bitmasks over a grid; masks[i][j] is (lam_i, c_j)."""

    spec: GridSpec
    masks: tuple[tuple[int, ...], ...]

    def rows(self):
        for i in range(self.spec.nx):
            lam = self.spec.lam_at(i)
            for j in range(self.spec.ny):
                yield lam, self.spec.c_at(j), self.masks[i][j]


def _scan_column(args) -> tuple[int, ...]:
    spec, i = args
    lam = spec.lam_at(i)
    return tuple(_mask_at(lam, spec.c_at(j)) for j in range(spec.ny))


def resolve_threads(threads: int | None) -> int:
    if threads is not None:
        return max(1, threads)
    env = os.environ.get("AA_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def scan_grid(spec: GridSpec, threads: int | None = 1) -> RegionMap:
    """Classify every lattice point; deterministic for any worker count."""
    threads = resolve_threads(threads)
    jobs = [(spec, i) for i in range(spec.nx)]
    if threads > 1 and spec.nx > 1:
        import multiprocessing

        with multiprocessing.Pool(threads) as pool:
            columns = pool.map(_scan_column, jobs, chunksize=max(1, spec.nx // (4 * threads)))
    else:
        columns = [_scan_column(job) for job in jobs]
    return RegionMap(spec, tuple(columns))


# ---------------------------------------------------------------------------
# implications
# ---------------------------------------------------------------------------


def parse_predicate_expr(expr: str):
    """'A&B|C' -> evaluator over a {name: bool} dict ('|' binds loosest)."""
    groups = []
    for part in expr.split("|"):
        names = tuple(name.strip() for name in part.split("&"))
        for name in names:
            if name not in ALL_PREDICATES:
                raise ValueError(f"unknown predicate {name!r}")
        groups.append(names)

    def evaluate(values: dict[str, bool]) -> bool:
        return any(all(values[name] for name in names) for names in groups)

    evaluate.names = tuple(n for g in groups for n in g)  # type: ignore[attr-defined]
    return evaluate


@dataclass
class Counterexample:
    lam: Fraction
    c: Fraction

    def to_csv_row(self) -> str:
        return (
            f"{self.lam.numerator},{self.lam.denominator},"
            f"{self.c.numerator},{self.c.denominator}"
        )


def check_implication(
    frm: str, to: str, spec: GridSpec, threads: int | None = 1
) -> list[Counterexample]:
    """Grid points where ``frm`` holds and ``to`` fails, in scan order."""
    f_from = parse_predicate_expr(frm)
    f_to = parse_predicate_expr(to)
    needed = tuple(dict.fromkeys(f_from.names + f_to.names))
    out = []
    for _, _, lam, c in spec.points():
        ctx = _PointContext(lam, c)
        values = {name: _EVALUATORS[name](ctx, Trace()) for name in needed}
        if f_from(values) and not f_to(values):
            out.append(Counterexample(lam, c))
    return out


def counterexamples_csv(rows: list[Counterexample]) -> str:
    buf = io.StringIO()
    buf.write("lambda_num,lambda_den,c_num,c_den\n")
    for r in rows:
        buf.write(r.to_csv_row() + "\n")
    return buf.getvalue()


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

_PALETTE = (
    "#f5f5f5", "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8",
    "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5", "#c49c94", "#f7b6d2",
    "#dbdb8d", "#9edae5", "#393b79", "#637939", "#8c6d31", "#843c39",
)


def _project_mask(mask: int, predicates) -> int:
    out = 0
    for k, name in enumerate(predicates):
        bit = CSV_PREDICATES.index(name)
        if mask & (1 << bit):
            out |= 1 << k
    return out


def map_to_csv(m: RegionMap) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for lam, c, mask in m.rows():
        cells = [
            str(lam.numerator), str(lam.denominator),
            str(c.numerator), str(c.denominator),
        ]
        cells.extend(str((mask >> k) & 1) for k in range(len(CSV_PREDICATES)))
        buf.write(",".join(cells) + "\n")
    return buf.getvalue()


def load_map_csv(path) -> list[tuple[Fraction, Fraction, int]]:
    """Parse a scan CSV back to exact (lam, c, bitmask) rows."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if ",".join(header) != CSV_HEADER:
            raise ValueError("unexpected CSV header")
        for row in reader:
            lam = Fraction(int(row[0]), int(row[1]))
            c = Fraction(int(row[2]), int(row[3]))
            mask = 0
            for k in range(len(CSV_PREDICATES)):
                if row[4 + k] == "1":
                    mask |= 1 << k
            rows.append((lam, c, mask))
    return rows


def map_to_svg(m: RegionMap, predicates=CSV_PREDICATES) -> str:
    cell = 2
    width = m.spec.nx * cell
    height = m.spec.ny * cell
    legend_masks = sorted(
        {_project_mask(mask, predicates) for col in m.masks for mask in col}
    )
    color = {
        mask: _PALETTE[idx % len(_PALETTE)] for idx, mask in enumerate(legend_masks)
    }
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height + 14 * (len(legend_masks) + 1)}" '
        f'viewBox="0 0 {width} {height + 14 * (len(legend_masks) + 1)}">',
        f"<!-- predicates: {','.join(predicates)}; lambda left-to-right "
        f"[{format_rational(m.spec.lmin)},{format_rational(m.spec.lmax)}], "
        f"c bottom-to-top [{format_rational(m.spec.cmin)},{format_rational(m.spec.cmax)}] -->",
    ]
    for i in range(m.spec.nx):
        for j in range(m.spec.ny):
            pm = _project_mask(m.masks[i][j], predicates)
            x = i * cell
            y = (m.spec.ny - 1 - j) * cell
            out.append(
                f'<rect x="{x}" y="{y}" width="{cell}" height="{cell}" '
                f'fill="{color[pm]}"/>'
            )
    y = height + 12
    out.append(
        f'<text x="2" y="{y}" font-size="10" font-family="monospace">'
        f"legend (bits: {','.join(predicates)})</text>"
    )
    for mask in legend_masks:
        y += 14
        names = [name for k, name in enumerate(predicates) if mask & (1 << k)]
        out.append(
            f'<rect x="2" y="{y - 9}" width="10" height="10" fill="{color[mask]}"/>'
            f'<text x="16" y="{y}" font-size="10" font-family="monospace">'
            f"{mask:#05b} {'+'.join(names) if names else 'none'}</text>"
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def map_to_pgm(m: RegionMap, predicates=CSV_PREDICATES) -> str:
    # plain-text PGM, one gray level per projected bitmask
    maxval = max(1, (1 << len(predicates)) - 1)
    lines = [f"P2", f"{m.spec.nx} {m.spec.ny}", str(maxval)]
    for j in range(m.spec.ny - 1, -1, -1):
        lines.append(
            " ".join(
                str(_project_mask(m.masks[i][j], predicates))
                for i in range(m.spec.nx)
            )
        )
    return "\n".join(lines) + "\n"


def render_map(m: RegionMap, out_path, fmt: str, predicates=CSV_PREDICATES) -> list[str]:
    """Write the map as svg, pgm or csv; image formats get a CSV twin.

    Returns the list of files written.
    """
    out_path = str(out_path)
    written = []
    if fmt == "csv":
        with open(out_path, "w") as fh:
            fh.write(map_to_csv(m))
        return [out_path]
    if fmt == "svg":
        payload = map_to_svg(m, predicates)
    elif fmt == "pgm":
        payload = map_to_pgm(m, predicates)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    with open(out_path, "w") as fh:
        fh.write(payload)
    written.append(out_path)
    twin = out_path + ".csv"
    with open(twin, "w") as fh:
        fh.write(map_to_csv(m))
    written.append(twin)
    return written

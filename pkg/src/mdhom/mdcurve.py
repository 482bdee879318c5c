"""MD homology of complex plane curve germs with the outer metric.

For ``b >= 1`` both ``MDH_0^b`` and ``MDH_1^b`` are free of rank equal to the
number of Eggers-Wall tree points just above height ``b``.  Going down from
``b1`` to ``b2``, degree 0 sends each upper point to the lower point below it
(a block of ones) and degree 1 multiplies by the ratio of edge weights.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .bdiagram import BDiagram, DiagramError, FramedDiagram
from .eggers import EggersWallTree, LevelSlice, assemble_tree, build_tree, level_slice
from .exactnum import ExtRat, GaussRat, IntMatrix
from .puiseux import Curve, tangent_slope

__all__ = [
    "TangentLine",
    "MultiplicityReport",
    "tangent_lines",
    "slice_matrices",
    "md_diagram",
    "relative_multiplicities",
    "reconstruct_tree",
    "detect_smooth",
]


@dataclass(frozen=True)
class TangentLine:
    id: str
    slope: GaussRat

    def __str__(self):
        if self.slope == 0:
            return "y = 0"
        return "y = x" if self.slope == 1 else f"y = {self.slope}*x"


def tangent_lines(c: Curve) -> list[tuple[TangentLine, list[str]]]:
    """Distinct tangent lines with their branches, in order of first appearance."""
    lines: dict[GaussRat, list[str]] = {}
    for s in c.branches:
        lines.setdefault(tangent_slope(s), []).append(s.branch_id)
    return [(TangentLine(f"T{i + 1}", slope), ids) for i, (slope, ids) in enumerate(lines.items())]


def slice_matrices(upper: LevelSlice, lower: LevelSlice) -> tuple[IntMatrix, IntMatrix]:
    """Degree-0 and degree-1 matrices of the map from the upper slice to the lower."""
    m0, m1 = [], []
    for q in lower.points:
        r0, r1 = [], []
        for p in upper.points:
            over = p.branches_through <= q.branches_through
            r0.append(1 if over else 0)
            r1.append(p.weight // q.weight if over else 0)
            if over and p.weight % q.weight:
                raise DiagramError("edge weights do not divide along the tree")
        m0.append(r0)
        m1.append(r1)
    cols = len(upper.points)
    return IntMatrix.from_rows(m0, cols), IntMatrix.from_rows(m1, cols)


def _diagram_from_tree(tree: EggersWallTree, one_basis: Sequence[str]) -> FramedDiagram:
    bps = [Fraction(1)] + [h for h in tree.interior_heights() if h > 1]
    slices = [level_slice(tree, ExtRat(t)) for t in bps]
    ranks = [len(s) for s in slices]
    n1 = ranks[0]
    steps0 = [IntMatrix.from_rows([[1] * n1], n1)]
    steps1 = [IntMatrix.zeros(0, n1)]
    for lower, upper in zip(slices, slices[1:]):
        a, b = slice_matrices(upper, lower)
        steps0.append(a)
        steps1.append(b)
    bps_t = tuple(bps)
    deg0 = BDiagram(0, bps_t, tuple([1] + ranks), tuple(steps0))
    deg1 = BDiagram(1, bps_t, tuple([0] + ranks), tuple(steps1))
    return FramedDiagram(deg0, deg1, tree.branch_order, tuple(one_basis))


def md_diagram(c: Curve) -> FramedDiagram:
    """Framed MD homology diagram (degrees 0 and 1) of a plane curve germ."""
    tree = build_tree(c)
    return _diagram_from_tree(tree, [t.id for t, _ in tangent_lines(c)])


@dataclass(frozen=True)
class MultiplicityReport:
    per_tangent: tuple[tuple[TangentLine, tuple[tuple[str, int], ...]], ...]

    @property
    def totals(self) -> dict[str, int]:
        return {t.id: sum(m for _, m in rows) for t, rows in self.per_tangent}

    def to_json(self) -> dict:
        return {
            "tangents": [
                {
                    "id": t.id,
                    "slope": t.slope.to_json(),
                    "branches": [{"id": b, "multiplicity": m} for b, m in rows],
                    "total": sum(m for _, m in rows),
                }
                for t, rows in self.per_tangent
            ]
        }

    def format(self) -> str:
        lines = ["tangent  line            branch  multiplicity"]
        for t, rows in self.per_tangent:
            for b, m in rows:
                lines.append(f"{t.id:<8} {str(t):<15} {b:<7} {m}")
            lines.append(f"{t.id:<8} {'total':<15} {'':<7} {sum(m for _, m in rows)}")
        return "\n".join(lines) + "\n"


def relative_multiplicities(c: Curve) -> MultiplicityReport:
    """Covering degrees of the branches over the tangent lines, from the framed h^{inf,1}."""
    f = md_diagram(c)
    h = f.deg1.composite(f.deg1.top, f.deg1.interval_index(1))
    lines = tangent_lines(c)
    by_id = {t.id: t for t, _ in lines}
    out = []
    for r, tid in enumerate(f.one_basis):
        rows = tuple((f.inf_basis[i], h[r, i]) for i in range(h.cols) if h[r, i])
        out.append((by_id[tid], rows))
    return MultiplicityReport(tuple(out))


def _check_curve_shaped(f: FramedDiagram) -> None:
    d0, d1 = f.degrees
    if d0.breakpoints != d1.breakpoints:
        raise DiagramError("degree 0 and degree 1 ladders differ")
    if d0.ranks[0] != 1 or d1.ranks[0] != 0 or d0.ranks[1:] != d1.ranks[1:]:
        raise DiagramError("ranks are not those of a curve")
    for j in range(1, len(d0.steps)):
        s0, s1 = d0.steps[j], d1.steps[j]
        for c in range(s0.cols):
            col = s0.column(c)
            if sorted(col) != [0] * (len(col) - 1) + [1]:
                raise DiagramError(f"degree-0 step {j}: column {c} is not a unit vector")
            for r in range(s0.rows):
                if (s1[r, c] > 0) != (col[r] == 1) or s1[r, c] < 0:
                    raise DiagramError(f"degree-1 step {j}: support differs from degree 0")
    if d0.steps[0] != IntMatrix.from_rows([[1] * d0.ranks[1]], d0.ranks[1]):
        raise DiagramError("degree-0 step into (0,1) is not all ones")


def reconstruct_tree(f: FramedDiagram) -> EggersWallTree:
    """Eggers-Wall tree recovered from a framed curve diagram.

    Contacts: the breakpoint at which two basis vectors at infinity start
    mapping to different generators in degree 0.  Characteristic exponents:
    breakpoints where a branch's degree-1 edge weight grows.
    """
    _check_curve_shaped(f)
    d0, d1 = f.degrees
    top = d0.top
    n = len(f.inf_basis)
    comps0 = [d0.composite(top, j) for j in range(d0.n_intervals)]
    comps1 = [d1.composite(top, j) for j in range(d1.n_intervals)]

    def point_of(j: int, i: int) -> int:
        col = comps0[j].column(i)
        return col.index(1)

    contacts = {}
    for a in range(n):
        for b in range(a + 1, n):
            t = None
            for j in range(1, d0.n_intervals):
                if point_of(j, a) != point_of(j, b):
                    t = d0.breakpoints[j - 1]
                    break
            if t is None:
                raise DiagramError(f"basis vectors {a} and {b} never separate")
            ia, ib = f.inf_basis[a], f.inf_basis[b]
            contacts[(ia, ib) if ia <= ib else (ib, ia)] = ExtRat(t)

    chars = {}
    for i, bid in enumerate(f.inf_basis):
        # multiplier from infinity down to I_j is kappa / (edge weight above t_j)
        mult = [comps1[j][point_of(j, i), i] for j in range(1, d1.n_intervals)]
        kappa = mult[0]
        weights = []
        for m in mult:
            if kappa % m:
                raise DiagramError("degree-1 multipliers are not divisors of the multiplicity")
            weights.append(kappa // m)
        if weights[0] != 1:
            raise DiagramError("edge weight above b = 1 must be 1")
        data = []
        for j in range(1, len(weights)):
            if weights[j] != weights[j - 1]:
                if weights[j] % weights[j - 1]:
                    raise DiagramError("edge weights do not divide along a branch")
                data.append((d1.breakpoints[j], weights[j] // weights[j - 1]))
        chars[bid] = data
    return assemble_tree(f.inf_basis, chars, contacts)


def detect_smooth(f: FramedDiagram) -> bool:
    """Does the framed diagram equal that of a single smooth branch?"""
    d0, d1 = f.degrees
    return (
        d0.breakpoints == (Fraction(1),)
        and d0.ranks == (1, 1)
        and d1.ranks == (0, 1)
        and d0.steps[0] == IntMatrix.identity(1)
        and len(f.inf_basis) == 1
        and len(f.one_basis) == 1
    )

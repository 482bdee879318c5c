"""B-indexed diagrams of free abelian groups.

A :class:`BDiagram` is a staircase over ``(0, inf]``: breakpoints
``1 = t_1 < ... < t_N`` cut the axis into ``I_0 = (0, 1)``,
``I_j = [t_j, t_{j+1})`` and ``I_N = [t_N, inf]``.  The group on ``I_j`` is
``Z^ranks[j]`` and ``steps[j]`` is the matrix of the structure map from
``I_{j+1}`` down to ``I_j`` (acting on column vectors).
"""
from __future__ import annotations

import bisect
import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

from .exactnum import (
    ExtRat,
    IntMatrix,
    SnfResult,
    format_fraction,
    fraction_from_json,
    fraction_to_json,
    is_unimodular,
    snf,
)

__all__ = [
    "DiagramError",
    "BDiagram",
    "FramedDiagram",
    "Signature",
    "Verdict",
    "point_diagram",
    "evaluate",
    "morphism_matrix",
    "jumping_rates",
    "invariant_signature",
    "compare_unframed",
    "compare_framed",
    "diagram_to_json",
    "diagram_from_json",
    "framed_to_json",
    "framed_from_json",
    "format_table",
]


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class BDiagram:
    degree: int
    breakpoints: tuple[Fraction, ...]
    ranks: tuple[int, ...]
    steps: tuple[IntMatrix, ...]

    def __post_init__(self):
        bps = tuple(Fraction(t) for t in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "ranks", tuple(self.ranks))
        object.__setattr__(self, "steps", tuple(self.steps))
        if not bps or bps[0] != 1:
            raise DiagramError("the first breakpoint must be 1")
        if any(a >= b for a, b in zip(bps, bps[1:])):
            raise DiagramError("breakpoints must be strictly increasing")
        if len(self.ranks) != len(bps) + 1 or len(self.steps) != len(bps):
            raise DiagramError("need one rank per interval and one step per breakpoint")
        if any(r < 0 for r in self.ranks):
            raise DiagramError("negative rank")
        for j, s in enumerate(self.steps):
            if s.shape != (self.ranks[j], self.ranks[j + 1]):
                raise DiagramError(
                    f"step {j} has shape {s.shape}, expected {(self.ranks[j], self.ranks[j + 1])}"
                )

    @property
    def n_intervals(self) -> int:
        return len(self.ranks)

    @property
    def top(self) -> int:
        return len(self.ranks) - 1

    def interval_index(self, b) -> int:
        b = ExtRat.of(b)
        if b.is_inf:
            return self.top
        if b.fraction <= 0:
            raise DiagramError(f"b must be positive, got {b}")
        return bisect.bisect_right(self.breakpoints, b.fraction)

    def interval_label(self, j: int) -> str:
        lo = "0" if j == 0 else format_fraction(self.breakpoints[j - 1])
        if j == self.top:
            return f"[{lo}, inf]"
        hi = format_fraction(self.breakpoints[j])
        return f"(0, {hi})" if j == 0 else f"[{lo}, {hi})"

    def sample_point(self, j: int) -> ExtRat:
        """A value of b lying in interval ``j``."""
        if j == 0:
            return ExtRat(Fraction(1, 2))
        return ExtRat(self.breakpoints[j - 1])

    def composite(self, upper: int, lower: int) -> IntMatrix:
        """Structure map from interval ``upper`` down to interval ``lower``."""
        if upper < lower:
            raise DiagramError("composite goes from a higher interval to a lower one")
        m = IntMatrix.identity(self.ranks[upper])
        for j in range(upper - 1, lower - 1, -1):
            m = self.steps[j] @ m
        return m


@dataclass(frozen=True)
class FramedDiagram:
    """Degree-0 and degree-1 diagrams with bases named at b = inf and b = 1."""

    deg0: BDiagram
    deg1: BDiagram
    inf_basis: tuple[str, ...]
    one_basis: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "inf_basis", tuple(self.inf_basis))
        object.__setattr__(self, "one_basis", tuple(self.one_basis))
        for d in (self.deg0, self.deg1):
            if d.ranks[-1] != len(self.inf_basis):
                raise DiagramError("inf_basis size differs from the rank at infinity")
        if self.deg1.ranks[self.deg1.interval_index(1)] != len(self.one_basis):
            raise DiagramError("one_basis size differs from the rank at b = 1")

    @property
    def degrees(self) -> tuple[BDiagram, BDiagram]:
        return (self.deg0, self.deg1)


def point_diagram(degree: int) -> BDiagram:
    """MD homology of a point: Z in degree 0, nothing above."""
    r = 1 if degree == 0 else 0
    return BDiagram(degree, (Fraction(1),), (r, r), (IntMatrix.identity(r),))


def evaluate(d: BDiagram, b) -> int:
    return d.ranks[d.interval_index(b)]


def morphism_matrix(d: BDiagram, b1, b2) -> IntMatrix:
    """Matrix of ``h^{b1,b2}`` for ``b1 >= b2``."""
    b1, b2 = ExtRat.of(b1), ExtRat.of(b2)
    if b1 < b2:
        raise DiagramError(f"h^{{b1,b2}} needs b1 >= b2, got {b1} < {b2}")
    return d.composite(d.interval_index(b1), d.interval_index(b2))


def _as_diagrams(f) -> tuple[BDiagram, ...]:
    if isinstance(f, FramedDiagram):
        return f.degrees
    if isinstance(f, BDiagram):
        return (f,)
    return tuple(f)


def _jump_indices(d: BDiagram) -> list[int]:
    """Indices ``j >= 1`` such that the step into ``I_{j-1}`` is not invertible."""
    return [j for j in range(1, d.n_intervals) if not is_unimodular(d.steps[j - 1])]


def jumping_rates(f: Union[FramedDiagram, BDiagram, Iterable[BDiagram]]) -> frozenset[Fraction]:
    """Breakpoints where some degree's structure map fails to be an isomorphism."""
    out: set[Fraction] = set()
    for d in _as_diagrams(f):
        out.update(d.breakpoints[j - 1] for j in _jump_indices(d))
    return frozenset(out)


@dataclass(frozen=True)
class Signature:
    degree: int
    ladder: tuple[Fraction, ...]
    ranks: tuple[int, ...]
    snfs: tuple[tuple[int, int, SnfResult], ...]


def invariant_signature(d: BDiagram) -> Signature:
    """Ranks and SNFs of all composites, over the intervals cut by jumping rates.

    Breakpoints where the structure map is an isomorphism are merged away, so
    two isomorphic diagrams get equal signatures even if one of them carries
    redundant breakpoints.
    """
    jumps = _jump_indices(d)
    reps = [0] + jumps
    snfs = tuple(
        (a, c, snf(d.composite(reps[a], reps[c])))
        for a in range(len(reps))
        for c in range(a + 1)
    )
    return Signature(
        d.degree,
        tuple(d.breakpoints[j - 1] for j in jumps),
        tuple(d.ranks[j] for j in reps),
        snfs,
    )


class Verdict(str, enum.Enum):
    DISTINGUISHED = "Distinguished"
    NOT_DISTINGUISHED = "NotDistinguished"

    def __str__(self):
        return self.value


def compare_unframed(a, b) -> Verdict:
    """Invariant-based comparison of graded diagrams (degree 0 and 1).

    Sound for ``DISTINGUISHED`` only: ``NOT_DISTINGUISHED`` means none of the
    computed invariants separates the two diagrams.
    """
    da, db = _as_diagrams(a), _as_diagrams(b)
    if len(da) != len(db):
        return Verdict.DISTINGUISHED
    for x, y in zip(da, db):
        if invariant_signature(x) != invariant_signature(y):
            return Verdict.DISTINGUISHED
    return Verdict.NOT_DISTINGUISHED


# -- framed comparison --------------------------------------------------------

def _branch_profile(f: FramedDiagram, i: int) -> tuple:
    """Invariant of basis vector ``i`` at infinity under row permutations below."""
    prof = []
    for d in f.degrees:
        for j in range(d.n_intervals):
            m = d.composite(d.top, j)
            col = m.column(i)
            twins = sum(1 for c in range(m.cols) if m.column(c) == col)
            prof.append((tuple(sorted(col)), twins))
    return tuple(prof)


def _bijections(candidates: Sequence[Sequence[int]]) -> Iterator[list[int]]:
    n = len(candidates)
    used = [False] * n
    perm = [-1] * n

    def rec(i: int) -> Iterator[list[int]]:
        if i == n:
            yield list(perm)
            return
        for j in candidates[i]:
            if not used[j]:
                used[j] = True
                perm[i] = j
                yield from rec(i + 1)
                used[j] = False

    return rec(0)


def _row_matchings(rows_a: Sequence[tuple], rows_b: Sequence[tuple]) -> Iterator[list[int]]:
    """All bijections ``tau`` with ``rows_b[tau[r]] == rows_a[r]``."""
    groups: dict[tuple, list[int]] = {}
    for r, row in enumerate(rows_b):
        groups.setdefault(row, []).append(r)
    cands = []
    for row in rows_a:
        if row not in groups:
            return iter(())
        cands.append(groups[row])
    if len(cands) != len(rows_b):
        return iter(())
    return _bijections(cands)


def _degree_matches(da: BDiagram, db: BDiagram, sigma: list[int], j: int) -> bool:
    """Can the bases below interval ``j + 1`` be permuted so every step agrees?"""
    if j < 0:
        return True
    sa, sb = da.steps[j], db.steps[j]
    rows_a = []
    for r in range(sa.rows):
        v = [0] * sa.cols
        for c in range(sa.cols):
            v[sigma[c]] = sa[r, c]
        rows_a.append(tuple(v))
    rows_b = [sb.row(r) for r in range(sb.rows)]
    if sa.rows == 0:
        return rows_b == [] and _degree_matches(da, db, [], j - 1)
    for tau in _row_matchings(rows_a, rows_b):
        if _degree_matches(da, db, tau, j - 1):
            return True
    return False


def compare_framed(a: FramedDiagram, b: FramedDiagram) -> bool:
    """Is there an isomorphism matching the framed bases?

    Searches over bijections of the bases at infinity (pruned by per-branch
    invariants); below infinity the bases are matched by permutations, which
    is exhaustive for diagrams whose composites from infinity have rows with
    disjoint supports, as curve diagrams do.
    """
    for x, y in zip(a.degrees, b.degrees):
        if x.breakpoints != y.breakpoints or x.ranks != y.ranks:
            return False
    if len(a.inf_basis) != len(b.inf_basis) or len(a.one_basis) != len(b.one_basis):
        return False
    n = len(a.inf_basis)
    prof_a = [_branch_profile(a, i) for i in range(n)]
    prof_b = [_branch_profile(b, i) for i in range(n)]
    candidates = [[j for j in range(n) if prof_b[j] == prof_a[i]] for i in range(n)]
    if any(not c for c in candidates):
        return False
    for perm in _bijections(candidates):
        if all(_degree_matches(x, y, perm, x.top - 1) for x, y in zip(a.degrees, b.degrees)):
            return True
    return False


# -- serialisation ------------------------------------------------------------

def diagram_to_json(d: BDiagram, inf_basis=None, one_basis=None) -> dict:
    out = {
        "degree": d.degree,
        "breakpoints": [fraction_to_json(t) for t in d.breakpoints],
        "ranks": list(d.ranks),
        "steps": [s.to_list() for s in d.steps],
    }
    if inf_basis is not None:
        out["inf_basis"] = list(inf_basis)
    if one_basis is not None:
        out["one_basis"] = list(one_basis)
    return out


def diagram_from_json(obj: dict) -> BDiagram:
    ranks = [int(r) for r in obj["ranks"]]
    steps = obj["steps"]
    if len(steps) != len(ranks) - 1:
        raise DiagramError("need one step per breakpoint")
    mats = tuple(IntMatrix.from_rows(s, cols=ranks[j + 1]) for j, s in enumerate(steps))
    return BDiagram(
        int(obj["degree"]),
        tuple(fraction_from_json(t) for t in obj["breakpoints"]),
        tuple(ranks),
        mats,
    )


def framed_to_json(f: FramedDiagram) -> dict:
    return {
        "inf_basis": list(f.inf_basis),
        "one_basis": list(f.one_basis),
        "diagrams": [diagram_to_json(d, f.inf_basis, f.one_basis) for d in f.degrees],
    }


def framed_from_json(obj: dict) -> FramedDiagram:
    diagrams = {int(d["degree"]): diagram_from_json(d) for d in obj["diagrams"]}
    if set(diagrams) != {0, 1}:
        raise DiagramError("framed diagram needs degrees 0 and 1")
    return FramedDiagram(diagrams[0], diagrams[1], tuple(obj["inf_basis"]), tuple(obj["one_basis"]))


def format_table(f: FramedDiagram) -> str:
    d0, d1 = f.degrees
    labels = [d0.interval_label(j) for j in range(d0.n_intervals)]
    width = max(len("interval"), *(len(s) for s in labels))
    lines = [f"{'interval':<{width}}  rank0  rank1"]
    for j, lab in enumerate(labels):
        lines.append(f"{lab:<{width}}  {d0.ranks[j]:>5}  {d1.ranks[j]:>5}")
    lines.append("")
    for j, t in enumerate(d0.breakpoints):
        lines.append(
            f"step at {format_fraction(t)}: h0 = {d0.steps[j]}  h1 = {d1.steps[j]}"
        )
    lines.append("")
    lines.append("basis at inf: " + " ".join(f.inf_basis))
    lines.append("basis at 1:   " + " ".join(f.one_basis))
    return "\n".join(lines) + "\n"

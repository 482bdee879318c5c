"""Independent checks of the curve engine.

Two brute-force routes recompute what :mod:`mdhom.mdcurve` reads off the
Eggers-Wall tree:

* truncation classes: branches whose series agree on all exponents ``<= b``
  form one component of the curve truncated at ``b``;
* explicit circle coverings: each component is a simplicial circle, the
  projection between truncations is a ``k:1`` simplicial cover, and the
  induced maps on ``H_0`` and ``H_1`` are computed by the simplicial engine.

Neither route looks at the tree.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .bdiagram import morphism_matrix, evaluate
from .eggers import build_tree, level_slice
from .exactnum import INF, ExtRat, GaussRat, IntMatrix
from .mdcurve import md_diagram
from .puiseux import Curve, PuiseuxSeries, puiseux_pairs
from .simplicial import disjoint_polygons, induced_map, polygon_cycle

__all__ = [
    "TruncationClass",
    "CircleCover",
    "Check",
    "CrosscheckReport",
    "truncation_components",
    "circle_cover",
    "covering_maps",
    "crosscheck",
    "random_series",
    "random_curve",
    "random_irreducible",
    "random_corpus",
]


@dataclass(frozen=True)
class TruncationClass:
    representative: tuple[tuple[Fraction, GaussRat], ...]
    members: tuple[str, ...]
    kappa: int


def truncation_components(c: Curve, b) -> list[TruncationClass]:
    """Components of the curve truncated at ``b`` (terms with exponent <= b)."""
    b = ExtRat.of(b)
    if b < 1:
        raise ValueError(f"truncation level must be >= 1, got {b}")
    groups: dict[tuple, list[str]] = {}
    for s in c.branches:
        groups.setdefault(s.truncate(b), []).append(s.branch_id)
    out = []
    for terms, members in groups.items():
        kappa = math.lcm(*(e.denominator for e, _ in terms)) if terms else 1
        out.append(TruncationClass(terms, tuple(members), kappa))
    # dict preserves first-appearance order, which is the canonical order
    return out


@dataclass(frozen=True)
class CircleCover:
    """``base_circles`` circles; ``sheets[i]`` lists the degrees of the circles over circle ``i``."""

    base_circles: int
    sheets: tuple[tuple[int, ...], ...]
    sheet_base: tuple[int, ...]
    sheet_degree: tuple[int, ...]


def circle_cover(c: Curve, b1, b2) -> CircleCover:
    b1, b2 = ExtRat.of(b1), ExtRat.of(b2)
    if b1 < b2:
        raise ValueError("covering goes from the finer truncation b1 >= b2 to the coarser")
    base = truncation_components(c, b2)
    top = truncation_components(c, b1)
    sheet_base, sheet_degree = [], []
    for cls in top:
        owners = [i for i, bc in enumerate(base) if set(cls.members) <= set(bc.members)]
        if len(owners) != 1:
            raise AssertionError("truncation classes do not refine")
        i = owners[0]
        if cls.kappa % base[i].kappa:
            raise AssertionError("covering degree is not an integer")
        sheet_base.append(i)
        sheet_degree.append(cls.kappa // base[i].kappa)
    sheets = tuple(
        tuple(d for bi, d in zip(sheet_base, sheet_degree) if bi == i) for i in range(len(base))
    )
    return CircleCover(len(base), sheets, tuple(sheet_base), tuple(sheet_degree))


def covering_maps(c: Curve, b1, b2) -> tuple[IntMatrix, IntMatrix]:
    """Induced ``H_0`` and ``H_1`` maps of the projection between truncations."""
    cover = circle_cover(c, b1, b2)
    base, base_loops = disjoint_polygons([3] * cover.base_circles)
    dom, loops = disjoint_polygons([3 * k for k in cover.sheet_degree])
    f = {}
    for loop, i in zip(loops, cover.sheet_base):
        for t, v in enumerate(loop):
            f[v] = base_loops[i][t % 3]
    h0 = induced_map(
        f, dom, base, 0,
        [{(loop[0],): 1} for loop in loops],
        [{(loop[0],): 1} for loop in base_loops],
    )
    h1 = induced_map(
        f, dom, base, 1,
        [polygon_cycle(loop) for loop in loops],
        [polygon_cycle(loop) for loop in base_loops],
    )
    return h0, h1


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class CrosscheckReport:
    curve: str
    checks: list[Check] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(ch.passed for ch in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), "" if passed else detail))

    def to_json(self) -> dict:
        return {
            "curve": self.curve,
            "passed": self.all_passed,
            "checks": [{"name": ch.name, "status": "PASS" if ch.passed else "FAIL", "detail": ch.detail}
                       for ch in self.checks],
        }

    def format(self) -> str:
        lines = [f"curve: {self.curve}"]
        for ch in self.checks:
            status = "PASS" if ch.passed else "FAIL"
            lines.append(f"  {status}  {ch.name}" + (f"  ({ch.detail})" if ch.detail else ""))
        n_fail = sum(not ch.passed for ch in self.checks)
        lines.append(f"  {len(self.checks) - n_fail}/{len(self.checks)} checks passed")
        return "\n".join(lines) + "\n"


def _samples(bps: tuple[Fraction, ...]) -> list[ExtRat]:
    """Each breakpoint, a point strictly inside the interval it starts, and inf."""
    pts = []
    for j, t in enumerate(bps):
        pts.append(ExtRat(t))
        nxt = bps[j + 1] if j + 1 < len(bps) else t + 1
        pts.append(ExtRat((t + nxt) / 2))
    pts.append(INF)
    return pts


def crosscheck(c: Curve) -> CrosscheckReport:
    """Compare the tree-based engine with both oracles on one curve."""
    report = CrosscheckReport(" | ".join(f"{s.branch_id}: {s}" for s in c.branches))
    f = md_diagram(c)
    tree = build_tree(c)
    d0, d1 = f.degrees
    pts = _samples(d0.breakpoints)
    for b in pts:
        classes = truncation_components(c, b)
        sl = level_slice(tree, b)
        ranks = (evaluate(d0, b), evaluate(d1, b))
        report.add(
            f"rank at b={b}",
            len(classes) == len(sl) == ranks[0] == ranks[1],
            f"truncation classes {len(classes)}, slice {len(sl)}, ranks {ranks}",
        )
        report.add(
            f"classes at b={b}",
            [set(cl.members) for cl in classes] == [set(p.branches_through) for p in sl.points]
            and [cl.kappa for cl in classes] == [p.weight for p in sl.points],
            "truncation classes differ from the tree slice",
        )
    pairs = []
    reps = [d0.sample_point(j) for j in range(1, d0.n_intervals)] + [INF]
    for j in range(len(reps) - 1):
        pairs.append((reps[j + 1], reps[j]))
    for j in range(len(reps) - 1):
        pairs.append((INF, reps[j]))
        pairs.append((reps[j + 1], reps[0]))
        pairs.append((reps[j], reps[j]))
    seen = set()
    for b1, b2 in pairs:
        if (b1, b2) in seen:
            continue
        seen.add((b1, b2))
        o0, o1 = covering_maps(c, b1, b2)
        m0, m1 = morphism_matrix(d0, b1, b2), morphism_matrix(d1, b1, b2)
        report.add(f"h0 {b1}->{b2}", o0 == m0, f"oracle {o0} vs engine {m0}")
        report.add(f"h1 {b1}->{b2}", o1 == m1, f"oracle {o1} vs engine {m1}")
    return report


# -- random curves --------------------------------------------------------------

_COEFFS = [GaussRat(1), GaussRat(2), GaussRat(-1), GaussRat(3), GaussRat(Fraction(1, 2)),
           GaussRat(0, 1), GaussRat(1, 1), GaussRat(-2, 3)]


def _random_exponent(rng: random.Random, lo: Fraction, max_exponent: int, max_den: int) -> Fraction | None:
    for _ in range(50):
        q = rng.randint(1, max_den)
        p = rng.randint(math.ceil(lo * q), max_exponent * q)
        e = Fraction(p, q)
        if lo <= e <= max_exponent:
            return e
    return None


def _random_tail(rng, start: Fraction, strict: bool, n: int, max_exponent: int, max_den: int):
    terms = []
    lo = start
    for _ in range(n):
        e = _random_exponent(rng, lo, max_exponent, max_den)
        if e is None or (strict and e == start) or (terms and e <= terms[-1][0]):
            continue
        terms.append((e, rng.choice(_COEFFS)))
        lo = e
    return terms


def random_series(rng: random.Random, branch_id: str = "C1", max_exponent: int = 6,
                  max_denominator: int = 8, max_terms: int = 4) -> PuiseuxSeries:
    while True:
        terms = []
        if rng.random() < 0.6:
            terms.append((Fraction(1), rng.choice(_COEFFS)))
        terms += _random_tail(rng, Fraction(1), bool(terms), rng.randint(1, max_terms),
                              max_exponent, max_denominator)
        if terms:
            return PuiseuxSeries(tuple(terms), branch_id)


def random_curve(rng: random.Random, max_branches: int = 6, max_exponent: int = 6,
                 max_denominator: int = 8) -> Curve:
    """Random curve whose branches share prefixes, so contacts vary."""
    n = rng.randint(1, max_branches)
    branches = [random_series(rng, "C1", max_exponent, max_denominator)]
    while len(branches) < n:
        parent = rng.choice(branches)
        cut = rng.randint(0, len(parent.terms))
        prefix = list(parent.terms[:cut])
        start = prefix[-1][0] if prefix else Fraction(1)
        tail = _random_tail(rng, start, bool(prefix), rng.randint(1, 3), max_exponent, max_denominator)
        terms = prefix + tail
        if cut < len(parent.terms) and rng.random() < 0.3:
            # same exponent as the parent's next term, different coefficient
            e, coeff = parent.terms[cut]
            other = rng.choice([x for x in _COEFFS if x != coeff])
            terms = prefix + [(e, other)] + [t for t in tail if t[0] > e]
        if not terms:
            continue
        s = PuiseuxSeries(tuple(terms), f"C{len(branches) + 1}")
        if any(s.terms == b.terms for b in branches):
            continue
        branches.append(s)
    return Curve(tuple(branches))


def random_irreducible(rng: random.Random, max_pairs: int = 3, max_denominator: int = 8,
                       max_exponent: int = 6) -> Curve:
    while True:
        s = random_series(rng, "C1", max_exponent, max_denominator, max_terms=5)
        if len(puiseux_pairs(s)) <= max_pairs:
            return Curve((s,))


def random_corpus(seed: int, count: int, **kwargs) -> Iterator[Curve]:
    rng = random.Random(seed)
    for _ in range(count):
        yield random_curve(rng, **kwargs)

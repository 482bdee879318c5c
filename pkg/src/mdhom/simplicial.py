"""Relative simplicial homology over Z and the b-cone closed forms built on it."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactnum import ExtRat, IntMatrix, format_fraction, snf

__all__ = [
    "SimplicialError",
    "SimplicialPair",
    "HomologyProfile",
    "BConeDiagram",
    "closure",
    "homology",
    "boundary_matrix",
    "chain_map",
    "polygon_cycle",
    "chain_boundary",
    "push_forward",
    "induced_map",
    "disjoint_polygons",
    "bcone_diagram",
    "curve_link_profile",
    "pair_from_json",
]

Simplex = tuple[int, ...]


class SimplicialError(ValueError):
    pass


def closure(simplices: Iterable[Sequence[int]]) -> set[Simplex]:
    out: set[Simplex] = set()
    for s in simplices:
        s = tuple(s)
        if not s:
            raise SimplicialError("empty simplex")
        if len(set(s)) != len(s):
            raise SimplicialError(f"simplex {s} repeats a vertex")
        if any((not isinstance(v, int)) or v < 0 for v in s):
            raise SimplicialError(f"simplex {s}: vertices must be non-negative integers")
        s = tuple(sorted(s))
        for k in range(1, len(s) + 1):
            out.update(itertools.combinations(s, k))
    return out


def _order(simplices: Iterable[Simplex]) -> tuple[Simplex, ...]:
    return tuple(sorted(simplices, key=lambda s: (len(s), s)))


@dataclass(frozen=True)
class SimplicialPair:
    """A finite simplicial complex ``L`` with a subcomplex ``L1`` (possibly empty).

    Simplices are sorted vertex tuples; orientation follows vertex order.
    """

    simplices: tuple[Simplex, ...]
    sub: tuple[Simplex, ...] = ()

    def __post_init__(self):
        simp = [tuple(s) for s in self.simplices]
        sub = [tuple(s) for s in self.sub]
        for s in simp + sub:
            if not s or list(s) != sorted(set(s)):
                raise SimplicialError(f"simplex {s} is not a strictly increasing vertex tuple")
        sset, subset = set(simp), set(sub)
        if len(sset) != len(simp) or len(subset) != len(sub):
            raise SimplicialError("repeated simplex")
        if closure(simp) != sset:
            raise SimplicialError("complex is not closed under faces")
        if closure(sub) != subset:
            raise SimplicialError("subcomplex is not closed under faces")
        if not subset <= sset:
            raise SimplicialError("subcomplex is not contained in the complex")
        object.__setattr__(self, "simplices", _order(sset))
        object.__setattr__(self, "sub", _order(subset))

    @classmethod
    def generated(cls, simplices: Iterable[Sequence[int]], sub: Iterable[Sequence[int]] = ()) -> SimplicialPair:
        """Pair spanned by the given simplices and all their faces."""
        return cls(tuple(closure(simplices)), tuple(closure(sub)))

    @property
    def dim(self) -> int:
        return max((len(s) for s in self.simplices), default=0) - 1

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(s[0] for s in self.simplices if len(s) == 1)

    def cells(self, n: int) -> tuple[Simplex, ...]:
        """Relative n-cells: n-simplices of L not in L1."""
        sub = set(self.sub)
        return tuple(s for s in self.simplices if len(s) == n + 1 and s not in sub)

    def chain_vector(self, n: int, chain: Mapping[Simplex, int]) -> list[int]:
        index = {s: i for i, s in enumerate(self.cells(n))}
        v = [0] * len(index)
        for s, coeff in chain.items():
            s = tuple(s)
            if s in index:
                v[index[s]] += coeff
            elif s not in self.sub:
                raise SimplicialError(f"{s} is not a {n}-simplex of the complex")
        return v


@dataclass(frozen=True)
class HomologyProfile:
    """Rank and torsion coefficients of ``H_n`` for ``n = 0 .. len-1``."""

    groups: tuple[tuple[int, tuple[int, ...]], ...]

    def rank(self, n: int) -> int:
        return self.groups[n][0] if 0 <= n < len(self.groups) else 0

    def torsion(self, n: int) -> tuple[int, ...]:
        return self.groups[n][1] if 0 <= n < len(self.groups) else ()

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(r for r, _ in self.groups)

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * r for n, (r, _) in enumerate(self.groups))

    def to_json(self) -> list:
        return [{"degree": n, "rank": r, "torsion": list(t)} for n, (r, t) in enumerate(self.groups)]


def boundary_matrix(p: SimplicialPair, n: int) -> IntMatrix:
    """Relative boundary map C_n(L, L1) -> C_{n-1}(L, L1)."""
    cols = p.cells(n)
    if n == 0:
        return IntMatrix.zeros(0, len(cols))
    rows = p.cells(n - 1)
    index = {s: i for i, s in enumerate(rows)}
    m = [[0] * len(cols) for _ in rows]
    for j, s in enumerate(cols):
        for k in range(len(s)):
            face = s[:k] + s[k + 1:]
            if face in index:
                m[index[face]][j] += (-1) ** k
    return IntMatrix(len(rows), len(cols), m)


def homology(p: SimplicialPair) -> HomologyProfile:
    """``H_n(|L|, |L1|; Z)`` via Smith normal forms of the boundary matrices."""
    top = max(p.dim, 0)
    ranks_d = [snf(boundary_matrix(p, n)) for n in range(top + 2)]
    groups = []
    for n in range(top + 1):
        cn = len(p.cells(n))
        rank = cn - ranks_d[n].rank - ranks_d[n + 1].rank
        groups.append((rank, ranks_d[n + 1].torsion))
    return HomologyProfile(tuple(groups))


def _sort_sign(vs: Sequence[int]) -> tuple[Simplex, int]:
    """Sorted tuple and the sign of the sorting permutation (0 if degenerate)."""
    if len(set(vs)) != len(vs):
        return tuple(sorted(vs)), 0
    inversions = sum(1 for a, b in itertools.combinations(vs, 2) if a > b)
    return tuple(sorted(vs)), -1 if inversions % 2 else 1


def chain_map(f: Mapping[int, int], dom: SimplicialPair, cod: SimplicialPair, n: int) -> IntMatrix:
    """Matrix of the chain map C_n(dom) -> C_n(cod) induced by a vertex map."""
    src = dom.cells(n)
    tgt = cod.cells(n)
    index = {s: i for i, s in enumerate(tgt)}
    cod_all = set(cod.simplices)
    cod_sub = set(cod.sub)
    m = [[0] * len(src) for _ in tgt]
    for j, s in enumerate(src):
        image, sign = _sort_sign([f[v] for v in s])
        if sign == 0:
            continue
        if image not in cod_all:
            raise SimplicialError(f"vertex map is not simplicial: {s} -> {image}")
        if image in cod_sub:
            continue
        m[index[image]][j] += sign
    return IntMatrix(len(tgt), len(src), m)


def polygon_cycle(vertices: Sequence[int]) -> dict[Simplex, int]:
    """Oriented 1-cycle running around ``vertices`` in the given order."""
    chain: dict[Simplex, int] = {}
    k = len(vertices)
    for i in range(k):
        a, b = vertices[i], vertices[(i + 1) % k]
        edge, sign = _sort_sign([a, b])
        chain[edge] = chain.get(edge, 0) + sign
    return chain


def _solve_rational(columns: Sequence[Sequence[int]], target: Sequence[int]) -> list[Fraction] | None:
    """Some rational x with sum(x_i * columns[i]) == target, or None."""
    nrows = len(target)
    ncols = len(columns)
    a = [[Fraction(columns[j][i]) for j in range(ncols)] + [Fraction(target[i])] for i in range(nrows)]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                fac = a[i][c]
                a[i] = [x - fac * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    if any(a[i][ncols] != 0 for i in range(r, nrows)):
        return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = a[i][ncols]
    return x


def chain_boundary(chain: Mapping[Simplex, int]) -> dict[Simplex, int]:
    out: dict[Simplex, int] = {}
    for s, coeff in chain.items():
        if len(s) == 1:
            continue
        for k in range(len(s)):
            face = s[:k] + s[k + 1:]
            out[face] = out.get(face, 0) + (-1) ** k * coeff
    return {s: v for s, v in out.items() if v}


def push_forward(f: Mapping[int, int], chain: Mapping[Simplex, int]) -> dict[Simplex, int]:
    """Image of a chain under the simplicial map given by a vertex map."""
    out: dict[Simplex, int] = {}
    for s, coeff in chain.items():
        image, sign = _sort_sign([f[v] for v in s])
        if sign:
            out[image] = out.get(image, 0) + sign * coeff
    return {s: v for s, v in out.items() if v}


def induced_map(
    f: Mapping[int, int],
    dom: SimplicialPair,
    cod: SimplicialPair,
    n: int,
    dom_basis: Sequence[Mapping[Simplex, int]],
    cod_basis: Sequence[Mapping[Simplex, int]],
) -> IntMatrix:
    """Matrix of ``f_*`` on ``H_n`` in the given bases of cycles.

    ``cod_basis`` must map to a Z-basis of the free group ``H_n(cod)``; each
    image ``f#(z)`` is written as an integer combination of ``cod_basis``
    modulo boundaries.
    """
    dom_cells = set(dom.simplices)
    dom_sub = set(dom.sub)
    cod_all = set(cod.simplices)
    bd = boundary_matrix(cod, n + 1)
    basis_vecs = [cod.chain_vector(n, z) for z in cod_basis]
    bnd_vecs = [bd.column(j) for j in range(bd.cols)]
    out_cols = []
    for z in dom_basis:
        if any(len(s) != n + 1 or s not in dom_cells for s in z):
            raise SimplicialError(f"domain chain is not made of {n}-simplices of the domain")
        if n > 0 and any(s not in dom_sub for s in chain_boundary(z)):
            raise SimplicialError("domain basis element is not a relative cycle")
        img = push_forward(f, z)
        if any(s not in cod_all for s in img):
            raise SimplicialError("vertex map is not simplicial on the given chain")
        x = _solve_rational(basis_vecs + bnd_vecs, cod.chain_vector(n, img))
        if x is None:
            raise SimplicialError("image is not in the span of the codomain basis")
        coords = x[: len(basis_vecs)]
        if any(q.denominator != 1 for q in coords):
            raise SimplicialError("image has non-integral coordinates")
        out_cols.append([int(q) for q in coords])
    return IntMatrix(len(cod_basis), len(dom_basis), ([col[i] for col in out_cols] for i in range(len(cod_basis))))


def disjoint_polygons(sizes: Sequence[int], start: int = 0) -> tuple[SimplicialPair, list[list[int]]]:
    """Disjoint simplicial circles with the given vertex counts (each >= 3)."""
    edges = []
    loops = []
    v = start
    for k in sizes:
        if k < 3:
            raise SimplicialError("a simplicial circle needs at least 3 vertices")
        loop = list(range(v, v + k))
        loops.append(loop)
        edges.extend((loop[i], loop[(i + 1) % k]) for i in range(k))
        v += k
    return SimplicialPair.generated(edges), loops


@dataclass(frozen=True)
class BConeDiagram:
    """MD homology of the outer b-cone over ``(L, L1)`` where the closed forms apply.

    ``below`` holds ranks per degree for ``0 < b' < b``; ``at_b`` is the value
    at ``b' = b``; ``at_infinity`` is the homology of the punctured cone.  The
    range ``b < b' < inf`` is not populated.
    """

    b: Fraction
    below: tuple[int, ...]
    at_b: HomologyProfile
    at_infinity: HomologyProfile

    def rank(self, degree: int, b_prime) -> int:
        bp = ExtRat.of(b_prime)
        if bp.is_inf:
            return self.at_infinity.rank(degree)
        if bp.fraction <= 0:
            raise ValueError("b' must be positive")
        if bp.fraction < self.b:
            return self.below[degree] if degree < len(self.below) else 0
        if bp.fraction == self.b:
            return self.at_b.rank(degree)
        raise ValueError(f"MD homology of a b-cone is not determined here for {self.b} < b' < inf")

    def to_json(self) -> dict:
        return {
            "b": [self.b.numerator, self.b.denominator],
            "below": list(self.below),
            "at_b": self.at_b.to_json(),
            "at_infinity": self.at_infinity.to_json(),
        }

    def format(self) -> str:
        b = format_fraction(self.b)
        rows = [("degree", f"(0,{b})", f"at {b}", "torsion", "at inf")]
        for d in range(len(self.at_b.groups)):
            tors = ",".join(map(str, self.at_b.torsion(d))) or "-"
            rows.append((str(d), str(self.below[d]), str(self.at_b.rank(d)), tors,
                         str(self.at_infinity.rank(d))))
        widths = [max(len(r[k]) for r in rows) for k in range(5)]
        return "".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n" for r in rows)


def bcone_diagram(p: SimplicialPair, b) -> BConeDiagram:
    b = Fraction(b) if not isinstance(b, ExtRat) else b.fraction
    if b < 1:
        raise ValueError(f"b-cones are handled for b >= 1, got {format_fraction(b)}")
    h = homology(p)
    n = len(h.groups)
    below = tuple((1 if not p.sub else 0) if d == 0 else 0 for d in range(n))
    return BConeDiagram(b, below, h, h)


def curve_link_profile(n_branches: int) -> HomologyProfile:
    """Homology of the link of a plane curve germ with ``n_branches`` branches."""
    if n_branches < 1:
        raise ValueError("a curve has at least one branch")
    pair, _ = disjoint_polygons([3] * n_branches)
    return homology(pair)


def pair_from_json(obj) -> SimplicialPair:
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        return SimplicialPair.generated(
            [tuple(s) for s in obj["simplices"]], [tuple(s) for s in obj.get("sub", [])]
        )
    except (KeyError, TypeError) as exc:
        raise SimplicialError(f"malformed complex JSON: {exc}") from exc

"""Exact arithmetic: extended rationals, Gaussian rationals, integer matrices.

Nothing in this package uses floating point.  Rationals are
:class:`fractions.Fraction`; the b-axis adds a single point at infinity that
supports ordering only.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

__all__ = [
    "ExtRat",
    "INF",
    "GaussRat",
    "IntMatrix",
    "SnfResult",
    "snf",
    "is_unimodular",
    "matmul",
    "determinantal_divisors",
    "fraction_to_json",
    "fraction_from_json",
    "format_fraction",
    "parse_fraction",
]

RationalLike = Union[int, Fraction, str]


def parse_fraction(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; rejects decimal notation."""
    text = text.strip()
    if not text or any(ch in text for ch in ".eE"):
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(text)


def format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def fraction_to_json(q: Fraction) -> list[int]:
    return [q.numerator, q.denominator]


def fraction_from_json(obj) -> Fraction:
    if isinstance(obj, bool):
        raise ValueError(f"bad rational: {obj!r}")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2 and all(
        isinstance(v, int) and not isinstance(v, bool) for v in obj
    ):
        if obj[1] == 0:
            raise ValueError("zero denominator")
        return Fraction(obj[0], obj[1])
    if isinstance(obj, str):
        return parse_fraction(obj)
    raise ValueError(f"bad rational: {obj!r}")


@functools.total_ordering
class ExtRat:
    """A point of the b-axis: a non-negative rational or infinity.

    Only comparison, equality and hashing are defined.  Use :attr:`fraction`
    to do arithmetic on finite values.
    """

    __slots__ = ("_value",)

    def __init__(self, value: RationalLike | ExtRat | None):
        if isinstance(value, ExtRat):
            value = value._value
        elif isinstance(value, str):
            value = None if value.strip().lower() in ("inf", "infinity", "oo") else parse_fraction(value)
        elif isinstance(value, bool):
            raise TypeError("bool is not a rational")
        elif isinstance(value, int):
            value = Fraction(value)
        elif value is not None and not isinstance(value, Fraction):
            raise TypeError(f"cannot build ExtRat from {type(value).__name__}")
        if value is not None and value < 0:
            raise ValueError(f"b-axis values are non-negative, got {value}")
        self._value = value

    @classmethod
    def of(cls, value) -> ExtRat:
        return value if isinstance(value, ExtRat) else cls(value)

    @property
    def is_inf(self) -> bool:
        return self._value is None

    @property
    def fraction(self) -> Fraction:
        if self._value is None:
            raise ArithmeticError("infinity has no rational value")
        return self._value

    def _key(self):
        return (1, Fraction(0)) if self._value is None else (0, self._value)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = ExtRat(other) if other >= 0 else None
        if not isinstance(other, ExtRat):
            return NotImplemented
        return self._value == other._value

    def __lt__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other < 0:
                return False
            other = ExtRat(other)
        if not isinstance(other, ExtRat):
            return NotImplemented
        return self._key() < other._key()

    def __hash__(self):
        return hash(("ExtRat", self._value))

    def __str__(self):
        return "inf" if self._value is None else format_fraction(self._value)

    def __repr__(self):
        return f"ExtRat({str(self)!r})"

    def to_json(self):
        return "inf" if self._value is None else fraction_to_json(self._value)

    @classmethod
    def from_json(cls, obj) -> ExtRat:
        if obj == "inf":
            return INF
        return cls(fraction_from_json(obj))


INF = ExtRat(None)


@dataclass(frozen=True)
class GaussRat:
    """Exact element ``re + im*i`` of Q(i)."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def of(cls, value) -> GaussRat:
        if isinstance(value, GaussRat):
            return value
        if isinstance(value, complex):
            raise TypeError("floating complex values are not exact")
        return cls(Fraction(value), Fraction(0))

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self):
        return not self.is_zero()

    def __add__(self, other):
        other = GaussRat.of(other)
        return GaussRat(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussRat.of(other))

    def __rsub__(self, other):
        return GaussRat.of(other) - self

    def __mul__(self, other):
        other = GaussRat.of(other)
        return GaussRat(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def conjugate(self) -> GaussRat:
        return GaussRat(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        other = GaussRat.of(other)
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * other.conjugate()
        return GaussRat(num.re / n, num.im / n)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = GaussRat.of(other)
        if not isinstance(other, GaussRat):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __str__(self):
        if self.im == 0:
            return format_fraction(self.re)
        im = "i" if self.im == 1 else "-i" if self.im == -1 else f"{format_fraction(self.im)}i"
        if self.re == 0:
            return im
        sign = "" if im.startswith("-") else "+"
        return f"({format_fraction(self.re)}{sign}{im})"

    def __repr__(self):
        return f"GaussRat({str(self)!r})"

    def to_json(self) -> dict:
        return {"re": fraction_to_json(self.re), "im": fraction_to_json(self.im)}

    @classmethod
    def from_json(cls, obj) -> GaussRat:
        if isinstance(obj, dict):
            return cls(fraction_from_json(obj.get("re", 0)), fraction_from_json(obj.get("im", 0)))
        return cls(fraction_from_json(obj))


class IntMatrix:
    """Dense immutable integer matrix; shape is explicit so 0 x n is representable."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable[Iterable[int]] = ()):
        data = tuple(tuple(int(v) for v in row) for row in entries)
        if rows < 0 or cols < 0:
            raise ValueError("negative dimension")
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError(f"entries do not form a {rows}x{cols} matrix")
        self.rows = rows
        self.cols = cols
        self.entries = data

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("column count required for a matrix without rows")
            cols = len(rows[0])
        return cls(len(rows), cols, rows)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, ([1 if i == j else 0 for j in range(n)] for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, ([0] * cols for _ in range(rows)))

    @classmethod
    def diag(cls, values: Sequence[int]) -> IntMatrix:
        n = len(values)
        return cls(n, n, ([values[i] if i == j else 0 for j in range(n)] for i in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        return self.entries[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows, (self.column(j) for j in range(self.cols)))

    def permute_columns(self, perm: Sequence[int]) -> IntMatrix:
        """Column ``j`` of the result is column ``perm[j]`` of ``self``."""
        return IntMatrix(self.rows, self.cols, ([r[p] for p in perm] for r in self.entries))

    def permute_rows(self, perm: Sequence[int]) -> IntMatrix:
        """Row ``i`` of the result is row ``perm[i]`` of ``self``."""
        return IntMatrix(self.rows, self.cols, (self.entries[p] for p in perm))

    def to_list(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [list(r) for r in self.entries]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        return matmul(self, other)

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"IntMatrix({self.rows}, {self.cols}, {self.to_list()})"

    def __str__(self):
        if self.rows == 0 or self.cols == 0:
            return f"[{self.rows}x{self.cols}]"
        return "[" + "; ".join(" ".join(str(v) for v in r) for r in self.entries) + "]"


def matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: {a.rows}x{a.cols} times {b.rows}x{b.cols}")
    bt = b.transpose().entries
    return IntMatrix(a.rows, b.cols, ([sum(x * y for x, y in zip(r, c)) for c in bt] for r in a.entries))


@dataclass(frozen=True)
class SnfResult:
    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d > 1)


def _snf_reduce(a: list[list[int]], rows: int, cols: int) -> list[int]:
    """Diagonalise ``a`` in place; returns the diagonal (unnormalised)."""
    diag = []
    t = 0
    while t < min(rows, cols):
        # pivot: smallest non-zero absolute value in the trailing block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = a[i][j]
                if v and (best is None or abs(v) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        pi, pj = best
        a[t], a[pi] = a[pi], a[t]
        for r in a:
            r[t], r[pj] = r[pj], r[t]
        done = True
        p = a[t][t]
        for i in range(t + 1, rows):
            q = a[i][t] // p
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[t])]
            if a[i][t]:
                done = False
        for j in range(t + 1, cols):
            q = a[t][j] // p
            if q:
                for r in a:
                    r[j] -= q * r[t]
            if a[t][j]:
                done = False
        if not done:
            continue
        # pivot must divide the whole trailing block
        bad = next(
            (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
            None,
        )
        if bad is not None:
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
            continue
        diag.append(abs(p))
        t += 1
    return diag


def snf(m: IntMatrix) -> SnfResult:
    """Invariant factors ``d1 | d2 | ... | dr`` of an integer matrix."""
    a = [list(r) for r in m.entries]
    return SnfResult(tuple(_snf_reduce(a, m.rows, m.cols)))


def is_unimodular(m: IntMatrix) -> bool:
    return m.is_square() and m.det() in (1, -1)


def determinantal_divisors(m: IntMatrix) -> list[int]:
    """Gcds of all k x k minors, k = 1, 2, ... while non-zero (brute force).

    Exponential in the matrix size; meant only as an independent check of
    :func:`snf` on small matrices.
    """
    from itertools import combinations

    out = []
    for k in range(1, min(m.rows, m.cols) + 1):
        g = 0
        for rs in combinations(range(m.rows), k):
            for cs in combinations(range(m.cols), k):
                sub = IntMatrix(k, k, ([m[i, j] for j in cs] for i in rs))
                g = math.gcd(g, sub.det())
        if g == 0:
            break
        out.append(g)
    return out

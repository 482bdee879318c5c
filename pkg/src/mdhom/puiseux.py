"""Puiseux parametrisations of plane curve branches.

A branch is ``y = sum(c_s * x**s)`` with finitely many rational exponents
``s >= 1`` and Gaussian-rational coefficients.  The text syntax accepted by
:func:`parse_series` is the usual one::

    x^(3/2) + x^(5/2)
    2*x + (1+2i)/5*x^(7/3) - 1/3 x^4
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactnum import (
    INF,
    ExtRat,
    GaussRat,
    format_fraction,
    fraction_from_json,
    fraction_to_json,
)

__all__ = [
    "PuiseuxError",
    "SeriesSyntaxError",
    "DuplicateBranchError",
    "PuiseuxSeries",
    "PuiseuxPair",
    "Curve",
    "parse_series",
    "format_series",
    "characteristic_exponents",
    "puiseux_pairs",
    "contact",
    "multiplicity",
    "tangent_slope",
    "conjugate_contact",
    "conjugacy_warnings",
    "curve_from_json",
    "curve_to_json",
    "load_curve",
]


class PuiseuxError(ValueError):
    """Invalid branch or curve data."""


class SeriesSyntaxError(PuiseuxError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}: {text[:pos]}<<HERE>>{text[pos:]}")


class DuplicateBranchError(PuiseuxError):
    pass


@dataclass(frozen=True)
class PuiseuxSeries:
    terms: tuple[tuple[Fraction, GaussRat], ...]
    branch_id: str = "C1"

    def __post_init__(self):
        terms = tuple((Fraction(e), GaussRat.of(c)) for e, c in self.terms)
        object.__setattr__(self, "terms", terms)
        if not terms:
            raise PuiseuxError(f"branch {self.branch_id}: series has no terms")
        for i, (e, c) in enumerate(terms):
            if e < 1:
                raise PuiseuxError(
                    f"branch {self.branch_id}: exponent {format_fraction(e)} < 1; "
                    "change coordinates so the branch is transverse to the y-axis"
                )
            if c.is_zero():
                raise PuiseuxError(f"branch {self.branch_id}: zero coefficient at exponent {format_fraction(e)}")
            if i and terms[i - 1][0] >= e:
                raise PuiseuxError(f"branch {self.branch_id}: exponents must be strictly increasing")

    @property
    def exponents(self) -> tuple[Fraction, ...]:
        return tuple(e for e, _ in self.terms)

    @property
    def kappa(self) -> int:
        return multiplicity(self)

    def coefficient(self, exponent: Fraction) -> GaussRat:
        for e, c in self.terms:
            if e == exponent:
                return c
        return GaussRat()

    def truncate(self, b: ExtRat) -> tuple[tuple[Fraction, GaussRat], ...]:
        """Terms with exponent <= b (all terms when b is infinite)."""
        b = ExtRat.of(b)
        if b.is_inf:
            return self.terms
        return tuple(t for t in self.terms if t[0] <= b.fraction)

    def with_id(self, branch_id: str) -> PuiseuxSeries:
        return PuiseuxSeries(self.terms, branch_id)

    def __str__(self):
        return format_series(self)


@dataclass(frozen=True)
class PuiseuxPair:
    m: int
    k: int

    def __post_init__(self):
        if self.m < 1 or self.k < 2:
            raise PuiseuxError(f"invalid Puiseux pair ({self.m}, {self.k})")


@dataclass(frozen=True)
class Curve:
    branches: tuple[PuiseuxSeries, ...]

    def __post_init__(self):
        branches = tuple(self.branches)
        object.__setattr__(self, "branches", branches)
        if not branches:
            raise PuiseuxError("a curve needs at least one branch")
        ids = [b.branch_id for b in branches]
        if len(set(ids)) != len(ids):
            raise PuiseuxError(f"branch ids are not distinct: {ids}")
        seen: dict = {}
        for b in branches:
            if b.terms in seen:
                raise DuplicateBranchError(f"duplicate branch: {seen[b.terms]} and {b.branch_id}")
            seen[b.terms] = b.branch_id

    @classmethod
    def from_strings(cls, series: Sequence[str], ids: Sequence[str] | None = None) -> Curve:
        ids = list(ids) if ids is not None else [f"C{i + 1}" for i in range(len(series))]
        return cls(tuple(parse_series(s, bid) for s, bid in zip(series, ids, strict=True)))

    @property
    def branch_ids(self) -> tuple[str, ...]:
        return tuple(b.branch_id for b in self.branches)

    def __len__(self):
        return len(self.branches)

    def branch(self, branch_id: str) -> PuiseuxSeries:
        for b in self.branches:
            if b.branch_id == branch_id:
                return b
        raise KeyError(branch_id)


# -- parser -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(.))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        n = len(text)
        while pos < n:
            m = _TOKEN.match(text, pos)
            if m is None:  # trailing whitespace
                break
            if m.group(1) is not None:
                self.toks.append(("int", m.group(1), m.start(1)))
            elif m.group(2) is not None:
                ch = m.group(2)
                if ch not in "+-*/^()xi":
                    raise SeriesSyntaxError(f"unexpected character {ch!r}", text, m.start(2))
                self.toks.append((ch, ch, m.start(2)))
            pos = m.end()
        self.i = 0

    def peek(self, offset: int = 0) -> str | None:
        j = self.i + offset
        return self.toks[j][0] if j < len(self.toks) else None

    def pos(self) -> int:
        return self.toks[self.i][2] if self.i < len(self.toks) else len(self.text)

    def take(self, kind: str) -> str:
        if self.peek() != kind:
            got = self.peek() or "end of input"
            raise SeriesSyntaxError(f"expected {kind!r}, got {got!r}", self.text, self.pos())
        tok = self.toks[self.i][1]
        self.i += 1
        return tok

    def accept(self, kind: str) -> bool:
        if self.peek() == kind:
            self.i += 1
            return True
        return False

    def error(self, message: str) -> SeriesSyntaxError:
        return SeriesSyntaxError(message, self.text, self.pos())

    # rational := INT ['/' INT]
    def rational(self) -> Fraction:
        num = int(self.take("int"))
        if self.peek() == "/" and self.peek(1) == "int":
            self.i += 1
            den_pos = self.pos()
            den = int(self.take("int"))
            if den == 0:
                raise SeriesSyntaxError("zero denominator", self.text, den_pos)
            return Fraction(num, den)
        return Fraction(num)

    # gterm := rational ['i'] | 'i'
    def gterm(self) -> GaussRat:
        if self.accept("i"):
            return GaussRat(0, 1)
        q = self.rational()
        if self.accept("i"):
            return GaussRat(0, q)
        return GaussRat(q, 0)

    # gauss := [sign] gterm (sign gterm)*
    def gauss(self) -> GaussRat:
        sign = -1 if self.accept("-") else 1
        if sign == 1:
            self.accept("+")
        total = self.gterm() * sign
        while self.peek() in ("+", "-"):
            sign = -1 if self.take(self.peek()) == "-" else 1
            total = total + self.gterm() * sign
        return total

    # coeff := '(' gauss ')' ['/' rational] | gterm
    def coeff(self) -> GaussRat:
        if self.accept("("):
            value = self.gauss()
            self.take(")")
            if self.peek() == "/" and self.peek(1) == "int":
                self.i += 1
                den_pos = self.pos()
                den = self.rational()
                if den == 0:
                    raise SeriesSyntaxError("division by zero", self.text, den_pos)
                value = value / den
            return value
        return self.gterm()

    # exponent := INT | '(' [sign] rational ')'
    def exponent(self) -> Fraction:
        if self.accept("("):
            sign = -1 if self.accept("-") else 1
            q = self.rational() * sign
            self.take(")")
            return q
        if self.peek() == "-":
            raise self.error("negative exponents must be parenthesised")
        q = Fraction(int(self.take("int")))
        if self.peek() == "/":
            raise self.error("fractional exponents must be parenthesised, e.g. x^(3/2)")
        return q

    # term := [coeff ['*']] 'x' ['^' exponent]
    def term(self) -> tuple[Fraction, GaussRat, int]:
        start = self.pos()
        c = GaussRat(1)
        if self.peek() != "x":
            c = self.coeff()
            self.accept("*")
        if self.peek() != "x":
            raise self.error("expected 'x' (constant terms are not allowed)")
        self.take("x")
        e = Fraction(1)
        if self.accept("^"):
            e = self.exponent()
        return e, c, start

    def series(self) -> list[tuple[Fraction, GaussRat, int]]:
        out = []
        sign = -1 if self.accept("-") else 1
        if sign == 1:
            self.accept("+")
        while True:
            e, c, start = self.term()
            out.append((e, c * sign, start))
            if self.peek() is None:
                return out
            if self.peek() not in ("+", "-"):
                raise self.error("expected '+' or '-'")
            sign = -1 if self.take(self.peek()) == "-" else 1


def parse_series(text: str, branch_id: str = "C1") -> PuiseuxSeries:
    """Parse a finite Puiseux series such as ``"x^(3/2) + 2*x^2"``."""
    p = _Parser(text)
    if not p.toks:
        raise SeriesSyntaxError("empty series", text, 0)
    raw = p.series()
    seen: dict[Fraction, int] = {}
    for e, c, pos in raw:
        if e < 1:
            raise SeriesSyntaxError(
                f"exponent {format_fraction(e)} < 1 (change coordinates so the branch is "
                "transverse to the y-axis)", text, pos)
        if c.is_zero():
            raise SeriesSyntaxError("zero coefficient", text, pos)
        if e in seen:
            raise SeriesSyntaxError(f"repeated exponent {format_fraction(e)}", text, pos)
        seen[e] = pos
    terms = sorted(((e, c) for e, c, _ in raw), key=lambda t: t[0])
    return PuiseuxSeries(tuple(terms), branch_id)


def _format_exponent(e: Fraction) -> str:
    if e == 1:
        return "x"
    if e.denominator == 1:
        return f"x^{e.numerator}"
    return f"x^({e.numerator}/{e.denominator})"


def format_series(s: PuiseuxSeries) -> str:
    """Inverse of :func:`parse_series` on the term list."""
    parts = []
    for idx, (e, c) in enumerate(s.terms):
        negative = c.im == 0 and c.re < 0
        mag = -c if negative else c
        if mag == 1:
            body = _format_exponent(e)
        elif mag.im == 0:
            body = f"{format_fraction(mag.re)}*{_format_exponent(e)}"
        else:
            im = format_fraction(abs(mag.im))
            sign = "-" if mag.im < 0 else "+"
            inner = f"{format_fraction(mag.re)}{sign}{im}i" if mag.re else f"{'-' if mag.im < 0 else ''}{im}i"
            body = f"({inner})*{_format_exponent(e)}"
        if idx == 0:
            parts.append(("-" if negative else "") + body)
        else:
            parts.append(("- " if negative else "+ ") + body)
    return " ".join(parts)


# -- invariants ---------------------------------------------------------------

def characteristic_exponents(s: PuiseuxSeries) -> list[Fraction]:
    """Exponents at which the ramification index of the series grows."""
    d = 1
    out = []
    for e in s.exponents:
        if d % e.denominator:
            out.append(e)
            d = math.lcm(d, e.denominator)
    return out


def puiseux_pairs(s: PuiseuxSeries) -> list[PuiseuxPair]:
    pairs = []
    prod = 1
    for e in characteristic_exponents(s):
        scaled = e * prod
        k = scaled.denominator
        m = scaled * k
        assert m.denominator == 1
        pairs.append(PuiseuxPair(int(m), k))
        prod *= k
    return pairs


def multiplicity(s: PuiseuxSeries) -> int:
    return math.lcm(*(e.denominator for e in s.exponents))


def contact(a: PuiseuxSeries, b: PuiseuxSeries) -> ExtRat:
    """Least exponent where the coefficients of ``a`` and ``b`` differ."""
    ca = dict(a.terms)
    cb = dict(b.terms)
    for s in sorted(set(ca) | set(cb)):
        if ca.get(s, GaussRat()) != cb.get(s, GaussRat()):
            return ExtRat(s)
    raise DuplicateBranchError(f"duplicate branch: {a.branch_id} and {b.branch_id}")


def tangent_slope(s: PuiseuxSeries) -> GaussRat:
    """Slope of the tangent line ``y = slope*x``: the coefficient of ``x``."""
    return s.coefficient(Fraction(1))


_UNIT_TURNS = {
    GaussRat(1, 0): Fraction(0),
    GaussRat(0, 1): Fraction(1, 4),
    GaussRat(-1, 0): Fraction(1, 2),
    GaussRat(0, -1): Fraction(3, 4),
}


def _conjugate_equal(ca: GaussRat, cb: GaussRat, turn: Fraction) -> bool:
    """Exactly decide ``ca == cb * exp(2*pi*i*turn)`` for Gaussian rationals."""
    if cb.is_zero() or ca.is_zero():
        return ca.is_zero() and cb.is_zero()
    ratio = ca / cb
    t = _UNIT_TURNS.get(ratio)
    return t is not None and (turn - t).denominator == 1


def conjugate_contact(a: PuiseuxSeries, b: PuiseuxSeries, t: int) -> ExtRat:
    """Contact of ``a`` with the ``t``-th Galois conjugate of ``b``.

    The conjugate multiplies the coefficient of ``x^s`` by
    ``exp(2*pi*i*t*s)``; ``t`` ranges over ``0 .. multiplicity(b) - 1``.
    """
    ca = dict(a.terms)
    cb = dict(b.terms)
    for s in sorted(set(ca) | set(cb)):
        if not _conjugate_equal(ca.get(s, GaussRat()), cb.get(s, GaussRat()), t * s):
            return ExtRat(s)
    return INF


def conjugacy_warnings(c: Curve) -> list[str]:
    """Pairs whose contact depends on the choice of conjugate parametrisation."""
    out = []
    bs = c.branches
    for i in range(len(bs)):
        for j in range(i + 1, len(bs)):
            base = contact(bs[i], bs[j])
            best = max(conjugate_contact(bs[i], bs[j], t) for t in range(multiplicity(bs[j])))
            if best != base:
                out.append(
                    f"contact({bs[i].branch_id},{bs[j].branch_id}) = {base} on the given "
                    f"parametrisations but {best} for a conjugate of {bs[j].branch_id}"
                )
    return out


# -- JSON ---------------------------------------------------------------------

def _series_to_json(s: PuiseuxSeries) -> dict:
    return {
        "id": s.branch_id,
        "terms": [{"exp": fraction_to_json(e), "coeff": c.to_json()} for e, c in s.terms],
    }


def _series_from_json(obj: dict, default_id: str) -> PuiseuxSeries:
    bid = str(obj.get("id", default_id))
    if "series" in obj:
        return parse_series(obj["series"], bid)
    if "terms" in obj:
        terms = [(fraction_from_json(t["exp"]), GaussRat.from_json(t.get("coeff", 1))) for t in obj["terms"]]
        exps = [e for e, _ in terms]
        if len(set(exps)) != len(exps):
            raise PuiseuxError(f"branch {bid}: repeated exponent")
        return PuiseuxSeries(tuple(sorted(terms, key=lambda t: t[0])), bid)
    raise PuiseuxError(f"branch {bid}: needs 'series' or 'terms'")


def curve_from_json(obj) -> Curve:
    if not isinstance(obj, dict) or "branches" not in obj:
        raise PuiseuxError("curve JSON must be an object with a 'branches' list")
    return Curve(tuple(_series_from_json(b, f"C{i + 1}") for i, b in enumerate(obj["branches"])))


def curve_to_json(c: Curve) -> dict:
    return {"branches": [_series_to_json(b) for b in c.branches]}


def load_curve(path) -> Curve:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise PuiseuxError(f"{path}: invalid JSON: {exc}") from exc
    return curve_from_json(obj)

from __future__ import annotations

import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mdhom.exactnum import INF, ExtRat, GaussRat
from mdhom.oracle import random_series
from mdhom.puiseux import (
    Curve,
    DuplicateBranchError,
    PuiseuxError,
    PuiseuxSeries,
    SeriesSyntaxError,
    characteristic_exponents,
    conjugacy_warnings,
    conjugate_contact,
    contact,
    curve_from_json,
    curve_to_json,
    format_series,
    load_curve,
    multiplicity,
    parse_series,
    puiseux_pairs,
    tangent_slope,
)

from conftest import DATA

series_st = st.integers(0, 2**32 - 1).map(lambda s: random_series(random.Random(s), max_terms=5))


def char_oracle(exps) -> list[Fraction]:
    """Exponents where the lcm of denominators seen so far strictly grows."""
    out = []
    for i, e in enumerate(exps):
        before = math.lcm(1, *(x.denominator for x in exps[:i]))
        upto = math.lcm(before, e.denominator)
        if upto > before:
            out.append(e)
    return out


@pytest.mark.parametrize(
    "text, terms",
    [
        ("x^(3/2)", [(Fraction(3, 2), GaussRat(1))]),
        ("x + 2*x^2", [(Fraction(1), GaussRat(1)), (Fraction(2), GaussRat(2))]),
        ("-1/3 x^(5/2) - x", [(Fraction(1), GaussRat(-1)), (Fraction(5, 2), GaussRat(Fraction(-1, 3)))]),
        ("(1+2i)/5*x^(7/3)", [(Fraction(7, 3), GaussRat(Fraction(1, 5), Fraction(2, 5)))]),
        ("i*x + 2i x^2", [(Fraction(1), GaussRat(0, 1)), (Fraction(2), GaussRat(0, 2))]),
        ("x^(4/2)", [(Fraction(2), GaussRat(1))]),
    ],
)
def test_parse_examples(text, terms):
    assert parse_series(text).terms == tuple(terms)


@pytest.mark.parametrize(
    "text",
    ["", "x^3/2", "x^(1/2)", "0*x^2", "x^2 + 3*x^2", "y^2", "x^", "2 +", "x^(3/0)", "1.5*x"],
)
def test_parse_rejects(text):
    with pytest.raises((SeriesSyntaxError, PuiseuxError, ZeroDivisionError)):
        parse_series(text)


def test_syntax_error_carries_position():
    with pytest.raises(SeriesSyntaxError) as info:
        parse_series("x^2 + x^(1/2)")
    assert info.value.pos > 0


def test_constant_term_rejected():
    with pytest.raises(PuiseuxError):
        parse_series("1 + x^2")


@given(series_st)
def test_format_parse_round_trip(s):
    assert parse_series(format_series(s), s.branch_id) == s


@given(series_st)
def test_characteristic_exponents_oracle(s):
    assert characteristic_exponents(s) == char_oracle(list(s.exponents))


@given(series_st)
def test_puiseux_pairs_reconstruct_exponents(s):
    pairs = puiseux_pairs(s)
    prod = 1
    for (p, e) in zip(pairs, characteristic_exponents(s)):
        prod *= p.k
        assert Fraction(p.m, prod) == e
        assert math.gcd(p.m, p.k) == 1
    assert prod == multiplicity(s)


@pytest.mark.parametrize(
    "text, pairs, mult",
    [
        ("x^(3/2)", [(3, 2)], 2),
        ("x^(3/2) + x^(7/4)", [(3, 2), (7, 2)], 4),
        ("x^(3/2) + x^(11/4) + x^(37/12)", [(3, 2), (11, 2), (37, 3)], 12),
        ("x + x^2", [], 1),
        ("x^(5/2) + x^(11/4)", [(5, 2), (11, 2)], 4),
    ],
)
def test_pairs_examples(text, pairs, mult):
    s = parse_series(text)
    assert [(p.m, p.k) for p in puiseux_pairs(s)] == pairs
    assert multiplicity(s) == mult


@given(series_st, series_st)
def test_contact_symmetric(a, b):
    if a.terms != b.terms:
        assert contact(a, b) == contact(b, a)
        c = contact(a, b).fraction
        assert a.truncate(ExtRat(c - Fraction(1, 10**6))) == b.truncate(ExtRat(c - Fraction(1, 10**6)))
        assert a.coefficient(c) != b.coefficient(c)


def test_contact_examples():
    a = parse_series("x^(3/2) + x^(5/2)")
    b = parse_series("x^(3/2) + x^(11/4)")
    c = parse_series("x^(5/2) + x^(11/4)")
    assert contact(a, b) == ExtRat(Fraction(5, 2))
    assert contact(a, c) == ExtRat(Fraction(3, 2))
    with pytest.raises(DuplicateBranchError):
        contact(a, a.with_id("other"))


def test_tangent_slope():
    assert tangent_slope(parse_series("2*x + x^2")) == GaussRat(2)
    assert tangent_slope(parse_series("x^(3/2)")) == GaussRat(0)


def test_conjugate_contact_and_warnings():
    a = parse_series("x^(3/2)", "A")
    b = parse_series("-x^(3/2)", "B")
    assert contact(a, b) == ExtRat(Fraction(3, 2))
    assert conjugate_contact(a, b, 1) == INF
    c = Curve((a, parse_series("x^(3/2) + x^2", "B")))
    assert conjugacy_warnings(c) == []
    assert len(conjugacy_warnings(Curve((a, parse_series("-x^(3/2) + x^2", "B"))))) == 1


def test_curve_validation():
    with pytest.raises(PuiseuxError):
        Curve(())
    a = parse_series("x^2", "A")
    with pytest.raises(PuiseuxError):
        Curve((a, parse_series("x^3", "A")))
    with pytest.raises(DuplicateBranchError):
        Curve((a, a.with_id("B")))
    with pytest.raises(PuiseuxError):
        PuiseuxSeries(((Fraction(2), GaussRat(1)), (Fraction(2), GaussRat(3))))


def test_curve_json_round_trip(curve_d):
    obj = curve_to_json(curve_d)
    again = curve_from_json(json.loads(json.dumps(obj)))
    assert again == curve_d
    assert load_curve(DATA / "cusp.json").branches[0].terms == parse_series("x^(3/2)").terms


def test_curve_json_errors(tmp_path):
    with pytest.raises(PuiseuxError):
        curve_from_json({"nope": []})
    with pytest.raises(PuiseuxError):
        curve_from_json({"branches": [{"id": "A"}]})
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ValueError):
        load_curve(bad)


def test_from_strings_ids():
    c = Curve.from_strings(["x^2", "x^3"])
    assert c.branch_ids == ("C1", "C2")
    assert c.branch("C2").exponents == (Fraction(3),)

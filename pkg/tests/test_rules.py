from fractions import Fraction

import pytest
from hypothesis import given

from bratteli import (
    Affine,
    Constant,
    ExplicitThenPeriodic,
    Geometric,
    Growth,
    combined_growth,
    is_summable_ratio,
    lcm_of_periods,
    parse_rule,
)
from strategies import positive_rules


def test_rule_values():
    assert Constant(3).values(3) == [3, 3, 3]
    assert Affine(1, 1).values(4) == [1, 2, 3, 4]
    assert Geometric(2, 2).values(4) == [2, 4, 8, 16]
    assert ExplicitThenPeriodic((5,), (1, 2)).values(6) == [5, 1, 2, 1, 2, 1]


def test_floats_rejected():
    with pytest.raises(TypeError):
        Constant(0.5)


@pytest.mark.parametrize(
    "text, rule",
    [
        ("constant(3)", Constant(3)),
        ("affine(1,1)", Affine(1, 1)),
        ("geometric(2, 2)", Geometric(2, 2)),
        ("explicit(1,2,3 | 4,5)", ExplicitThenPeriodic((1, 2, 3), (4, 5))),
        ("explicit(4)", ExplicitThenPeriodic((), (4,))),
        ("constant(1/2)", Constant(Fraction(1, 2))),
    ],
)
def test_parse_rule(text, rule):
    assert parse_rule(text) == rule
    assert parse_rule(rule.to_text()) == rule


@pytest.mark.parametrize("text", ["constant(1,2)", "cubic(1)", "constant", "explicit()"])
def test_parse_rule_rejects(text):
    with pytest.raises(ValueError):
        parse_rule(text)


@given(positive_rules)
def test_round_trip_text(rule):
    assert parse_rule(rule.to_text()) == rule


def test_periods():
    assert Constant(2).period == 1
    assert Affine(1, 0).period is None
    assert Geometric(3, 1).period == 1
    assert ExplicitThenPeriodic((1, 1), (2, 3, 4)).period == 3
    assert lcm_of_periods([ExplicitThenPeriodic((), (1, 2)), ExplicitThenPeriodic((), (1, 2, 3)), Affine(1, 1)]) == 6


def test_growth_along_residues():
    r = ExplicitThenPeriodic((7,), (0, 3))
    assert r.growth(1, 2) is None  # n = 1, 3, 5, ... -> 0
    assert r.growth(0, 2) == Growth(1, 0)
    with pytest.raises(ValueError):
        r.growth(0, 3)


def test_summability():
    geometric = Growth(Fraction(2), 0)
    bounded = Growth(Fraction(1), 0)
    linear = Growth(Fraction(1), 1)
    quadratic = Growth(Fraction(1), 2)
    assert is_summable_ratio(bounded, geometric)
    assert not is_summable_ratio(bounded, bounded)
    assert not is_summable_ratio(bounded, linear)  # harmonic
    assert is_summable_ratio(bounded, quadratic)
    assert is_summable_ratio(None, bounded)
    assert not is_summable_ratio(geometric, bounded)
    assert combined_growth([None, bounded, linear]) == linear
    assert combined_growth([None]) is None

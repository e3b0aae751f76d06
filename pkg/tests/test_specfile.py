from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bratteli import (
    Band,
    ConstantVec,
    ExplicitOrder,
    ExplicitSpec,
    FiniteVec,
    LeftToRight,
    MarkovKernel,
    OdometerSpec,
    ParseError,
    SpecDocument,
    SpecError,
    TriadicSpec,
    UniformKernel,
    WindowFamily,
    parse_spec,
    parse_vectors,
    serialize_spec,
    slots,
)
from bratteli.specfile import serialize_vectors, split_top
from strategies import bands, positive_rules, rule_specs

CLASSC = """
# tridiagonal, a_n = 2 * 2**n
[diagram]
support = -1..1
rules = constant(1), geometric(2,2), constant(1)

[odometer vertical]
offsets = constant(0)

[window pair]
lo = constant(0)
hi = constant(1)

[order l2r]
kind = left-to-right

[kernel flat]
kind = uniform
initial = 1/2
"""


def test_parse_classc_document():
    doc = parse_spec(CLASSC)
    assert doc.diagram.band_at(2) == Band(-1, (1, 8, 1))
    assert doc.odometers["vertical"].offset(5) == 0
    assert doc.windows["pair"].size(3) == 2
    assert doc.orders["l2r"] == LeftToRight()
    assert doc.kernels["flat"] == UniformKernel(Fraction(1, 2))


def test_explicit_order_section():
    doc = parse_spec(
        "[diagram]\nsupport = -1..2\nrules = constant(1), constant(1), constant(1), constant(1)\n"
        "[order interleaved]\nkind = explicit\nlevel.0 = -1:0, 1:0, 0:0, 2:0\n"
    )
    order = doc.orders["interleaved"]
    assert order.levels == (((-1, 0), (1, 0), (0, 0), (2, 0)),)
    assert order.slots_at(doc.diagram, 9)[1] == (1, 0)


def test_builtins():
    assert isinstance(parse_spec("diagram = builtin:triadic").diagram, TriadicSpec)
    spec = parse_spec("diagram = builtin:classc(affine(1,1))").diagram
    assert spec.band_at(3) == Band(-1, (1, 4, 1))


def test_explicit_levels_with_tail():
    doc = parse_spec("[diagram]\nsupport = 0..1\nrules = constant(1), constant(1)\nlevel.0 = 0: 2, 0, 2\n")
    assert doc.diagram.band_at(0).coeffs == (2, 0, 2)
    assert doc.diagram.band_at(1) == Band(0, (1, 1))


def test_negative_coefficient_is_semantic_error():
    with pytest.raises(SpecError, match="coefficient must be non-negative"):
        parse_spec("[diagram]\nsupport = -1..1\nrules = constant(1), constant(-2), constant(1)\n")
    with pytest.raises(SpecError, match="coefficient must be non-negative"):
        parse_spec("[diagram]\nlevel.0 = 0: 1, -1\n")


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("[diagram\n", 1, 1),
        ("diagram = builtin:pentadic\n", 1, 11),
        ("[diagram]\nsupport = -1..1\nrules = constant(1), cubic(2), constant(1)\n", 3, 9),
        ("[diagram]\nsupport -1..1\n", 2, 1),
        ("[odometer]\noffsets = constant(0)\n", 1, 1),
        ("diagram = builtin:triadic\n[order x]\nkind = sideways\n", 3, 8),
        ("diagram = builtin:triadic\n[window w]\nlo = constant(0)\nlo = constant(1)\n", 4, 1),
    ],
)
def test_parse_errors_carry_position(text, line, column):
    with pytest.raises(ParseError) as err:
        parse_spec(text)
    assert (err.value.line, err.value.column) == (line, column)


def test_cross_checks():
    with pytest.raises(SpecError):
        parse_spec("diagram = builtin:classc(constant(1))\n[order bad]\nkind = explicit\nlevel.0 = 0:0, 1:0\n")
    with pytest.raises(SpecError):
        parse_spec(
            "diagram = builtin:classc(constant(1))\n[kernel k]\nkind = explicit\n"
            "level.0 = 0:0=1/2, 1:0=1/2\n"
        )
    with pytest.raises(ParseError):
        parse_spec("diagram = builtin:triadic\n[order a]\nkind = left-to-right\n[order a]\nkind = right-to-left\n")


def test_split_top_respects_parentheses():
    assert split_top("constant(1), explicit(1,2 | 3), affine(1,1)") == [
        "constant(1)",
        "explicit(1,2 | 3)",
        "affine(1,1)",
    ]


def test_round_trip_fixed_document():
    doc = parse_spec(CLASSC)
    assert parse_spec(serialize_spec(doc)) == doc


@st.composite
def documents(draw):
    if draw(st.booleans()):
        diagram = draw(rule_specs())
        if draw(st.booleans()):
            diagram = ExplicitSpec(tuple(draw(st.lists(bands(), min_size=1, max_size=3))), diagram)
    else:
        diagram = ExplicitSpec(tuple(draw(st.lists(bands(), min_size=1, max_size=3))))
    doc = SpecDocument(diagram)
    for i in range(draw(st.integers(0, 2))):
        doc.odometers[f"o{i}"] = OdometerSpec(draw(positive_rules), draw(st.integers(-5, 5)))
    for i in range(draw(st.integers(0, 2))):
        doc.windows[f"w{i}"] = WindowFamily(draw(positive_rules), draw(positive_rules))
    b0 = diagram.band_at(0)
    if isinstance(diagram, ExplicitSpec) and diagram.tail is None and len(diagram.levels) == 1:
        perm = tuple(draw(st.permutations(slots(b0))))
        doc.orders["e"] = ExplicitOrder((perm,))
        weights = draw(st.lists(st.integers(1, 5), min_size=len(perm), max_size=len(perm)))
        total = sum(weights)
        doc.kernels["k"] = MarkovKernel(
            Fraction(draw(st.integers(1, 4)), 3), ({s: Fraction(w, total) for s, w in zip(perm, weights)},)
        )
    doc.orders["l"] = LeftToRight()
    doc.kernels["u"] = UniformKernel(Fraction(draw(st.integers(1, 9)), 7))
    return doc


@given(documents())
@settings(max_examples=60, deadline=None)
def test_round_trip_random_documents(doc):
    text = serialize_spec(doc)
    again = parse_spec(text)
    assert again == doc
    assert serialize_spec(again) == text


def test_vectors_file():
    vecs = parse_vectors("constant 1/4\n# comment\nfinite -1: 1/2, 0, 1/2\n\n")
    assert vecs == [ConstantVec(Fraction(1, 4)), FiniteVec(-1, (Fraction(1, 2), 0, Fraction(1, 2)))]
    assert parse_vectors(serialize_vectors(vecs)) == vecs
    with pytest.raises(ParseError) as err:
        parse_vectors("constant 1\nsparse 0: 1\n")
    assert err.value.line == 2

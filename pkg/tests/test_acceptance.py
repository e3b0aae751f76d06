"""Exit criteria, one test per item at the stated tolerance.

Randomized items use fixed seeds so the listed trial counts are exact.  The
conftest prints one PASS/FAIL line per test at the end of the session.
"""

import math
import random
from fractions import Fraction

import pytest

from bratteli import (
    Affine,
    Band,
    Constant,
    ExplicitSpec,
    FiniteVec,
    Geometric,
    LeftToRight,
    MarkovKernel,
    OdometerSpec,
    RightToLeft,
    RuleSpec,
    TriadicSpec,
    UniformKernel,
    Verdict,
    WindowFamily,
    classc_g_center,
    classc_no_measure_term,
    classc_product,
    classc_spec,
    continuity_check,
    convolve,
    depossel_ratio_trace,
    ecs_subdiagram_extension,
    extension_report,
    fourier_check,
    height,
    is_unimodal,
    laurent_multiply,
    markov_tail_invariance_check,
    minimal_prefix,
    orbit,
    path_count_band,
    path_count_bruteforce_all,
    reverse_order,
    row_sum,
    slots,
    transfer,
    uniform_vectors,
    verify_tail_invariant,
    ExplicitOrder,
)
from strategies import random_band, random_diagonal_rule, random_explicit_spec

pytestmark = pytest.mark.acceptance

DOUBLING = Geometric(2, 2)  # a_n = 2**(n+1)
VERTICAL = OdometerSpec(Constant(0))
EPS = Fraction(1, 10**6)


def random_rule_spec(rng: random.Random, max_width=4, max_coeff=3) -> RuleSpec:
    width = rng.randint(2, max_width)
    coeffs = [rng.randint(0, max_coeff) for _ in range(width)]
    coeffs[rng.randrange(width)] = rng.randint(1, max_coeff)
    return RuleSpec(rng.randint(-2, 0), tuple(Constant(c) for c in coeffs))


def test_criterion_01_oracle_equivalence():
    rng = random.Random(101)
    for _ in range(200):
        m = rng.randint(1, 4)
        spec = random_explicit_spec(rng, m, max_width=5, max_coeff=4)
        band = path_count_band(spec, 0, m)
        counts = path_count_bruteforce_all(spec, 0, m)
        offsets = set(band.offsets()) | set(counts)
        assert all(band[k] == counts.get(k, 0) for k in offsets), (spec, m)


def test_criterion_02_toeplitz_algebra():
    rng = random.Random(202)
    for _ in range(100):
        a, b, c = (random_band(rng) for _ in range(3))
        assert convolve(a, b) == convolve(b, a)
        assert convolve(convolve(a, b), c) == convolve(a, convolve(b, c))
        assert row_sum(convolve(a, b)) == row_sum(a) * row_sum(b)
        assert laurent_multiply(a.laurent(), b.laurent()).band() == convolve(a, b)


def test_criterion_03_telescoping_identity():
    rng = random.Random(303)
    done = 0
    while done < 50:
        spec = random_rule_spec(rng)
        k = rng.choice([k for k, _ in spec.band_at(0).items()])
        odo = OdometerSpec(Constant(k), rng.randint(-4, 4))
        N = rng.randint(1, 20)
        report = extension_report(spec, odo, N)
        # the direct triple sum and the telescoped alpha are computed independently inside
        assert report.direct_value == report.alphas[-1] == report.partial_value
        done += 1


def test_criterion_04_odometer_extension_verdicts():
    finite = extension_report(classc_spec(DOUBLING), VERTICAL, 8)
    assert finite.alphas[:4] == [2, 3, Fraction(15, 4), Fraction(135, 32)]
    assert finite.verdict is Verdict.FINITE
    for a in (1, 2, 3, 10):
        assert extension_report(classc_spec(Constant(a)), VERTICAL, 8).verdict is Verdict.INFINITE
    assert extension_report(classc_spec(DOUBLING), OdometerSpec(Constant(1)), 8).verdict is Verdict.INFINITE


def test_criterion_05_unimodality():
    rng = random.Random(505)
    for _ in range(100):
        rule = random_diagonal_rule(rng)
        spec = classc_spec(rule)
        n, m = rng.randint(0, 10), rng.randint(1, 8)
        assert is_unimodal(path_count_band(spec, n, m)), (rule, n, m)


def test_criterion_06_g_center_formula():
    rng = random.Random(606)
    for _ in range(50):
        rule = random_diagonal_rule(rng)
        n = rng.randint(0, 10)
        for m in range(1, 13):
            assert classc_g_center(rule, n, m) == path_count_band(classc_spec(rule), n, m)[0]
        assert classc_g_center(rule, n, 2) == rule(n) * rule(n + 1) + 2


def first_m_below(rule, n, l, horizon, eps=EPS):
    """First span ``m >= max(l, 1)`` from which the term stays below ``eps`` up to ``horizon``.

    Spans ``m < l`` are skipped: the term is identically zero there.
    """
    first = None
    for m in range(max(l, 1), horizon + 1):
        if classc_no_measure_term(rule, n, l, m) < eps:
            first = m if first is None else first
        else:
            first = None
    return first


def test_criterion_07a_constant_diagonal_term_vanishes():
    a = 2
    for l in range(4):
        for m in range(1, 61):
            assert classc_no_measure_term(Constant(a), 0, l, m) == (
                Fraction(a, a + 2) ** m * math.comb(m, l) / Fraction(a) ** l
            )
        assert first_m_below(Constant(a), 0, l, 60) is not None, l


def test_criterion_07b_linear_diagonal_closed_form():
    rule = Affine(1, 1)  # a_n = n + 1
    for n in range(0, 6):
        for m in range(1, 61):
            assert classc_product(rule, n, m) == Fraction((n + 1) * (n + 2), (n + m + 1) * (n + m + 2))


def test_criterion_07c_linear_diagonal_term_vanishes():
    # Stated requirement: below 10**-6 within m <= 60 for l = 0..3.  For l = 0 the
    # term is 2 / ((m + 1)(m + 2)), about 5.3e-4 at m = 60, so this cannot hold.
    rule = Affine(1, 1)
    misses = {l: classc_no_measure_term(rule, 0, l, 60) for l in range(4) if first_m_below(rule, 0, l, 60) is None}
    assert not misses, {l: float(v) for l, v in misses.items()}


def test_criterion_08_ecs_pair_window():
    win = WindowFamily(Constant(0), Constant(1))
    fin = ecs_subdiagram_extension(classc_spec(DOUBLING), win, 12)
    assert fin.verdict is Verdict.FINITE
    expected = math.prod(Fraction(DOUBLING(i), DOUBLING(i) + 1) for i in range(12))
    assert fin.extras["vertical_share"] == expected
    inf = ecs_subdiagram_extension(classc_spec(Constant(2)), win, 12)
    assert inf.verdict is Verdict.INFINITE
    assert inf.extras["vertical_share"] == Fraction(2, 3) ** 12


def random_nonuniform_kernel(rng: random.Random, spec, depth: int) -> MarkovKernel:
    levels = []
    skew_level = rng.randrange(depth)
    for n in range(depth):
        level_slots = slots(spec.band_at(n))
        weights = [rng.randint(1, 6) for _ in level_slots]
        if n == skew_level:
            while len(set(weights)) == 1:
                weights[rng.randrange(len(weights))] += 1
        total = sum(weights)
        levels.append({s: Fraction(w, total) for s, w in zip(level_slots, weights)})
    return MarkovKernel(Fraction(rng.randint(1, 5), 3), tuple(levels))


def test_criterion_09_markov_tail_invariance():
    rng = random.Random(909)
    checked = 0
    while checked < 20:
        spec = random_rule_spec(rng, max_width=3, max_coeff=2)
        if len(slots(spec.band_at(0))) < 2:
            continue
        for depth in (1, 2, 3):
            assert markov_tail_invariance_check(spec, UniformKernel(Fraction(rng.randint(1, 4))), depth).ok
        kernel = random_nonuniform_kernel(rng, spec, 3)
        result = markov_tail_invariance_check(spec, kernel, 3)
        assert not result.ok
        a, b = result.witness
        assert a.terminal == b.terminal and result.values[0] != result.values[1]
        checked += 1


def test_criterion_10_vector_recursion_and_fourier():
    rng = random.Random(1010)
    for _ in range(20):
        spec = random_rule_spec(rng)
        assert verify_tail_invariant(spec, uniform_vectors(spec, 16), 15).ok
    for _ in range(100):
        spec = ExplicitSpec((random_band(rng),))
        p_next = FiniteVec.from_band(random_band(rng, max_coeff=5))
        p_prev = transfer(spec, p_next, 0)
        assert fourier_check(spec, p_next, p_prev, 0)
        assert verify_tail_invariant(spec, [p_prev, p_next], 1).ok
        k = rng.choice(list(p_prev.band.offsets()))
        bumped = FiniteVec.from_band(Band.from_dict({**dict(p_prev.band.items()), k: p_prev[k] + 1}))
        assert not fourier_check(spec, p_next, bumped, 0)
        assert not verify_tail_invariant(spec, [bumped, p_next], 1).ok


def test_criterion_11_vershik_continuity():
    triadic = continuity_check(TriadicSpec(), LeftToRight(), 6)
    assert triadic.verdict == "ContinuousUpTo(6)"
    assert [r.v - 0 for r in triadic.records] == [3**n for n in range(1, 6)]
    assert continuity_check(TriadicSpec(), reverse_order(LeftToRight()), 6).continuous

    classc = continuity_check(classc_spec(Constant(1)), LeftToRight(), 6)
    assert classc.verdict.startswith("DiscontinuousAt")
    assert classc.witness["kind"] == "missing-minimal-edge"
    assert not continuity_check(classc_spec(Constant(1)), RightToLeft(), 6).continuous

    ones = RuleSpec(-1, (Constant(1),) * 4)
    order = ExplicitOrder((((-1, 0), (1, 0), (0, 0), (2, 0)),))
    two = continuity_check(ones, order, 6)
    assert two.verdict.startswith("DiscontinuousAt")
    assert two.witness["kind"] == "successor-sources" and len(set(two.witness["sources"])) == 2
    assert not continuity_check(ones, reverse_order(order), 6).continuous


def test_criterion_12_tower_exhaustion():
    rng = random.Random(1212)
    trials = 0
    while trials < 30:
        spec = random_explicit_spec(rng, 3, max_width=4, max_coeff=3)
        if any(row_sum(spec.band_at(n)) > 5 for n in range(3)):
            continue
        order = rng.choice([LeftToRight(), RightToLeft(), None])
        if order is None:
            order = ExplicitOrder(tuple(tuple(rng.sample(slots(b), len(slots(b)))) for b in spec.levels))
        for depth in (1, 2, 3):
            w = rng.randint(-3, 3)
            result = orbit(spec, order, minimal_prefix(spec, order, w, depth), height(spec, depth) + 5)
            assert result.reached_maximal
            assert len(result.prefixes) == len(set(result.prefixes)) == height(spec, depth)
            assert all(p.terminal == w for p in result.prefixes)
        trials += 1


def test_criterion_13_depossel_ratio_trace():
    steps = depossel_ratio_trace(classc_spec(DOUBLING), 0, (0, 0), 20)
    alpha = math.prod(Fraction(DOUBLING(l) + 2, DOUBLING(l)) for l in range(20))
    assert abs(steps[19].ratio / alpha - 1) <= Fraction(1, 100)

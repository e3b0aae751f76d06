"""Tail invariant measures on horizontally stationary diagrams.

Measure vectors ``p^(n)`` give the mass of any cylinder ending at a vertex of
level ``n``.  Tail invariance is the recursion ``p^(n) = F_n^T p^(n+1)``;
because vertex ``w`` of ``V_n`` feeds vertex ``w - k`` of ``V_{n+1}`` with
``band[k]`` edges, ``F_n^T p = band * p`` (convolution with the band itself).
The profile of ``F_n^T`` read along its rows is the reversed band.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .diagram import (
    DiagramSpec,
    ExplicitSpec,
    FinitePath,
    OdometerSpec,
    RuleSpec,
    Slot,
    WindowFamily,
    classc_diagonal,
    classc_spec,
    eventual_rules,
    height,
    path_count_band,
    slots,
)
from .errors import FiniteHorizon, Intractable, InvalidKernel, MissingEdge, MixedKinds, NotECS
from .rules import (
    Affine,
    SequenceRule,
    combined_growth,
    is_summable_ratio,
    lcm_of_periods,
)
from .toeplitz import Band, convolve, laurent_multiply, row_sum, stochasticize

__all__ = [
    "ConstantVec",
    "FiniteVec",
    "MeasureVector",
    "Verdict",
    "ExtensionReport",
    "TailCheck",
    "TailRelation",
    "MarkovKernel",
    "UniformKernel",
    "MarkovCheck",
    "DePosselStep",
    "transfer",
    "uniform_vectors",
    "verify_tail_invariant",
    "fourier_check",
    "odometer_cylinder",
    "extension_report",
    "tail_parallel",
    "dominating_offsets",
    "is_dominating",
    "ecs_subdiagram_extension",
    "elementary_symmetric",
    "classc_g_center",
    "classc_product",
    "classc_no_measure_term",
    "no_measure_trace",
    "reciprocal_series_diverges",
    "is_unimodal",
    "center_stochastic_trace",
    "markov_cylinder",
    "markov_tail_invariance_check",
    "depossel_ratio_trace",
]


# -- measure vectors ---------------------------------------------------------


@dataclass(frozen=True)
class ConstantVec:
    """The vector with ``value`` at every vertex of ``Z``."""

    value: Fraction

    def __post_init__(self):
        v = Fraction(self.value)
        if v < 0:
            raise ValueError("measure values must be non-negative")
        object.__setattr__(self, "value", v)


@dataclass(frozen=True)
class FiniteVec:
    """Finitely supported vector, canonical (nonzero endpoints)."""

    lo: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        b = Band(self.lo, tuple(self.values))
        object.__setattr__(self, "lo", b.lo)
        object.__setattr__(self, "values", b.coeffs)

    @classmethod
    def from_band(cls, b: Band) -> "FiniteVec":
        return cls(b.lo, b.coeffs)

    @property
    def band(self) -> Band:
        return Band(self.lo, self.values)

    def __getitem__(self, j: int) -> Fraction:
        return self.band[j]


MeasureVector = Union[ConstantVec, FiniteVec]


def transfer(spec: DiagramSpec, p_next: MeasureVector, n: int) -> MeasureVector:
    """``F_n^T p^(n+1)``: the level-``n`` vector forced by the level-``n+1`` one."""
    b = spec.band_at(n)
    if isinstance(p_next, ConstantVec):
        return ConstantVec(row_sum(b) * p_next.value)
    return FiniteVec.from_band(convolve(b, p_next.band))


def uniform_vectors(spec: DiagramSpec, count: int) -> list[ConstantVec]:
    """``1 / (r_0 ... r_{n-1})`` for ``n < count``: the uniform measure's vectors."""
    out, value = [], Fraction(1)
    for n in range(count):
        out.append(ConstantVec(value))
        value /= row_sum(spec.band_at(n))
    return out


@dataclass(frozen=True)
class TailCheck:
    ok: bool
    failed_level: Optional[int] = None

    def __bool__(self):
        return self.ok


def verify_tail_invariant(spec: DiagramSpec, vectors: Sequence[MeasureVector], N: int) -> TailCheck:
    """Check ``F_n^T p^(n+1) == p^(n)`` for ``n < N``."""
    if N < 1:
        raise ValueError("horizon must be at least 1")
    if len(vectors) < N + 1:
        raise ValueError(f"need {N + 1} vectors for horizon {N}, got {len(vectors)}")
    for n in range(N):
        prev, nxt = vectors[n], vectors[n + 1]
        if type(prev) is not type(nxt):
            raise MixedKinds(f"levels {n} and {n + 1} mix constant and finitely supported vectors")
        if transfer(spec, nxt, n) != prev:
            return TailCheck(False, n)
    return TailCheck(True)


def fourier_check(spec: DiagramSpec, p_next: FiniteVec, p_prev: FiniteVec, n: int) -> bool:
    """Compare Laurent products: ``a(z) p_next(z) == p_prev(z)``.

    ``a`` is the symbol of ``F_n^T`` in the convention ``A[i][j] = a[i - j]``,
    whose coefficients are exactly the band of ``F_n``.
    """
    symbol = spec.band_at(n).laurent()
    return laurent_multiply(symbol, p_next.band.laurent()) == p_prev.band.laurent()


# -- odometers ---------------------------------------------------------------


class Verdict(enum.Enum):
    FINITE = "finite"
    INFINITE = "infinite"
    UNDECIDED = "undecided"

    def __str__(self):
        return self.value


@dataclass
class ExtensionReport:
    sigmas: list[Fraction]
    alphas: list[Fraction]
    partial_value: Fraction
    direct_value: Fraction
    verdict: Verdict
    horizon: int
    reason: str = ""
    extras: dict = field(default_factory=dict)

    @property
    def verdict_label(self) -> str:
        if self.verdict is Verdict.UNDECIDED:
            return f"undecided({self.horizon})"
        return str(self.verdict)


def odometer_cylinder(spec: DiagramSpec, odo: OdometerSpec, n: int) -> Fraction:
    """Mass of a depth-``n`` cylinder of the odometer's own measure."""
    value = Fraction(1)
    for level in range(n):
        value /= odo.coefficient(spec, level)
    return value


def _settle_level(spec: DiagramSpec, rules: RuleSpec, extra: Sequence[SequenceRule]) -> int:
    start = max([r.settle for r in rules.rules] + [r.settle for r in extra] + [0])
    if isinstance(spec, ExplicitSpec):
        start = max(start, len(spec.levels))
    return start


def _first_in_class(start: int, residue: int, modulus: int) -> int:
    return start + ((residue - start) % modulus)


def _odometer_verdict(spec: DiagramSpec, odo: OdometerSpec) -> tuple[Verdict, str]:
    rules = eventual_rules(spec)
    if rules is None:
        return Verdict.UNDECIDED, "diagram is not generated by sequence rules"
    off = odo.offsets
    if off.period is None:
        return Verdict.UNDECIDED, "odometer offsets are not eventually periodic"
    modulus = math.lcm(off.period, lcm_of_periods(rules.rules))
    start = _settle_level(spec, rules, [off])
    try:
        for residue in range(modulus):
            n0 = _first_in_class(start, residue, modulus)
            k = odo.offset(n0)
            f_rule = rules.rule_at(k)
            f_growth = f_rule.growth(residue, modulus) if f_rule is not None else None
            if f_growth is None:
                level = n0
                while spec.band_at(level)[odo.offset(level)] != 0:
                    level += modulus
                raise MissingEdge(f"no edge at level {level} along offset {odo.offset(level)}")
            sigma_growth = combined_growth(
                r.growth(residue, modulus)
                for offset, r in zip(range(rules.lo, rules.hi + 1), rules.rules)
                if offset != k
            )
            if not is_summable_ratio(sigma_growth, f_growth):
                return Verdict.INFINITE, f"sigma/f not summable on levels = {residue} mod {modulus}"
    except ValueError as exc:
        if isinstance(exc, MissingEdge):
            raise
        return Verdict.UNDECIDED, str(exc)
    return Verdict.FINITE, "sigma/f summable on every residue class"


def extension_report(spec: DiagramSpec, odo: OdometerSpec, N: int) -> ExtensionReport:
    """Partial sums of the extended odometer measure and a finiteness verdict.

    ``alphas[n] = prod_{l <= n} r_l / f_l``; the partial value after ``N``
    levels is computed both from the defining triple sum and from the
    telescoped products, and the two must agree.
    """
    if N < 1:
        raise ValueError("horizon must be at least 1")
    sigmas, alphas = [], []
    alpha = Fraction(1)
    f_prod = Fraction(1)
    direct = Fraction(1)
    for n in range(N):
        b = spec.band_at(n)
        k = odo.offset(n)
        f = odo.coefficient(spec, n)
        r = row_sum(b)
        sigmas.append(r - f)
        alpha *= r / f
        alphas.append(alpha)
        f_prod *= f
        off_path = sum((c for j, c in b.items() if j != k), Fraction(0))
        direct += off_path * height(spec, n) / f_prod
    telescoped = Fraction(1) + sum(
        (a - prev for a, prev in zip(alphas, [Fraction(1)] + alphas[:-1])), Fraction(0)
    )
    if telescoped != direct or telescoped != alphas[-1]:
        raise AssertionError("telescoping identity failed; this is a bug")
    verdict, reason = _odometer_verdict(spec, odo)
    return ExtensionReport(sigmas, alphas, alphas[-1], direct, verdict, N, reason)


@dataclass(frozen=True)
class TailRelation:
    kind: str  # "equal" | "parallel" | "not-parallel"
    shift: Optional[int] = None
    witnesses: tuple[int, ...] = ()
    decided: bool = True

    def __str__(self):
        label = {"equal": "Equal", "parallel": f"Parallel({self.shift})", "not-parallel": "NotParallel"}[self.kind]
        return label if self.decided else f"{label}?undecided"


def tail_parallel(odo1: OdometerSpec, odo2: OdometerSpec, horizon: int = 64) -> TailRelation:
    """Whether two odometers eventually differ by a constant horizontal shift."""
    r1, r2 = odo1.offsets, odo2.offsets

    def disagreements(limit):
        return [n for n in range(limit) if odo1.offset(n) != odo2.offset(n)]

    def settled(start):
        shift = odo2.vertex(start) - odo1.vertex(start)
        return TailRelation("equal", 0) if shift == 0 else TailRelation("parallel", shift)

    if r1.period is not None and r2.period is not None:
        modulus = math.lcm(r1.period, r2.period)
        start = max(r1.settle, r2.settle)
        window = range(start, start + modulus)
        if all(odo1.offset(n) == odo2.offset(n) for n in window):
            return settled(start)
        return TailRelation("not-parallel", witnesses=tuple(disagreements(start + 2 * modulus)[:2]))
    if r1 == r2:
        return settled(0)
    if isinstance(r1, Affine) and isinstance(r2, Affine):
        # distinct affine rules agree on at most one level
        return TailRelation("not-parallel", witnesses=tuple(disagreements(3)[:2]))
    diffs = disagreements(horizon)
    if not diffs or diffs[-1] < horizon // 2:
        start = diffs[-1] + 1 if diffs else 0
        rel = settled(start)
        return TailRelation(rel.kind, rel.shift, decided=False)
    return TailRelation("not-parallel", witnesses=tuple(diffs[:2]), decided=False)


def dominating_offsets(spec: DiagramSpec, n: int) -> frozenset[int]:
    b = spec.band_at(n)
    top = max(b.coeffs)
    return frozenset(k for k, c in b.items() if c == top)


def is_dominating(spec: DiagramSpec, odo: OdometerSpec, N: int) -> bool:
    return all(odo.offset(n) in dominating_offsets(spec, n) for n in range(N))


# -- windowed subdiagrams ----------------------------------------------------


def _column_sums(b: Band, rows: range, cols: range) -> list[Fraction]:
    return [sum((b[j - i] for i in rows), Fraction(0)) for j in cols]


def _width_slope(windows: WindowFamily) -> Optional[Fraction]:
    """Slope of ``hi - lo`` when both bounds are affine (constants included)."""
    slopes = []
    for rule in (windows.lo, windows.hi):
        if isinstance(rule, Affine):
            slopes.append(rule.slope)
        elif rule.period == 1:
            slopes.append(Fraction(0))
        else:
            return None
    return slopes[1] - slopes[0]


def _ecs_verdict(spec: DiagramSpec, windows: WindowFamily) -> tuple[Verdict, str]:
    slope = _width_slope(windows)
    if slope is not None and slope > 0:
        return Verdict.INFINITE, "window sizes are unbounded"
    if windows.lo.period != 1 or windows.hi.period != 1:
        return Verdict.UNDECIDED, "window bounds are not eventually constant"
    rules = eventual_rules(spec)
    if rules is None:
        return Verdict.UNDECIDED, "diagram is not generated by sequence rules"
    start = _settle_level(spec, rules, [windows.lo, windows.hi])
    modulus = lcm_of_periods(rules.rules)
    W = windows.window(start)
    inside = {W[0] - i for i in W}
    terms = list(zip(range(rules.lo, rules.hi + 1), rules.rules))
    try:
        for residue in range(modulus):
            c_growth = combined_growth(r.growth(residue, modulus) for k, r in terms if k in inside)
            gap_growth = combined_growth(r.growth(residue, modulus) for k, r in terms if k not in inside)
            if c_growth is None:
                return Verdict.UNDECIDED, "window column sums vanish"
            if not is_summable_ratio(gap_growth, c_growth):
                return Verdict.INFINITE, f"prod r/c diverges on levels = {residue} mod {modulus}"
    except ValueError as exc:
        return Verdict.UNDECIDED, str(exc)
    return Verdict.FINITE, "prod r/c converges and windows are bounded"


def ecs_subdiagram_extension(spec: DiagramSpec, windows: WindowFamily, N: int) -> ExtensionReport:
    """Extension of the equal-column-sum measure of a windowed vertex subdiagram.

    ``alphas[n] = prod_{i <= n} (r_i / c_i) * |W_{n+1}|``.  ``extras`` carries
    the column sums and ``prod_{i < N} band_i[0] / c_i``, the share of the
    vertical odometers inside the window.
    """
    if N < 1:
        raise ValueError("horizon must be at least 1")
    sigmas, alphas, cs = [], [], []
    ratio = Fraction(1)
    r_prod, c_prod = Fraction(1), Fraction(1)
    direct = Fraction(1)
    vertical_share = Fraction(1)
    for n in range(N):
        b = spec.band_at(n)
        rows, cols = windows.window(n + 1), windows.window(n)
        sums = _column_sums(b, rows, cols)
        for a, c in zip(cols, sums):
            if c != sums[0]:
                raise NotECS(
                    f"column sums differ at level {n}: column {cols[0]} has {sums[0]}, column {a} has {c}",
                    level=n,
                    columns=(cols[0], a),
                )
        c = sums[0]
        if c == 0:
            raise NotECS(f"window at level {n} receives no edges", level=n)
        r = row_sum(b)
        cs.append(c)
        sigmas.append(r - c)
        c_prod *= c
        outside = sum(
            (coeff for i in rows for k, coeff in b.items() if (i + k) not in cols), Fraction(0)
        )
        direct += r_prod / c_prod * outside
        r_prod *= r
        ratio *= r / c
        alphas.append(ratio * len(rows))
        vertical_share *= b[0] / c
    telescoped = Fraction(1) + sum(
        (a - prev for a, prev in zip(alphas, [Fraction(windows.size(0))] + alphas[:-1])), Fraction(0)
    )
    if telescoped != direct:
        raise AssertionError("telescoping identity failed; this is a bug")
    verdict, reason = _ecs_verdict(spec, windows)
    return ExtensionReport(
        sigmas,
        alphas,
        telescoped,
        direct,
        verdict,
        N,
        reason,
        extras={"column_sums": cs, "vertical_share": vertical_share},
    )


# -- the tridiagonal class ---------------------------------------------------


def elementary_symmetric(values: Sequence, order: int) -> list[Fraction]:
    """``[e_0, ..., e_order]`` of ``values`` by the usual O(len * order) recurrence."""
    e = [Fraction(1)] + [Fraction(0)] * order
    for count, x in enumerate(values, start=1):
        for j in range(min(count, order), 0, -1):
            e[j] += x * e[j - 1]
    return e


G_CENTER_GUARD = 5000


def classc_g_center(a_rule: SequenceRule, n: int, m: int) -> int:
    """Paths from vertex ``i`` of ``V_{n+m}`` down to vertex ``i`` of ``V_n``.

    Sums over the number ``2k`` of slanted steps: ``C(2k, k)`` arrangements of
    left and right steps times ``e_{m-2k}`` of the diagonal multiplicities.
    """
    if m < 1:
        raise ValueError("span must be at least 1")
    if m > G_CENTER_GUARD:
        raise Intractable(f"span {m} exceeds guard {G_CENTER_GUARD}")
    a = [a_rule(j) for j in range(n, n + m)]
    e = elementary_symmetric(a, m)
    total = sum(math.comb(2 * k, k) * e[m - 2 * k] for k in range(m // 2 + 1))
    return int(total)


def classc_product(a_rule: SequenceRule, n: int, m: int) -> Fraction:
    """``prod_{j=n}^{n+m-1} a_j / (a_j + 2)``."""
    out = Fraction(1)
    for j in range(n, n + m):
        a = a_rule(j)
        out *= a / (a + 2)
    return out


def classc_no_measure_term(a_rule: SequenceRule, n: int, l: int, m: int) -> Fraction:
    """``prod a_j/(a_j+2) * e_l(1/a_n, ..., 1/a_{n+m-1})``; zero when ``m < l``."""
    if l < 0 or m < 1:
        raise ValueError("need l >= 0 and m >= 1")
    if m > G_CENTER_GUARD:
        raise Intractable(f"span {m} exceeds guard {G_CENTER_GUARD}")
    recips = [1 / a_rule(j) for j in range(n, n + m)]
    return classc_product(a_rule, n, m) * elementary_symmetric(recips, l)[l]


def no_measure_trace(a_rule: SequenceRule, n: int, l: int, M: int) -> list[Fraction]:
    """The term for ``m = 1 .. M``, computed incrementally."""
    e = [Fraction(1)] + [Fraction(0)] * l
    prod = Fraction(1)
    out = []
    for m in range(1, M + 1):
        a = a_rule(n + m - 1)
        prod *= a / (a + 2)
        x = 1 / a
        for j in range(min(m, l), 0, -1):
            e[j] += x * e[j - 1]
        out.append(prod * e[l])
    return out


def reciprocal_series_diverges(rule: SequenceRule) -> Optional[bool]:
    """Symbolic answer to whether ``sum 1 / a_n`` diverges; ``None`` if unknown."""
    g = rule.growth(0, rule.period or 1) if rule.period else rule.growth()
    if g is None:
        return None
    return not is_summable_ratio(type(g)(Fraction(1), 0), g)


def is_unimodal(b: Band) -> bool:
    """Nondecreasing up to offset 0, nonincreasing after it, maximum at 0."""
    left = [b[k] for k in range(b.lo, 1)]
    right = [b[k] for k in range(0, b.hi + 1)]
    rising = all(x <= y for x, y in zip(left, left[1:]))
    falling = all(x >= y for x, y in zip(right, right[1:]))
    return rising and falling and b[0] == max(b.coeffs)


def center_stochastic_trace(a_rule: SequenceRule, n: int, M: int) -> list[Fraction]:
    """``g_ii^(n,m)`` for ``m = 1 .. M`` from iterated stochastic convolution."""
    spec = classc_spec(a_rule)
    acc = None
    out = []
    for m in range(M):
        step = stochasticize(spec.band_at(n + m))
        acc = step if acc is None else convolve(step, acc)
        out.append(acc[0])
    return out


@dataclass(frozen=True)
class DePosselStep:
    m: int
    paths: int
    mu_hat: Fraction
    nu: Fraction
    ratio: Optional[Fraction]


def depossel_ratio_trace(
    spec: DiagramSpec, vertex: int, target: tuple[int, int], M: int
) -> list[DePosselStep]:
    """Partial values of two measures on the cylinder ending at ``target = (n, j)``.

    The vertical odometer sits at ``vertex``.  For ``m = 1 .. M`` the steps
    carry ``mu_hat = g' / (a_0 ... a_{n+m-1})`` (extended odometer measure) and
    ``nu = g' / ((a_0+2) ... (a_{n+m-1}+2))`` (limit of the stochastic
    products), where ``g'`` counts paths from ``vertex`` in ``V_{n+m}`` down to
    ``j`` in ``V_n``.
    """
    a_rule = classc_diagonal(spec)
    if a_rule is None:
        raise ValueError("spec is not of the tridiagonal 1, a_n, 1 shape")
    n, j = target
    offset = j - vertex
    out = []
    den_a = math.prod(a_rule(l) for l in range(n))
    den_a2 = math.prod(a_rule(l) + 2 for l in range(n))
    for m in range(1, M + 1):
        a = a_rule(n + m - 1)
        den_a *= a
        den_a2 *= a + 2
        g = int(path_count_band(spec, n, m)[offset])
        mu_hat = Fraction(g) / den_a
        nu = Fraction(g) / den_a2
        out.append(DePosselStep(m, g, mu_hat, nu, mu_hat / nu if g else None))
    return out


# -- Markov measures ---------------------------------------------------------


@dataclass(frozen=True)
class MarkovKernel:
    """Horizontally invariant Markov measure with explicit per-level probabilities.

    ``levels[n]`` maps each slot ``(offset, copy)`` to the probability of the
    corresponding outgoing edge; the same numbers apply at every vertex.
    """

    initial: Fraction
    levels: tuple[tuple[tuple[Slot, Fraction], ...], ...]

    def __post_init__(self):
        initial = Fraction(self.initial)
        if initial <= 0:
            raise InvalidKernel("initial value must be positive")
        object.__setattr__(self, "initial", initial)
        levels = []
        for n, level in enumerate(self.levels):
            items = dict(level.items() if isinstance(level, dict) else level)
            probs = {(int(k), int(c)): Fraction(p) for (k, c), p in items.items()}
            if any(p <= 0 for p in probs.values()):
                raise InvalidKernel(f"level {n}: probabilities must be positive")
            if sum(probs.values(), Fraction(0)) != 1:
                raise InvalidKernel(f"level {n}: outgoing probabilities must sum to 1")
            levels.append(tuple(sorted(probs.items())))
        object.__setattr__(self, "levels", tuple(levels))

    def probability(self, spec: DiagramSpec, n: int, slot: Slot) -> Fraction:
        if n >= len(self.levels):
            raise FiniteHorizon(f"kernel has no probabilities for level {n}")
        table = dict(self.levels[n])
        if set(table) != set(slots(spec.band_at(n))):
            raise InvalidKernel(f"level {n}: kernel slots do not match the diagram's edges")
        return table[slot]

    def is_uniform(self, spec: DiagramSpec) -> bool:
        return all(
            all(p == 1 / row_sum(spec.band_at(n)) for _, p in level)
            for n, level in enumerate(self.levels)
        )


@dataclass(frozen=True)
class UniformKernel:
    """Probability ``1 / r_n`` on every outgoing edge."""

    initial: Fraction = Fraction(1)

    def __post_init__(self):
        initial = Fraction(self.initial)
        if initial <= 0:
            raise InvalidKernel("initial value must be positive")
        object.__setattr__(self, "initial", initial)

    def probability(self, spec: DiagramSpec, n: int, slot: Slot) -> Fraction:
        b = spec.band_at(n)
        k, c = slot
        if not 0 <= c < b[k]:
            raise MissingEdge(f"slot {slot} does not exist at level {n}")
        return 1 / row_sum(b)

    def is_uniform(self, spec: DiagramSpec) -> bool:
        return True


def markov_cylinder(spec: DiagramSpec, kernel, path: FinitePath) -> Fraction:
    if path.start != 0:
        raise ValueError("cylinders start at level 0")
    path.validate(spec)
    value = kernel.initial
    for n, slot in enumerate(path.edges):
        value *= kernel.probability(spec, n, slot)
    return value


@dataclass(frozen=True)
class MarkovCheck:
    ok: bool
    depth: Optional[int] = None
    witness: Optional[tuple[FinitePath, FinitePath]] = None
    values: Optional[tuple[Fraction, Fraction]] = None

    def __bool__(self):
        return self.ok


def paths_into(spec: DiagramSpec, depth: int, terminal: int = 0, guard: int = 10**6):
    """Every path from ``V_0`` to ``terminal`` in ``V_depth``."""
    level_slots = [slots(spec.band_at(n)) for n in range(depth)]
    total = math.prod(len(s) for s in level_slots)
    if total > guard:
        raise Intractable(f"{total} paths exceed the enumeration guard {guard}")
    for combo in itertools.product(*level_slots):
        base = terminal + sum(k for k, _ in combo)
        yield FinitePath(base, combo)


def markov_tail_invariance_check(spec: DiagramSpec, kernel, depth: int) -> MarkovCheck:
    """Compare cylinder masses of all paths sharing a terminal vertex, depth by depth."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    for d in range(1, depth + 1):
        first, first_value = None, None
        for path in paths_into(spec, d):
            value = markov_cylinder(spec, kernel, path)
            if first is None:
                first, first_value = path, value
            elif value != first_value:
                return MarkovCheck(False, d, (first, path), (first_value, value))
    return MarkovCheck(True, depth)

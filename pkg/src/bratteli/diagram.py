"""Horizontally stationary diagrams as level-indexed bands.

Level ``n`` of a diagram is the band of its incidence matrix ``F_n``: vertex
``i`` of ``V_{n+1}`` receives ``band[k]`` edges from vertex ``i + k`` of
``V_n``.  Nothing infinite is ever materialized, except inside the
brute-force oracle, which builds an explicit finite window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .errors import FiniteHorizon, Intractable, MissingEdge, RuleOverflow
from .rules import Constant, SequenceRule
from .toeplitz import Band, convolve_all, row_sum

__all__ = [
    "DiagramSpec",
    "RuleSpec",
    "ExplicitSpec",
    "TriadicSpec",
    "OdometerSpec",
    "WindowFamily",
    "BoundedSize",
    "FinitePath",
    "Slot",
    "classc_spec",
    "classc_diagonal",
    "classc_diagonal",
    "band_at",
    "height",
    "telescope",
    "bounded_size_params",
    "path_count_band",
    "path_count_bruteforce",
    "path_count_bruteforce_all",
    "slots",
    "eventual_rules",
    "BRUTEFORCE_GUARD",
]

Slot = tuple[int, int]
"""An incoming edge class ``(offset, copy)``; ``copy < band[offset]``."""

BRUTEFORCE_GUARD = 10**7


class DiagramSpec:
    """A horizontally stationary diagram; subclasses define :meth:`band_at`."""

    def band_at(self, n: int) -> Band:
        raise NotImplementedError

    def bands(self, start: int, stop: int) -> list[Band]:
        return [self.band_at(n) for n in range(start, stop)]


@dataclass(frozen=True)
class RuleSpec(DiagramSpec):
    """One sequence rule per offset ``lo, lo + 1, ..., lo + len(rules) - 1``."""

    lo: int
    rules: tuple[SequenceRule, ...]

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        if len(self.rules) < 2:
            raise ValueError("support must contain at least two offsets")

    @property
    def hi(self) -> int:
        return self.lo + len(self.rules) - 1

    def rule_at(self, offset: int) -> Optional[SequenceRule]:
        i = offset - self.lo
        return self.rules[i] if 0 <= i < len(self.rules) else None

    def band_at(self, n: int) -> Band:
        if n < 0:
            raise ValueError("level must be non-negative")
        values = []
        for k, rule in zip(range(self.lo, self.hi + 1), self.rules):
            v = rule(n)
            if v < 0:
                raise RuleOverflow(f"coefficient must be non-negative (offset {k}, level {n}: {v})")
            if v.denominator != 1:
                raise RuleOverflow(f"coefficient must be an integer (offset {k}, level {n}: {v})")
            values.append(v)
        if not any(values):
            raise RuleOverflow(f"level {n} has no edges")
        return Band(self.lo, tuple(values))


@dataclass(frozen=True)
class ExplicitSpec(DiagramSpec):
    """Explicit bands for the first levels, then ``tail`` (absolute level index)."""

    levels: tuple[Band, ...]
    tail: Optional[DiagramSpec] = None

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        for n, b in enumerate(self.levels):
            _check_incidence(b, n)

    def band_at(self, n: int) -> Band:
        if n < 0:
            raise ValueError("level must be non-negative")
        if n < len(self.levels):
            return self.levels[n]
        if self.tail is None:
            raise FiniteHorizon(f"no band for level {n}; explicit data stops at {len(self.levels)}")
        return self.tail.band_at(n)


@dataclass(frozen=True)
class TriadicSpec(DiagramSpec):
    """Three single edges into each vertex, from offsets ``-2*3**n, -3**n, 0``."""

    def band_at(self, n: int) -> Band:
        step = 3**n
        return Band.from_dict({-2 * step: 1, -step: 1, 0: 1})


def _check_incidence(b: Band, n: int) -> None:
    if not b.is_integer():
        raise RuleOverflow(f"coefficient must be an integer (level {n})")


def classc_spec(a_rule: SequenceRule) -> RuleSpec:
    """Tridiagonal diagram with ``a_n`` on the diagonal and ones beside it."""
    return RuleSpec(-1, (Constant(1), a_rule, Constant(1)))


def classc_diagonal(spec: DiagramSpec) -> Optional[SequenceRule]:
    """The diagonal rule if ``spec`` has the tridiagonal ``1, a_n, 1`` shape."""
    if (
        isinstance(spec, RuleSpec)
        and spec.lo == -1
        and len(spec.rules) == 3
        and spec.rules[0] == Constant(1)
        and spec.rules[2] == Constant(1)
    ):
        return spec.rules[1]
    return None


def eventual_rules(spec: DiagramSpec) -> Optional[RuleSpec]:
    """The rule-based description governing all large levels, if there is one."""
    if isinstance(spec, RuleSpec):
        return spec
    if isinstance(spec, ExplicitSpec) and spec.tail is not None:
        return eventual_rules(spec.tail)
    return None


def band_at(spec: DiagramSpec, n: int) -> Band:
    return spec.band_at(n)


def height(spec: DiagramSpec, n: int) -> int:
    """Number of paths from ``V_0`` into any single vertex of ``V_n``."""
    if n < 0:
        raise ValueError("level must be non-negative")
    h = Fraction(1)
    for level in range(n):
        h *= row_sum(spec.band_at(level))
    return int(h)


def telescope(spec: DiagramSpec, cuts: Sequence[int]) -> ExplicitSpec:
    """Collapse levels ``cuts[k] .. cuts[k+1] - 1`` into one level ``k``."""
    cuts = list(cuts)
    if len(cuts) < 2 or cuts[0] != 0:
        raise ValueError("cuts must start at 0 and contain at least two levels")
    if any(b <= a for a, b in zip(cuts, cuts[1:])):
        raise ValueError("cuts must be strictly increasing")
    levels = []
    for start, stop in zip(cuts, cuts[1:]):
        # F_{stop-1} ... F_start; convolution is commutative, order kept for readability
        levels.append(convolve_all(reversed(spec.bands(start, stop))))
    return ExplicitSpec(tuple(levels))


@dataclass(frozen=True)
class BoundedSize:
    t: int
    L: int
    symmetric: bool
    full: bool


def bounded_size_params(spec: DiagramSpec, n: int) -> BoundedSize:
    b = spec.band_at(n)
    p, q = -b.lo, b.hi
    t = max(abs(b.lo), abs(b.hi))
    symmetric = p == q
    full = symmetric and all(c > 0 for c in b.coeffs)
    return BoundedSize(t=t, L=int(row_sum(b)), symmetric=symmetric, full=full)


def path_count_band(spec: DiagramSpec, n: int, m: int) -> Band:
    """Band of ``F_{n+m-1} ... F_n``: entry ``k`` counts paths from ``i + k`` in
    ``V_n`` up to ``i`` in ``V_{n+m}``."""
    if m < 1:
        raise ValueError("span must be at least 1")
    return convolve_all(reversed(spec.bands(n, n + m)))


def path_count_bruteforce_all(
    spec: DiagramSpec, n: int, m: int, guard: int = BRUTEFORCE_GUARD
) -> dict[int, int]:
    """Enumerate every edge sequence from vertex 0 of ``V_{n+m}`` down to ``V_n``.

    Returns counts keyed by the end vertex (which equals the offset, since the
    start vertex is 0).  Works on an explicit finite window of vertices and
    expands multi-edges one copy at a time.
    """
    if m < 1:
        raise ValueError("span must be at least 1")
    bands = spec.bands(n, n + m)
    total = math.prod(int(row_sum(b)) for b in bands)
    if total > guard:
        raise Intractable(f"{total} paths exceed the enumeration guard {guard}")
    radius = sum(max(abs(b.lo), abs(b.hi)) for b in bands)
    window = range(-radius, radius + 1)
    # adjacency[l][u] lists the source vertex once per edge copy into u at level n + l
    adjacency = []
    for b in bands:
        table = {}
        for u in window:
            sources = []
            for j in window:
                sources.extend([j] * int(b[j - u]))
            table[u] = sources
        adjacency.append(table)

    counts: dict[int, int] = {}
    stack = [(m, 0)]
    while stack:
        level, u = stack.pop()
        if level == 0:
            counts[u] = counts.get(u, 0) + 1
            continue
        for j in adjacency[level - 1][u]:
            stack.append((level - 1, j))
    return counts


def path_count_bruteforce(spec: DiagramSpec, n: int, m: int, k: int, guard: int = BRUTEFORCE_GUARD) -> int:
    return path_count_bruteforce_all(spec, n, m, guard).get(k, 0)


def slots(b: Band) -> list[Slot]:
    """All incoming edge classes ``(offset, copy)`` of a band, in ascending order."""
    return [(k, c) for k, coeff in b.items() for c in range(int(coeff))]


@dataclass(frozen=True)
class OdometerSpec:
    """A vertex sequence ``i_{n+1} = i_n - k_n`` with ``k_n = offsets(n)``."""

    offsets: SequenceRule
    base: int = 0

    def offset(self, n: int) -> int:
        k = self.offsets(n)
        if k.denominator != 1:
            raise RuleOverflow(f"odometer offset at level {n} is not an integer")
        return int(k)

    def vertex(self, n: int) -> int:
        return self.base - sum(self.offset(l) for l in range(n))

    def vertices(self, count: int) -> list[int]:
        out = [self.base]
        for l in range(count - 1):
            out.append(out[-1] - self.offset(l))
        return out

    def shifted(self, k: int) -> "OdometerSpec":
        return OdometerSpec(self.offsets, self.base + k)

    def coefficient(self, spec: DiagramSpec, n: int) -> Fraction:
        """Number of edges between ``i_n`` and ``i_{n+1}``."""
        f = spec.band_at(n)[self.offset(n)]
        if f == 0:
            raise MissingEdge(f"no edge at level {n} along offset {self.offset(n)}")
        return f


@dataclass(frozen=True)
class WindowFamily:
    """Finite vertex windows ``W_n = [lo(n), hi(n)]``."""

    lo: SequenceRule
    hi: SequenceRule

    def window(self, n: int) -> range:
        lo, hi = self.lo(n), self.hi(n)
        if lo.denominator != 1 or hi.denominator != 1:
            raise RuleOverflow(f"window bounds at level {n} are not integers")
        if hi < lo:
            raise ValueError(f"window at level {n} is empty")
        return range(int(lo), int(hi) + 1)

    def size(self, n: int) -> int:
        return len(self.window(n))


@dataclass(frozen=True)
class FinitePath:
    """Edges ``(offset, copy)`` at levels ``start, start + 1, ...`` from ``base``.

    The edge at level ``l`` leaves vertex ``v`` of ``V_l`` and enters vertex
    ``v - offset`` of ``V_{l+1}``.
    """

    base: int
    edges: tuple[Slot, ...] = field(default=())
    start: int = 0

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(k), int(c)) for k, c in self.edges))

    @property
    def depth(self) -> int:
        return len(self.edges)

    def vertices(self) -> list[int]:
        out = [self.base]
        for k, _ in self.edges:
            out.append(out[-1] - k)
        return out

    @property
    def terminal(self) -> int:
        return self.vertices()[-1]

    def shift(self, k: int) -> "FinitePath":
        return FinitePath(self.base + k, self.edges, self.start)

    def validate(self, spec: DiagramSpec) -> None:
        for i, (k, c) in enumerate(self.edges):
            level = self.start + i
            if not 0 <= c < spec.band_at(level)[k]:
                raise MissingEdge(f"slot ({k}, {c}) does not exist at level {level}")

    def __iter__(self) -> Iterator[Slot]:
        return iter(self.edges)

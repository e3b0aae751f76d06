"""Orders on incoming edges, the Vershik successor map and its continuity test.

An order is horizontally stationary: at level ``n`` every vertex orders its
incoming edges the same way, so an order is just a permutation of the level's
slots ``(offset, copy)``.  The successor map acts on finite prefixes with a
fixed terminal vertex; infinite paths are never materialized.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .diagram import DiagramSpec, FinitePath, RuleSpec, Slot, slots
from .errors import InvalidOrder

__all__ = [
    "OrderSpec",
    "LeftToRight",
    "RightToLeft",
    "ExplicitOrder",
    "MaximalPrefix",
    "OrbitResult",
    "LevelRecord",
    "ContinuityReport",
    "reverse_order",
    "max_min_edges",
    "minimal_prefix",
    "maximal_prefix",
    "vershik_successor",
    "orbit",
    "continuity_check",
]


class OrderSpec:
    def slots_at(self, spec: DiagramSpec, n: int) -> list[Slot]:
        """Slots of level ``n`` from smallest to largest."""
        raise NotImplementedError

    @property
    def level_independent(self) -> bool:
        return True


@dataclass(frozen=True)
class LeftToRight(OrderSpec):
    """Ascending source vertex (ascending offset), then ascending copy."""

    def slots_at(self, spec, n):
        return slots(spec.band_at(n))


@dataclass(frozen=True)
class RightToLeft(OrderSpec):
    def slots_at(self, spec, n):
        return slots(spec.band_at(n))[::-1]


@dataclass(frozen=True)
class ExplicitOrder(OrderSpec):
    """One slot list per level; the last list is reused for deeper levels."""

    levels: tuple[tuple[Slot, ...], ...]

    def __post_init__(self):
        if not self.levels:
            raise InvalidOrder("explicit order needs at least one level")
        levels = tuple(tuple((int(k), int(c)) for k, c in level) for level in self.levels)
        for n, level in enumerate(levels):
            if len(set(level)) != len(level):
                raise InvalidOrder(f"level {n} lists a slot more than once")
        object.__setattr__(self, "levels", levels)

    def slots_at(self, spec, n):
        listed = list(self.levels[min(n, len(self.levels) - 1)])
        if sorted(listed) != slots(spec.band_at(n)):
            raise InvalidOrder(f"order at level {n} is not a permutation of the level's edges")
        return listed

    @property
    def level_independent(self) -> bool:
        return len(self.levels) == 1


def reverse_order(order: OrderSpec) -> OrderSpec:
    if isinstance(order, LeftToRight):
        return RightToLeft()
    if isinstance(order, RightToLeft):
        return LeftToRight()
    if isinstance(order, ExplicitOrder):
        return ExplicitOrder(tuple(level[::-1] for level in order.levels))
    raise TypeError(f"cannot reverse {type(order).__name__}")


def max_min_edges(spec: DiagramSpec, order: OrderSpec, n: int) -> tuple[Slot, Slot]:
    ordered = order.slots_at(spec, n)
    return ordered[-1], ordered[0]


def _extremal_prefix(spec, order, terminal, depth, start, pick) -> FinitePath:
    edges = []
    u = terminal
    for level in range(start + depth - 1, start - 1, -1):
        slot = pick(order.slots_at(spec, level))
        edges.append(slot)
        u += slot[0]
    return FinitePath(u, tuple(reversed(edges)), start)


def minimal_prefix(spec: DiagramSpec, order: OrderSpec, terminal: int, depth: int, start: int = 0) -> FinitePath:
    """The unique all-minimal path from level ``start`` into ``terminal``."""
    return _extremal_prefix(spec, order, terminal, depth, start, lambda s: s[0])


def maximal_prefix(spec: DiagramSpec, order: OrderSpec, terminal: int, depth: int, start: int = 0) -> FinitePath:
    return _extremal_prefix(spec, order, terminal, depth, start, lambda s: s[-1])


@dataclass(frozen=True)
class MaximalPrefix:
    """Signal: every edge of ``path`` is maximal, so it has no successor at this depth."""

    path: FinitePath


def vershik_successor(spec: DiagramSpec, order: OrderSpec, x: FinitePath) -> Union[FinitePath, MaximalPrefix]:
    x.validate(spec)
    for i, slot in enumerate(x.edges):
        ordered = order.slots_at(spec, x.start + i)
        pos = ordered.index(slot)
        if pos + 1 < len(ordered):
            break
    else:
        return MaximalPrefix(x)
    nxt = ordered[pos + 1]
    source = x.vertices()[i + 1] + nxt[0]
    head = minimal_prefix(spec, order, source, i, x.start)
    return FinitePath(head.base, head.edges + (nxt,) + x.edges[i + 1 :], x.start)


@dataclass
class OrbitResult:
    prefixes: list[FinitePath]
    reached_maximal: bool
    terminal: int

    @property
    def steps(self) -> int:
        return len(self.prefixes) - 1


def orbit(spec: DiagramSpec, order: OrderSpec, x: FinitePath, steps: int) -> OrbitResult:
    """Iterate the successor up to ``steps`` times; ``prefixes[0]`` is ``x``.

    Every prefix must end at the terminal vertex of ``x``; a violation is a bug
    and raises.
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    terminal = x.terminal
    prefixes = [x]
    for _ in range(steps):
        nxt = vershik_successor(spec, order, prefixes[-1])
        if isinstance(nxt, MaximalPrefix):
            return OrbitResult(prefixes, True, terminal)
        if nxt.terminal != terminal:
            raise AssertionError("successor left its tower; this is a bug")
        prefixes.append(nxt)
    return OrbitResult(prefixes, False, terminal)


@dataclass(frozen=True)
class LevelRecord:
    level: int
    max_vertex: int
    sources: tuple[int, ...]
    v: Optional[int]
    min_link: Optional[bool]


@dataclass
class ContinuityReport:
    records: list[LevelRecord]
    continuous: bool
    horizon: int
    failed_level: Optional[int] = None
    witness: dict = field(default_factory=dict)
    all_levels: bool = False

    @property
    def verdict(self) -> str:
        if self.continuous:
            return "ContinuousForAllLevels" if self.all_levels else f"ContinuousUpTo({self.horizon})"
        return f"DiscontinuousAt({self.failed_level})"


def _stationary(spec: DiagramSpec, order: OrderSpec) -> bool:
    return (
        isinstance(spec, RuleSpec)
        and all(r.period == 1 and r.settle == 0 for r in spec.rules)
        and all(r(0) == r(1) for r in spec.rules)
        and order.level_independent
    )


def continuity_check(spec: DiagramSpec, order: OrderSpec, N: int, w: int = 0) -> ContinuityReport:
    """Check the two continuity conditions along the maximal path through ``w``.

    For each level ``1 <= n < N`` the non-maximal outgoing slots of the
    maximal path's vertex ``w_n`` must all have order-successors with a common
    source ``v_n``, and the minimal edge leaving ``v_n`` must enter
    ``v_{n+1}``.  Everything is offset arithmetic on a generic vertex.
    """
    if N < 2:
        raise ValueError("horizon must be at least 2")
    w_n = w - max_min_edges(spec, order, 0)[0][0]
    records: list[LevelRecord] = []
    prev_v: Optional[int] = None
    prev_min: Optional[int] = None
    for n in range(1, N):
        ordered = order.slots_at(spec, n)
        by_source: dict[int, tuple[Slot, Slot]] = {}
        for slot, nxt in zip(ordered, ordered[1:]):
            by_source.setdefault(w_n - slot[0] + nxt[0], (slot, nxt))
        sources = tuple(sorted(by_source))
        v = sources[0] if len(sources) == 1 else None
        link = None
        if prev_v is not None and v is not None:
            link = v == prev_v - prev_min
            records[-1] = replace(records[-1], min_link=link)
        records.append(LevelRecord(n, w_n, sources, v, None))
        if v is None:
            a, b = sources[0], sources[1]
            witness = {
                "kind": "successor-sources",
                "sources": [a, b],
                "slots": [list(by_source[a][0]), list(by_source[b][0])],
                "successors": [list(by_source[a][1]), list(by_source[b][1])],
            }
            return ContinuityReport(records, False, N, n, witness)
        if link is False:
            witness = {
                "kind": "missing-minimal-edge",
                "from": prev_v,
                "to": v,
                "minimal_edge_enters": prev_v - prev_min,
            }
            return ContinuityReport(records, False, N, n - 1, witness)
        prev_v = v
        prev_min = max_min_edges(spec, order, n)[1][0]
        w_n -= max_min_edges(spec, order, n)[0][0]
    return ContinuityReport(records, True, N, all_levels=_stationary(spec, order) and N >= 3)

"""Closed-form level sequences.

Rules generate the band coefficients of a diagram level by level, the
offsets of an odometer, and the endpoints of window families.  The algebra
is kept closed on purpose: every rule has a known asymptotic shape, which is
what makes series such as ``sum sigma_n / f_n`` decidable.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

__all__ = [
    "SequenceRule",
    "Constant",
    "Affine",
    "Geometric",
    "ExplicitThenPeriodic",
    "Growth",
    "parse_rule",
    "combined_growth",
    "is_summable_ratio",
    "lcm_of_periods",
]


def _frac(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("use Fraction or int, not float")
    return Fraction(x)


@dataclass(frozen=True, order=True)
class Growth:
    """Asymptotic shape ``C * rate**n * n**degree`` with ``C > 0``."""

    rate: Fraction
    degree: int


class SequenceRule:
    """Base class; subclasses are frozen dataclasses."""

    def __call__(self, n: int) -> Fraction:
        raise NotImplementedError

    def values(self, count: int) -> list[Fraction]:
        return [self(n) for n in range(count)]

    @property
    def period(self) -> Optional[int]:
        """Eventual period of the sequence, or ``None`` if it is not eventually periodic."""
        raise NotImplementedError

    @property
    def settle(self) -> int:
        """Index from which the eventual behaviour (period / growth) holds."""
        return 0

    def growth(self, residue: int = 0, modulus: int = 1) -> Optional[Growth]:
        """Growth along ``n = residue (mod modulus)``; ``None`` means eventually zero there.

        ``modulus`` must be a multiple of the rule's period when the rule is
        periodic but not constant.
        """
        raise NotImplementedError

    def to_text(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(SequenceRule):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", _frac(self.value))

    def __call__(self, n):
        return self.value

    @property
    def period(self):
        return 1

    def growth(self, residue=0, modulus=1):
        return None if self.value == 0 else Growth(Fraction(1), 0)

    def to_text(self):
        return f"constant({self.value})"


@dataclass(frozen=True)
class Affine(SequenceRule):
    """``slope * n + intercept``."""

    slope: Fraction
    intercept: Fraction

    def __post_init__(self):
        object.__setattr__(self, "slope", _frac(self.slope))
        object.__setattr__(self, "intercept", _frac(self.intercept))

    def __call__(self, n):
        return self.slope * n + self.intercept

    @property
    def period(self):
        return 1 if self.slope == 0 else None

    def growth(self, residue=0, modulus=1):
        if self.slope < 0:
            raise ValueError("decreasing affine rule is eventually negative")
        if self.slope > 0:
            return Growth(Fraction(1), 1)
        return None if self.intercept == 0 else Growth(Fraction(1), 0)

    def to_text(self):
        return f"affine({self.slope},{self.intercept})"


@dataclass(frozen=True)
class Geometric(SequenceRule):
    """``base * ratio**n``."""

    base: Fraction
    ratio: Fraction

    def __post_init__(self):
        object.__setattr__(self, "base", _frac(self.base))
        object.__setattr__(self, "ratio", _frac(self.ratio))

    def __call__(self, n):
        return self.base * self.ratio**n

    @property
    def period(self):
        if self.base == 0 or self.ratio in (0, 1):
            return 1
        return None

    @property
    def settle(self):
        return 1 if self.ratio == 0 else 0

    def growth(self, residue=0, modulus=1):
        if self.base == 0 or self.ratio == 0:
            return None
        if self.ratio < 0:
            raise ValueError("alternating geometric rule takes negative values")
        return Growth(self.ratio, 0)

    def to_text(self):
        return f"geometric({self.base},{self.ratio})"


@dataclass(frozen=True)
class ExplicitThenPeriodic(SequenceRule):
    """``prefix`` values first, then ``cycle`` repeated forever."""

    prefix: tuple[Fraction, ...]
    cycle: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.cycle:
            raise ValueError("cycle must be nonempty")
        object.__setattr__(self, "prefix", tuple(_frac(x) for x in self.prefix))
        object.__setattr__(self, "cycle", tuple(_frac(x) for x in self.cycle))

    def __call__(self, n):
        if n < len(self.prefix):
            return self.prefix[n]
        return self.cycle[(n - len(self.prefix)) % len(self.cycle)]

    @property
    def period(self):
        return len(self.cycle)

    @property
    def settle(self):
        return len(self.prefix)

    def growth(self, residue=0, modulus=1):
        if modulus % len(self.cycle):
            raise ValueError("modulus must be a multiple of the cycle length")
        n = self.settle + ((residue - self.settle) % modulus)
        return None if self(n) == 0 else Growth(Fraction(1), 0)

    def to_text(self):
        head = ",".join(str(x) for x in self.prefix)
        tail = ",".join(str(x) for x in self.cycle)
        return f"explicit({head} | {tail})" if self.prefix else f"explicit({tail})"


_RULE_RE = re.compile(r"^\s*([a-z]+)\s*\((.*)\)\s*$", re.S)


def parse_rule(text: str) -> SequenceRule:
    """Parse ``constant(3)``, ``affine(1,1)``, ``geometric(2,2)``, ``explicit(1,2 | 3,4)``."""
    m = _RULE_RE.match(text)
    if not m:
        raise ValueError(f"not a sequence rule: {text.strip()!r}")
    name, body = m.group(1), m.group(2)

    def numbers(s: str) -> list[Fraction]:
        s = s.strip()
        return [Fraction(tok.strip()) for tok in s.split(",")] if s else []

    try:
        if name == "constant":
            (v,) = numbers(body)
            return Constant(v)
        if name == "affine":
            slope, intercept = numbers(body)
            return Affine(slope, intercept)
        if name == "geometric":
            base, ratio = numbers(body)
            return Geometric(base, ratio)
        if name == "explicit":
            if "|" in body:
                head, tail = body.split("|", 1)
                return ExplicitThenPeriodic(tuple(numbers(head)), tuple(numbers(tail)))
            return ExplicitThenPeriodic((), tuple(numbers(body)))
    except ValueError as exc:
        raise ValueError(f"bad arguments in {text.strip()!r}: {exc}") from None
    raise ValueError(f"unknown rule {name!r}")


def lcm_of_periods(rules: Iterable[SequenceRule]) -> int:
    """Common modulus for residue-class analysis of ``rules``.

    Affine and geometric rules grow the same way on every residue class, so
    only explicit cycles contribute.
    """
    mod = 1
    for r in rules:
        if isinstance(r, ExplicitThenPeriodic):
            mod = math.lcm(mod, len(r.cycle))
    return mod


def combined_growth(growths: Iterable[Optional[Growth]]) -> Optional[Growth]:
    """Growth of a sum of non-negative sequences: the dominant term."""
    present = [g for g in growths if g is not None]
    return max(present) if present else None


def is_summable_ratio(num: Optional[Growth], den: Growth) -> bool:
    """Whether ``sum num_n / den_n`` converges for sequences of the given shapes."""
    if num is None:
        return True
    if num.rate < den.rate:
        return True
    if num.rate > den.rate:
        return False
    return den.degree - num.degree >= 2

"""Finitely supported sequences over Z and banded Toeplitz algebra.

A :class:`Band` stores the diagonal profile of an infinite Toeplitz matrix
``F`` with ``F[i][i + k] == band[k]``.  Multiplying Toeplitz matrices is
convolution of their bands; the row sum and column sum of such a matrix are
both the sum of the band.  All arithmetic is exact (:class:`fractions.Fraction`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Sequence

from .errors import ZeroBand

__all__ = [
    "Band",
    "LaurentPoly",
    "convolve",
    "convolve_all",
    "row_sum",
    "stochasticize",
    "laurent_multiply",
    "is_toeplitz_window",
    "toeplitz_window",
    "matmul",
    "trust_region",
]


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating point coefficients are not accepted; use Fraction or int")
    return Fraction(value)


def _canonical(lo: int, coeffs: Iterable) -> tuple[int, tuple[Fraction, ...]]:
    values = [_as_fraction(c) for c in coeffs]
    for c in values:
        if c < 0:
            raise ValueError("coefficient must be non-negative")
    start = 0
    while start < len(values) and values[start] == 0:
        start += 1
    if start == len(values):
        raise ValueError("band has empty support")
    stop = len(values)
    while values[stop - 1] == 0:
        stop -= 1
    return lo + start, tuple(values[start:stop])


@dataclass(frozen=True)
class Band:
    """Non-negative rational coefficients at offsets ``lo .. lo + len - 1``.

    Offset ``k`` is ``column - row``.  Construction trims zero coefficients at
    both ends; an all-zero band is rejected.
    """

    lo: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        lo, coeffs = _canonical(int(self.lo), self.coeffs)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_dict(cls, terms: Mapping[int, object]) -> "Band":
        nonzero = {k: _as_fraction(v) for k, v in terms.items() if v != 0}
        if not nonzero:
            raise ValueError("band has empty support")
        lo, hi = min(nonzero), max(nonzero)
        return cls(lo, tuple(nonzero.get(k, Fraction(0)) for k in range(lo, hi + 1)))

    @classmethod
    def delta(cls, offset: int = 0, value=1) -> "Band":
        return cls(offset, (value,))

    @property
    def hi(self) -> int:
        return self.lo + len(self.coeffs) - 1

    @property
    def width(self) -> int:
        return len(self.coeffs)

    def offsets(self) -> range:
        return range(self.lo, self.hi + 1)

    def __getitem__(self, offset: int) -> Fraction:
        i = offset - self.lo
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def items(self):
        """Yield ``(offset, coefficient)`` for nonzero coefficients."""
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.lo + i, c

    def is_integer(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def reversed(self) -> "Band":
        """Profile of the transposed matrix: offset ``k`` becomes ``-k``."""
        return Band(-self.hi, tuple(reversed(self.coeffs)))

    def shift(self, k: int) -> "Band":
        return Band(self.lo + k, self.coeffs)

    def scale(self, factor) -> "Band":
        factor = _as_fraction(factor)
        return Band(self.lo, tuple(c * factor for c in self.coeffs))

    def laurent(self) -> "LaurentPoly":
        return LaurentPoly.from_terms(dict(self.items()))

    def __str__(self) -> str:
        body = ", ".join(str(c) for c in self.coeffs)
        return f"{self.lo}: {body}"


@dataclass(frozen=True)
class LaurentPoly:
    """``sum_k terms[k] * z**k`` with finitely many nonzero terms."""

    terms: tuple[tuple[int, Fraction], ...]

    def __post_init__(self):
        merged: dict[int, Fraction] = {}
        for k, c in self.terms:
            c = _as_fraction(c)
            if c < 0:
                raise ValueError("coefficient must be non-negative")
            merged[int(k)] = merged.get(int(k), Fraction(0)) + c
        cleaned = tuple(sorted((k, c) for k, c in merged.items() if c))
        if not cleaned:
            raise ValueError("Laurent polynomial is zero")
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def from_terms(cls, terms: Mapping[int, object]) -> "LaurentPoly":
        return cls(tuple(terms.items()))

    def coefficient(self, k: int) -> Fraction:
        return dict(self.terms).get(k, Fraction(0))

    def band(self) -> Band:
        return Band.from_dict(dict(self.terms))


def convolve(a: Band, b: Band) -> Band:
    """Band of the Toeplitz product: ``(a * b)[k] = sum_j a[j] b[k - j]``."""
    out = [Fraction(0)] * (a.width + b.width - 1)
    for i, x in enumerate(a.coeffs):
        if not x:
            continue
        for j, y in enumerate(b.coeffs):
            out[i + j] += x * y
    return Band(a.lo + b.lo, tuple(out))


def convolve_all(bands: Iterable[Band]) -> Band:
    return reduce(convolve, bands)


def row_sum(b: Band) -> Fraction:
    return sum(b.coeffs, Fraction(0))


def stochasticize(b: Band) -> Band:
    total = row_sum(b)
    if total == 0:
        raise ZeroBand("row sum is zero")
    return b.scale(1 / total)


def laurent_multiply(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    # Schoolbook product keyed by exponent; deliberately shares no code with convolve.
    acc: dict[int, Fraction] = {}
    for ea, ca in a.terms:
        for eb, cb in b.terms:
            acc[ea + eb] = acc.get(ea + eb, Fraction(0)) + ca * cb
    return LaurentPoly.from_terms(acc)


def is_toeplitz_window(m: Sequence[Sequence]) -> bool:
    """True iff every diagonal of the finite matrix ``m`` is constant."""
    rows = len(m)
    if rows == 0:
        return True
    cols = len(m[0])
    if any(len(row) != cols for row in m):
        raise ValueError("matrix is not rectangular")
    return all(
        m[i][j] == m[i + 1][j + 1] for i in range(rows - 1) for j in range(cols - 1)
    )


def toeplitz_window(b: Band, rows: range, cols: range) -> list[list[Fraction]]:
    """Finite section ``F[i][j] = b[j - i]`` for ``i in rows``, ``j in cols``."""
    return [[b[j - i] for j in cols] for i in rows]


def matmul(x: Sequence[Sequence], y: Sequence[Sequence]) -> list[list]:
    inner = len(y)
    cols = len(y[0]) if inner else 0
    return [
        [sum((row[t] * y[t][j] for t in range(inner)), Fraction(0)) for j in range(cols)]
        for row in x
    ]


def trust_region(size: int, left: Band, right: Band) -> range:
    """Row indices of a ``size``-square window product unaffected by truncation.

    For ``W_left @ W_right`` on a common index range, row ``i`` of the product
    is exact when every intermediate index ``i + k`` (``k`` in the support of
    ``left``) lies inside the window.  Columns are then exact wherever the
    windowed realization of the convolution itself fits.
    """
    lo = max(0, -left.lo)
    hi = min(size, size - left.hi)
    return range(lo, max(lo, hi))

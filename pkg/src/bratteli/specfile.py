"""Keyed text format for diagrams, odometers, windows, orders and kernels.

Example::

    # tridiagonal diagram with a_n = 2 * 2**n
    [diagram]
    support = -1..1
    rules = constant(1), geometric(2,2), constant(1)

    [odometer vertical]
    offsets = constant(0)

    [order l2r]
    kind = left-to-right

Top-level ``diagram = builtin:triadic`` or ``diagram = builtin:classc(rule)``
replaces the ``[diagram]`` section.  Explicit leading levels go in the
diagram section as ``level.N = lo: c, c, ...``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .diagram import (
    DiagramSpec,
    ExplicitSpec,
    OdometerSpec,
    RuleSpec,
    TriadicSpec,
    WindowFamily,
    classc_spec,
    slots,
)
from .errors import BratteliError
from .measures import ConstantVec, FiniteVec, MarkovKernel, MeasureVector, UniformKernel
from .rules import parse_rule
from .toeplitz import Band
from .vershik import ExplicitOrder, LeftToRight, OrderSpec, RightToLeft

__all__ = [
    "SpecDocument",
    "ParseError",
    "SpecError",
    "parse_spec",
    "serialize_spec",
    "load_spec",
    "parse_vectors",
    "serialize_vectors",
]

VALIDATION_LEVELS = 8


class ParseError(BratteliError, ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class SpecError(BratteliError, ValueError):
    """The document parses but violates a library invariant."""


Kernel = Union[MarkovKernel, UniformKernel]


@dataclass
class SpecDocument:
    diagram: DiagramSpec
    odometers: dict[str, OdometerSpec] = field(default_factory=dict)
    windows: dict[str, WindowFamily] = field(default_factory=dict)
    orders: dict[str, OrderSpec] = field(default_factory=dict)
    kernels: dict[str, Kernel] = field(default_factory=dict)


# -- lexical helpers ---------------------------------------------------------


def split_top(text: str, sep: str = ",") -> list[str]:
    """Split on ``sep`` outside parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur).strip())
    return [p for p in parts if p]


def _band_text(b: Band) -> str:
    return str(b)


def _band_tokens(text: str) -> tuple[int, tuple[Fraction, ...]]:
    lo, sep, body = text.partition(":")
    if not sep:
        raise ValueError("expected 'lo: c, c, ...'")
    return int(lo), tuple(Fraction(tok) for tok in split_top(body))


def _parse_band(text: str) -> Band:
    return Band(*_band_tokens(text))


_SLOT_RE = re.compile(r"^\s*(-?\d+)\s*:\s*(\d+)\s*$")


def _parse_slot(text: str) -> tuple[int, int]:
    m = _SLOT_RE.match(text)
    if not m:
        raise ValueError(f"expected 'offset:copy', got {text!r}")
    return int(m.group(1)), int(m.group(2))


@dataclass
class _Line:
    number: int
    key: str
    value: str
    value_column: int


@dataclass
class _Section:
    kind: str
    name: Optional[str]
    line: int
    entries: list[_Line] = field(default_factory=list)

    def get(self, key: str) -> Optional[_Line]:
        for e in self.entries:
            if e.key == key:
                return e
        return None

    def require(self, key: str) -> _Line:
        e = self.get(key)
        if e is None:
            raise ParseError(f"[{self.kind}] section needs '{key}'", self.line)
        return e

    def levels(self) -> dict[int, _Line]:
        out = {}
        for e in self.entries:
            if e.key.startswith("level."):
                try:
                    out[int(e.key[len("level."):])] = e
                except ValueError:
                    raise ParseError(f"bad level key {e.key!r}", e.number) from None
        return out


_SECTION_RE = re.compile(r"^\[\s*([a-z]+)(?:\s+([A-Za-z0-9_\-]+))?\s*\]$")
_KINDS = {"diagram", "odometer", "window", "order", "kernel"}
_KEYS = {
    "diagram": {"support", "rules"},
    "odometer": {"offsets", "base"},
    "window": {"lo", "hi"},
    "order": {"kind"},
    "kernel": {"kind", "initial"},
}


def _lex(text: str) -> tuple[list[_Line], list[_Section]]:
    top: list[_Line] = []
    sections: list[_Section] = []
    current: Optional[_Section] = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        indent = len(line) - len(line.lstrip())
        if stripped.startswith("["):
            m = _SECTION_RE.match(stripped)
            if not m:
                raise ParseError("malformed section header", number, indent + 1)
            kind, name = m.group(1), m.group(2)
            if kind not in _KINDS:
                raise ParseError(f"unknown section kind {kind!r}", number, indent + 2)
            if (kind == "diagram") != (name is None):
                raise ParseError(
                    "the diagram section takes no name" if kind == "diagram" else f"[{kind}] needs a name",
                    number,
                    indent + 1,
                )
            current = _Section(kind, name, number)
            sections.append(current)
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ParseError("expected 'key = value'", number, indent + 1)
        key = key.strip()
        if not key:
            raise ParseError("empty key", number, indent + 1)
        value_column = len(key) + indent + 2 + (len(value) - len(value.lstrip())) + 1
        entry = _Line(number, key, value.strip(), value_column)
        if current is None:
            top.append(entry)
        else:
            allowed = _KEYS[current.kind]
            if key not in allowed and not (key.startswith("level.") and current.kind in ("diagram", "order", "kernel")):
                raise ParseError(f"unknown key {key!r} in [{current.kind}]", number, indent + 1)
            if current.get(key) is not None:
                raise ParseError(f"duplicate key {key!r}", number, indent + 1)
            current.entries.append(entry)
    return top, sections


def _value(entry: _Line, convert):
    try:
        return convert(entry.value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ParseError(str(exc), entry.number, entry.value_column) from None


def _parse_support(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise ValueError("support must look like 'lo..hi'")
    return int(lo), int(hi)


def _parse_builtin(entry: _Line) -> DiagramSpec:
    value = entry.value
    if value == "builtin:triadic":
        return TriadicSpec()
    m = re.match(r"^builtin:classc\((.*)\)$", value)
    if m:
        return classc_spec(_value(_Line(entry.number, "", m.group(1), entry.value_column + 15), parse_rule))
    raise ParseError(f"unknown diagram {value!r}", entry.number, entry.value_column)


def _parse_diagram(section: _Section) -> DiagramSpec:
    tail = None
    support_e, rules_e = section.get("support"), section.get("rules")
    if (support_e is None) != (rules_e is None):
        raise ParseError("'support' and 'rules' go together", section.line)
    if support_e is not None:
        lo, hi = _value(support_e, _parse_support)
        rules = _value(rules_e, lambda v: tuple(parse_rule(t) for t in split_top(v)))
        if len(rules) != hi - lo + 1:
            raise ParseError(
                f"support {lo}..{hi} needs {hi - lo + 1} rules, got {len(rules)}",
                rules_e.number,
                rules_e.value_column,
            )
        tail = _semantic(lambda: RuleSpec(lo, rules), rules_e)
    levels = section.levels()
    if not levels:
        if tail is None:
            raise ParseError("[diagram] needs 'support'/'rules' or explicit levels", section.line)
        return tail
    if sorted(levels) != list(range(len(levels))):
        raise ParseError("explicit levels must be numbered 0, 1, 2, ...", section.line)
    bands = []
    for n in range(len(levels)):
        lo, coeffs = _value(levels[n], _band_tokens)
        bands.append(_semantic(lambda: Band(lo, coeffs), levels[n]))
    return _semantic(lambda: ExplicitSpec(tuple(bands), tail), levels[0])


def _semantic(build, entry: _Line):
    try:
        return build()
    except (ValueError, TypeError) as exc:
        raise SpecError(f"line {entry.number}: {exc}") from None


def _parse_order(section: _Section) -> OrderSpec:
    kind = section.require("kind")
    if kind.value == "left-to-right":
        return LeftToRight()
    if kind.value == "right-to-left":
        return RightToLeft()
    if kind.value != "explicit":
        raise ParseError(f"unknown order kind {kind.value!r}", kind.number, kind.value_column)
    levels = section.levels()
    if not levels or sorted(levels) != list(range(len(levels))):
        raise ParseError("explicit order needs levels numbered 0, 1, 2, ...", section.line)
    lists = [_value(levels[n], lambda v: tuple(_parse_slot(t) for t in split_top(v))) for n in range(len(levels))]
    return _semantic(lambda: ExplicitOrder(tuple(lists)), levels[0])


def _parse_kernel_level(text: str) -> dict:
    out = {}
    for item in split_top(text):
        slot, sep, prob = item.partition("=")
        if not sep:
            raise ValueError(f"expected 'offset:copy=p/q', got {item!r}")
        out[_parse_slot(slot)] = Fraction(prob.strip())
    return out


def _parse_kernel(section: _Section) -> Kernel:
    kind = section.require("kind")
    initial_e = section.get("initial")
    initial = _value(initial_e, Fraction) if initial_e else Fraction(1)
    anchor = initial_e or kind
    if kind.value == "uniform":
        return _semantic(lambda: UniformKernel(initial), anchor)
    if kind.value != "explicit":
        raise ParseError(f"unknown kernel kind {kind.value!r}", kind.number, kind.value_column)
    levels = section.levels()
    if not levels or sorted(levels) != list(range(len(levels))):
        raise ParseError("explicit kernel needs levels numbered 0, 1, 2, ...", section.line)
    tables = [_value(levels[n], _parse_kernel_level) for n in range(len(levels))]
    return _semantic(lambda: MarkovKernel(initial, tuple(tuple(t.items()) for t in tables)), anchor)


def _validate(doc: SpecDocument) -> None:
    """Re-check library invariants on the first few levels."""
    spec = doc.diagram
    if isinstance(spec, ExplicitSpec) and spec.tail is None:
        depth = len(spec.levels)
    else:
        depth = VALIDATION_LEVELS
    try:
        for n in range(depth):
            spec.band_at(n)
        for name, order in doc.orders.items():
            for n in range(depth):
                order.slots_at(spec, n)
        for name, kernel in doc.kernels.items():
            if isinstance(kernel, MarkovKernel):
                for n in range(min(depth, len(kernel.levels))):
                    if set(dict(kernel.levels[n])) != set(slots(spec.band_at(n))):
                        raise SpecError(f"kernel {name!r}: level {n} slots do not match the diagram's edges")
    except SpecError:
        raise
    except BratteliError as exc:
        raise SpecError(str(exc)) from None


def parse_spec(text: str) -> SpecDocument:
    top, sections = _lex(text)
    diagram = None
    for entry in top:
        if entry.key != "diagram":
            raise ParseError(f"unknown top-level key {entry.key!r}", entry.number)
        diagram = _parse_builtin(entry)
    named: dict[str, dict] = {"odometer": {}, "window": {}, "order": {}, "kernel": {}}
    for section in sections:
        if section.kind == "diagram":
            if diagram is not None:
                raise ParseError("diagram given twice", section.line)
            diagram = _parse_diagram(section)
            continue
        table = named[section.kind]
        if section.name in table:
            raise ParseError(f"duplicate {section.kind} name {section.name!r}", section.line)
        if section.kind == "odometer":
            offsets = _value(section.require("offsets"), parse_rule)
            base_e = section.get("base")
            base = _value(base_e, int) if base_e else 0
            table[section.name] = OdometerSpec(offsets, base)
        elif section.kind == "window":
            table[section.name] = WindowFamily(
                _value(section.require("lo"), parse_rule), _value(section.require("hi"), parse_rule)
            )
        elif section.kind == "order":
            table[section.name] = _parse_order(section)
        else:
            table[section.name] = _parse_kernel(section)
    if diagram is None:
        raise ParseError("no diagram given", 1)
    doc = SpecDocument(diagram, named["odometer"], named["window"], named["order"], named["kernel"])
    _validate(doc)
    return doc


def load_spec(path) -> SpecDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read())


def _diagram_lines(spec: DiagramSpec) -> list[str]:
    if isinstance(spec, TriadicSpec):
        return ["diagram = builtin:triadic", ""]
    lines = ["[diagram]"]
    explicit: tuple[Band, ...] = ()
    if isinstance(spec, ExplicitSpec):
        explicit, spec = spec.levels, spec.tail
    if isinstance(spec, RuleSpec):
        lines.append(f"support = {spec.lo}..{spec.hi}")
        lines.append("rules = " + ", ".join(r.to_text() for r in spec.rules))
    elif spec is not None:
        raise TypeError(f"cannot serialize {type(spec).__name__}")
    lines += [f"level.{n} = {_band_text(b)}" for n, b in enumerate(explicit)]
    return lines + [""]


def serialize_spec(doc: SpecDocument) -> str:
    lines = _diagram_lines(doc.diagram)
    for name, odo in doc.odometers.items():
        lines += [f"[odometer {name}]", f"offsets = {odo.offsets.to_text()}", f"base = {odo.base}", ""]
    for name, win in doc.windows.items():
        lines += [f"[window {name}]", f"lo = {win.lo.to_text()}", f"hi = {win.hi.to_text()}", ""]
    for name, order in doc.orders.items():
        lines.append(f"[order {name}]")
        if isinstance(order, LeftToRight):
            lines.append("kind = left-to-right")
        elif isinstance(order, RightToLeft):
            lines.append("kind = right-to-left")
        else:
            lines.append("kind = explicit")
            for n, level in enumerate(order.levels):
                lines.append(f"level.{n} = " + ", ".join(f"{k}:{c}" for k, c in level))
        lines.append("")
    for name, kernel in doc.kernels.items():
        lines.append(f"[kernel {name}]")
        if isinstance(kernel, UniformKernel):
            lines += ["kind = uniform", f"initial = {kernel.initial}"]
        else:
            lines += ["kind = explicit", f"initial = {kernel.initial}"]
            for n, level in enumerate(kernel.levels):
                lines.append(f"level.{n} = " + ", ".join(f"{k}:{c}={p}" for (k, c), p in level))
        lines.append("")
    return "\n".join(lines)


# -- measure vector files ----------------------------------------------------


def parse_vectors(text: str) -> list[MeasureVector]:
    """One vector per non-blank line: ``constant p/q`` or ``finite lo: p/q, ...``."""
    out: list[MeasureVector] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kind, _, rest = line.partition(" ")
        try:
            if kind == "constant":
                out.append(ConstantVec(Fraction(rest.strip())))
            elif kind == "finite":
                out.append(FiniteVec.from_band(_parse_band(rest)))
            else:
                raise ParseError(f"unknown vector kind {kind!r}", number, 1)
        except (ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(str(exc), number, len(kind) + 2) from None
    return out


def serialize_vectors(vectors) -> str:
    lines = []
    for v in vectors:
        if isinstance(v, ConstantVec):
            lines.append(f"constant {v.value}")
        else:
            lines.append(f"finite {v.band}")
    return "\n".join(lines) + "\n"

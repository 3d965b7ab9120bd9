"""Event logs as multisets of traces.

A trace is a tuple of action names.  An :class:`EventLog` maps each distinct
trace (a *variant*) to its multiplicity.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from collections.abc import Iterable, Iterator, Mapping
from fractions import Fraction
from typing import Tuple

Trace = Tuple[str, ...]

RESERVED_CHARS = (";", ",", "\n", "\r")


class LogParseError(ValueError):
    """Raised when a log file cannot be parsed."""


class EventLog(Mapping):
    """Immutable multiset of traces.

    Behaves as a read-only mapping ``trace -> multiplicity``.  Iteration order
    is the order in which variants were first seen.
    """

    __slots__ = ("_variants", "_total", "_alphabet")

    def __init__(self, variants: Mapping[Trace, int] | Iterable[tuple[Trace, int]] = ()):
        items = variants.items() if isinstance(variants, Mapping) else variants
        acc: dict[Trace, int] = {}
        for trace, mult in items:
            trace = tuple(trace)
            mult = int(mult)
            if mult < 1:
                raise ValueError(f"multiplicity must be >= 1, got {mult} for {trace!r}")
            for action in trace:
                if not isinstance(action, str) or not action:
                    raise ValueError(f"action names must be non-empty strings: {action!r}")
            acc[trace] = acc.get(trace, 0) + mult
        self._variants = acc
        self._total = sum(acc.values())
        self._alphabet = frozenset(a for t in acc for a in t)

    @classmethod
    def from_traces(cls, traces: Iterable[Iterable[str]]) -> "EventLog":
        """Build a log from an iterable of traces, one entry per case."""
        return cls((tuple(t), 1) for t in traces)

    def __getitem__(self, trace: Trace) -> int:
        return self._variants[tuple(trace)]

    def __iter__(self) -> Iterator[Trace]:
        return iter(self._variants)

    def __len__(self) -> int:
        return len(self._variants)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, EventLog):
            return self._variants == other._variants
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._variants.items()))

    def __repr__(self) -> str:
        return f"EventLog(variants={len(self)}, traces={self._total})"

    @property
    def total(self) -> int:
        """Number of trace instances, i.e. the sum of multiplicities."""
        return self._total

    @property
    def alphabet(self) -> frozenset[str]:
        return self._alphabet

    def multiplicity(self, trace: Iterable[str]) -> int:
        return self._variants.get(tuple(trace), 0)


def parse_log(text: str) -> EventLog:
    """Parse the plain ``<count>;<a>,<b>,...`` format.

    Blank lines and lines starting with ``#`` are skipped.  Repeated variants
    accumulate.
    """
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        count, sep, body = line.partition(";")
        if not sep:
            raise LogParseError(f"line {lineno}: missing ';' separator")
        try:
            mult = int(count.strip())
        except ValueError:
            raise LogParseError(f"line {lineno}: non-integer count {count.strip()!r}") from None
        if mult <= 0:
            raise LogParseError(f"line {lineno}: count must be positive, got {mult}")
        body = body.strip()
        trace = tuple(a.strip() for a in body.split(",")) if body else ()
        if any(not a for a in trace):
            raise LogParseError(f"line {lineno}: empty action name")
        pairs.append((trace, mult))
    return EventLog(pairs)


def serialize_log(log: EventLog) -> str:
    lines = []
    for trace, mult in log.items():
        for action in trace:
            if any(c in action for c in RESERVED_CHARS):
                raise ValueError(f"action {action!r} contains a reserved character")
        lines.append(f"{mult};{','.join(trace)}")
    return "\n".join(lines) + ("\n" if lines else "")


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def parse_xes(text: str) -> EventLog:
    """Read the trace/event/concept:name subset of XES."""
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise LogParseError(f"malformed XML: {exc}") from None
    if _local(root.tag) != "log":
        raise LogParseError(f"root element must be <log>, got <{_local(root.tag)}>")
    traces = []
    for ti, trace_el in enumerate(c for c in root if _local(c.tag) == "trace"):
        actions = []
        for event_el in (c for c in trace_el if _local(c.tag) == "event"):
            name = None
            for attr in event_el:
                if _local(attr.tag) == "string" and attr.get("key") == "concept:name":
                    name = attr.get("value")
                    break
            if not name:
                raise LogParseError(f"trace {ti}: event without concept:name")
            actions.append(name)
        traces.append(tuple(actions))
    return EventLog.from_traces(traces)


def serialize_xes(log: EventLog) -> str:
    root = ET.Element("log", {"xes.version": "1.0"})
    for trace, mult in log.items():
        for _ in range(mult):
            tr = ET.SubElement(root, "trace")
            for action in trace:
                ev = ET.SubElement(tr, "event")
                ET.SubElement(ev, "string", {"key": "concept:name", "value": action})
    return ET.tostring(root, encoding="unicode")


def read_log(path) -> EventLog:
    """Load a log file, choosing the XES reader for ``.xes`` files."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if str(path).lower().endswith(".xes"):
        return parse_xes(text)
    return parse_log(text)


def empirical_distribution(log: EventLog) -> dict[Trace, Fraction]:
    if log.total == 0:
        raise ValueError("empirical distribution of an empty log is undefined")
    return {t: Fraction(m, log.total) for t, m in log.items()}


def filter_by_frequency(log: EventLog, f: float) -> EventLog:
    """Keep the most frequent variants covering at least a fraction ``f`` of the log.

    Variants are ranked by multiplicity (descending, ties lexicographic) and the
    shortest prefix of that ranking whose share of trace instances reaches
    ``f`` is kept.  ``f == 0`` returns the log unchanged.
    """
    if log.total == 0:
        raise ValueError("cannot filter an empty log")
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"f must lie in [0, 1], got {f}")
    if f == 0.0:
        return log
    ranked = sorted(log.items(), key=lambda kv: (-kv[1], kv[0]))
    kept = []
    covered = 0
    for trace, mult in ranked:
        kept.append((trace, mult))
        covered += mult
        # relative slack guards against f given as a rounded ratio
        if covered >= f * log.total * (1 - 1e-12):
            break
    return EventLog(kept)

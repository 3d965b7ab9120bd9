"""Input checks shared by the estimators and the command line."""

from __future__ import annotations

from collections.abc import Iterable, Mapping

from .eventlog import EventLog


def check_log(X, *, allow_empty: bool = False) -> EventLog:
    """Coerce ``X`` to an :class:`EventLog`.

    Accepts an ``EventLog``, a mapping ``trace -> multiplicity`` or an
    iterable of traces (each a sequence of action names).  A bare string is
    rejected because it is ambiguous between one trace and a sequence of
    one-letter traces.
    """
    if isinstance(X, EventLog):
        log = X
    elif isinstance(X, Mapping):
        log = EventLog(X)
    elif isinstance(X, (str, bytes)):
        raise TypeError("expected a collection of traces, got a string")
    elif isinstance(X, Iterable):
        traces = []
        for t in X:
            if isinstance(t, (str, bytes)):
                raise TypeError(f"each trace must be a sequence of actions, got string {t!r}")
            traces.append(tuple(t))
        log = EventLog.from_traces(traces)
    else:
        raise TypeError(f"cannot interpret {type(X).__name__} as an event log")
    if not allow_empty and log.total == 0:
        raise ValueError("event log is empty")
    return log


def check_traces(X) -> list[tuple[str, ...]]:
    """Traces to score: an iterable of action sequences, or the variants of a log."""
    if isinstance(X, EventLog):
        return list(X)
    if isinstance(X, (str, bytes)):
        raise TypeError("expected a collection of traces, got a string")
    out = []
    for t in X:
        if isinstance(t, (str, bytes)):
            raise TypeError(f"each trace must be a sequence of actions, got string {t!r}")
        out.append(tuple(t))
    return out

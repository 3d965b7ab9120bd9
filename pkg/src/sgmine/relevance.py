"""Entropic relevance of a stochastic model to an event log.

Each trace of the log is encoded either with the model, costing its
surprisal ``-log2 P(t)``, or, when the model gives it probability zero, with
a uniform background code over the log's actions plus an end symbol.  One
selector bit-rate term, the binary entropy of the covered share of the log,
pays for telling the two cases apart.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .automata import SDFA, trace_probability
from .eventlog import EventLog, Trace
from .sdag import SDAG, is_deterministic, sdag_trace_probability


@dataclass(frozen=True)
class RelevanceReport:
    bits_per_trace: float
    coverage: float
    covered_bits: float
    background_bits: float
    selector_bits: float

    def to_dict(self) -> dict:
        return asdict(self)


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def background_bits(trace: Trace, alphabet_size: int) -> float:
    """Cost of ``trace`` under the uniform code over ``alphabet_size`` actions plus end."""
    if alphabet_size < 1:
        raise ValueError("alphabet_size must be at least 1")
    return (len(trace) + 1) * math.log2(alphabet_size + 1)


def model_probability(model):
    """Return a ``trace -> probability`` function for an SDFA or deterministic SDAG."""
    if isinstance(model, SDFA):
        return lambda t: trace_probability(model, t)
    if isinstance(model, SDAG):
        if not is_deterministic(model):
            raise ValueError("entropic relevance needs a deterministic SDAG")
        return lambda t: sdag_trace_probability(model, t)
    raise TypeError(f"unsupported model type {type(model).__name__}")


def entropic_relevance(log: EventLog, model) -> RelevanceReport:
    if log.total == 0:
        raise ValueError("entropic relevance of an empty log is undefined")
    prob = model_probability(model)
    alphabet_size = len(log.alphabet)
    covered = []
    uncovered = []
    n_covered = 0
    for trace, mult in log.items():
        p = prob(trace)
        if p > 0.0:
            n_covered += mult
            covered.append(mult * -math.log2(p))
        else:
            # a log of empty traces only has the end symbol to code, at zero bits
            bits = background_bits(trace, alphabet_size) if alphabet_size else 0.0
            uncovered.append(mult * bits)
    rho = n_covered / log.total
    selector = binary_entropy(rho)
    covered_bits = math.fsum(covered)
    bg_bits = math.fsum(uncovered)
    return RelevanceReport(
        bits_per_trace=selector + (covered_bits + bg_bits) / log.total,
        coverage=rho,
        covered_bits=covered_bits,
        background_bits=bg_bits,
        selector_bits=selector,
    )

"""Stochastic process discovery with ALERGIA, SDAGs and Pareto search."""

from .alergia import AlergiaParams, run_alergia
from .automata import SDFA, build_pat, language_mass, termination_probability, trace_probability
from .estimators import AlergiaMiner, ParetoSearch
from .eventlog import EventLog, empirical_distribution, filter_by_frequency, parse_log, parse_xes, read_log
from .gaspd import SearchConfig, pareto_frontier, run_search
from .relevance import RelevanceReport, entropic_relevance
from .sdag import (
    SDAG,
    annotate_frequencies,
    is_deterministic,
    model_size,
    probabilities_from_frequencies,
    reduce_to_dfg,
    sdag_of_sdfa,
    sdag_trace_probability,
    sfa_of_sdag,
)

__all__ = [
    "SDAG",
    "SDFA",
    "AlergiaMiner",
    "AlergiaParams",
    "EventLog",
    "ParetoSearch",
    "RelevanceReport",
    "SearchConfig",
    "annotate_frequencies",
    "build_pat",
    "empirical_distribution",
    "entropic_relevance",
    "filter_by_frequency",
    "is_deterministic",
    "language_mass",
    "model_size",
    "pareto_frontier",
    "parse_log",
    "parse_xes",
    "probabilities_from_frequencies",
    "read_log",
    "reduce_to_dfg",
    "run_alergia",
    "run_search",
    "sdag_of_sdfa",
    "sdag_trace_probability",
    "sfa_of_sdag",
    "termination_probability",
    "trace_probability",
]

__version__ = "0.1.0"

"""scikit-learn style front ends for discovery and parameter search."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .alergia import AlergiaParams, run_alergia
from .automata import trace_probability
from .gaspd import SearchConfig, run_search
from .relevance import entropic_relevance
from .sdag import model_size, reduce_to_dfg, sdag_of_sdfa
from .validation import check_log, check_traces


class AlergiaMiner(BaseEstimator):
    """Learn an SDFA from an event log with ALERGIA.

    Parameters
    ----------
    omega : float, default=1.0
        Multiplier of the Hoeffding bound; larger values merge more states.
    t : float, default=1.0
        States reached fewer than ``t`` times are left unmerged.
    f : float, default=1.0
        Share of trace instances kept by the frequency filter.

    Attributes
    ----------
    sdfa_ : SDFA
    sdag_ : SDAG
        The sound, deterministic SDAG of ``sdfa_``.
    size_ : int
        Nodes plus arcs of ``sdag_``.
    """

    def __init__(self, omega=1.0, t=1.0, f=1.0):
        self.omega = omega
        self.t = t
        self.f = f

    def fit(self, X, y=None):
        log = check_log(X)
        params = AlergiaParams(float(self.omega), float(self.t), float(self.f))
        self.sdfa_ = run_alergia(log, params)
        self.sdag_ = sdag_of_sdfa(self.sdfa_)
        self.size_ = model_size(self.sdag_)
        self.n_traces_ = log.total
        return self

    def predict_proba(self, X):
        """Probability of each trace under the learned stochastic language."""
        check_is_fitted(self, "sdfa_")
        return np.array([trace_probability(self.sdfa_, t) for t in check_traces(X)])

    def relevance(self, X):
        check_is_fitted(self, "sdfa_")
        return entropic_relevance(check_log(X), self.sdfa_)

    def score(self, X, y=None):
        """Negative entropic relevance in bits per trace, so that higher is better."""
        return -self.relevance(X).bits_per_trace

    def to_dfg(self):
        check_is_fitted(self, "sdag_")
        return reduce_to_dfg(self.sdag_)


class ParetoSearch(BaseEstimator):
    """Genetic search for ALERGIA parameters trading model size against relevance.

    After ``fit``, ``frontier_`` holds the non-dominated individuals and
    ``history_`` one record per generation.
    """

    def __init__(
        self,
        parents=4,
        population_size=50,
        generations=50,
        omega_max=15.0,
        t_max=None,
        mutation_scale=0.1,
        random_state=0,
        lineage=False,
        n_jobs=1,
    ):
        self.parents = parents
        self.population_size = population_size
        self.generations = generations
        self.omega_max = omega_max
        self.t_max = t_max
        self.mutation_scale = mutation_scale
        self.random_state = random_state
        self.lineage = lineage
        self.n_jobs = n_jobs

    def _config(self) -> SearchConfig:
        return SearchConfig(
            parents=int(self.parents),
            population_size=int(self.population_size),
            generations=int(self.generations),
            omega_max=float(self.omega_max),
            t_max=None if self.t_max is None else float(self.t_max),
            mutation_scale=float(self.mutation_scale),
            seed=int(self.random_state),
            lineage=bool(self.lineage),
            n_jobs=int(self.n_jobs),
        )

    def fit(self, X, y=None):
        log = check_log(X)
        self.frontier_, self.history_ = run_search(log, self._config())
        self.log_ = log
        return self

    def frontier_models(self):
        """Fitted :class:`AlergiaMiner` for each frontier point, smallest first."""
        check_is_fitted(self, "frontier_")
        out = []
        for ind in sorted(self.frontier_, key=lambda i: (i.size, i.relevance)):
            p = ind.params
            out.append(AlergiaMiner(p.omega, p.t, p.f).fit(self.log_))
        return out

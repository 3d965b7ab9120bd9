"""Multi-objective genetic search over ALERGIA parameters.

Each individual is a parameter triple ``(omega, t, f)``.  It is scored by
the size of the SDAG of the learned SDFA and by that SDAG's entropic
relevance to the log; both are minimised.  Individuals that ever sat on a
generation's Pareto frontier are archived for good ("ever-good") and are the
only ones bred from.
"""

from __future__ import annotations

import csv
import dataclasses
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .alergia import AlergiaParams, run_alergia
from .automata import build_pat
from .eventlog import EventLog
from .relevance import entropic_relevance
from .sdag import model_size, sdag_of_sdfa

logger = logging.getLogger(__name__)

OMEGA_MIN = 1e-9


@dataclass
class Individual:
    params: AlergiaParams
    size: int | None = None
    relevance: float | None = None
    ever_good: bool = False

    @property
    def evaluated(self) -> bool:
        return self.size is not None

    def dominates(self, other: "Individual") -> bool:
        return (
            self.size <= other.size
            and self.relevance <= other.relevance
            and (self.size < other.size or self.relevance < other.relevance)
        )


@dataclass(frozen=True)
class Bounds:
    omega_max: float = 15.0
    t_max: float = 1.0
    omega_min: float = OMEGA_MIN

    def clamp(self, omega: float, t: float, f: float) -> AlergiaParams:
        return AlergiaParams(
            min(max(omega, self.omega_min), self.omega_max),
            min(max(t, 0.0), self.t_max),
            min(max(f, 0.0), 1.0),
        )


@dataclass(frozen=True)
class SearchConfig:
    """Search settings.  ``parents`` has no default: pick it per problem."""

    parents: int
    population_size: int = 50
    generations: int = 50
    omega_max: float = 15.0
    t_max: float | None = None
    mutation_scale: float = 0.1
    seed: int = 0
    lineage: bool = False
    n_jobs: int = 1

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be at least 2")
        if self.parents < 2:
            raise ValueError("parents must be at least 2")
        if self.generations < 0:
            raise ValueError("generations must be non-negative")
        if not self.omega_max >= OMEGA_MIN:
            raise ValueError("omega_max must be positive")
        if self.t_max is not None and self.t_max < 0:
            raise ValueError("t_max must be non-negative")
        if self.mutation_scale < 0:
            raise ValueError("mutation_scale must be non-negative")

    def bounds_for(self, log: EventLog) -> Bounds:
        t_max = self.t_max if self.t_max is not None else float(build_pat(log).max_branch_frequency())
        return Bounds(self.omega_max, t_max)


@dataclass
class GenerationRecord:
    generation: int
    population: list[Individual]
    frontier: list[Individual]
    new_good: int = 0
    frac_good_from_good: float | None = None
    frac_good_from_bad: float | None = None


@dataclass
class SearchState:
    generation: int
    population: list[Individual]
    archive: dict[AlergiaParams, Individual] = field(default_factory=dict)
    bad: dict[AlergiaParams, Individual] = field(default_factory=dict)


def init_population(n: int, bounds: Bounds, rng: np.random.Generator) -> list[Individual]:
    """``n`` random triples within ``bounds``; duplicates are redrawn up to 100 times."""
    seen = set()
    out = []
    for _ in range(n):
        for _attempt in range(100):
            p = AlergiaParams(
                float(rng.uniform(bounds.omega_min, bounds.omega_max)),
                float(rng.uniform(0.0, bounds.t_max)),
                float(rng.uniform(0.0, 1.0)),
            )
            if p not in seen:
                break
        seen.add(p)
        out.append(Individual(p))
    return out


def crossover(p1: AlergiaParams, p2: AlergiaParams) -> list[AlergiaParams]:
    """Single-point offspring at positions one to three, then the two double-point ones."""
    (w1, t1, f1), (w2, t2, f2) = (p1.omega, p1.t, p1.f), (p2.omega, p2.t, p2.f)
    return [
        AlergiaParams(w1, t2, f2),
        AlergiaParams(w2, t1, f1),
        AlergiaParams(w1, t1, f2),
        AlergiaParams(w2, t2, f1),
        AlergiaParams(w1, t1, f1),
        AlergiaParams(w2, t2, f2),
        AlergiaParams(w1, t2, f1),
        AlergiaParams(w2, t1, f2),
    ]


def mutate(p: AlergiaParams, bounds: Bounds, rng: np.random.Generator, scale: float = 0.1) -> AlergiaParams:
    """Add a uniform delta of at most ``scale`` times each parameter's range, then clamp."""
    spans = (bounds.omega_max - bounds.omega_min, bounds.t_max, 1.0)
    deltas = [float(rng.uniform(-scale * s, scale * s)) if scale * s > 0 else 0.0 for s in spans]
    return bounds.clamp(p.omega + deltas[0], p.t + deltas[1], p.f + deltas[2])


def pareto_frontier(points: list[Individual]) -> list[Individual]:
    """Non-dominated individuals in input order; of equal points only the first is kept."""
    order = sorted(range(len(points)), key=lambda i: (points[i].size, points[i].relevance, i))
    keep = set()
    best = float("inf")
    for i in order:
        if points[i].relevance < best:
            best = points[i].relevance
            keep.add(i)
    return [points[i] for i in range(len(points)) if i in keep]


def evaluate(params: AlergiaParams, log: EventLog) -> tuple[int, float]:
    """Size and entropic relevance of the SDAG learned with ``params``."""
    graph = sdag_of_sdfa(run_alergia(log, params))
    return model_size(graph), entropic_relevance(log, graph).bits_per_trace


def _evaluate_safe(args):
    params, log = args
    try:
        return evaluate(params, log)
    except (ValueError, ArithmeticError) as exc:
        logger.warning("evaluation of %s failed: %s", params, exc)
        return None


class Evaluator:
    """Memoised evaluation against one log, optionally spread over worker processes."""

    def __init__(self, log: EventLog, n_jobs: int = 1):
        self.log = log
        self.memo: dict[AlergiaParams, tuple[int, float] | None] = {}
        self.n_jobs = max(1, int(n_jobs))
        self._pool = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def close(self):
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None

    def evaluate_many(self, params: list[AlergiaParams]) -> list[tuple[int, float] | None]:
        todo = list(dict.fromkeys(p for p in params if p not in self.memo))
        if self.n_jobs > 1 and len(todo) > 1:
            if self._pool is None:
                self._pool = ProcessPoolExecutor(self.n_jobs)
            results = self._pool.map(_evaluate_safe, [(p, self.log) for p in todo], chunksize=4)
        else:
            results = map(_evaluate_safe, [(p, self.log) for p in todo])
        for p, r in zip(todo, results):
            self.memo[p] = r
        return [self.memo[p] for p in params]

    def fill(self, individuals: list[Individual]) -> list[Individual]:
        """Evaluate ``individuals`` in place and return the ones that succeeded."""
        results = self.evaluate_many([ind.params for ind in individuals])
        ok = []
        for ind, r in zip(individuals, results):
            if r is not None:
                ind.size, ind.relevance = r
                ok.append(ind)
        return ok


def _breed(parents: list[AlergiaParams], bounds, rng, scale) -> list[AlergiaParams]:
    pairs = list(combinations(parents, 2)) or [(parents[0], parents[0])]
    kids = [c for a, b in pairs for c in crossover(a, b)]
    return kids + [mutate(c, bounds, rng, scale) for c in kids]


def _pick(pool: list[Individual], k: int, rng) -> list[AlergiaParams]:
    if not pool:
        return []
    idx = rng.choice(len(pool), size=min(k, len(pool)), replace=False)
    return [pool[i].params for i in sorted(idx)]


def _snapshot(inds: list[Individual]) -> list[Individual]:
    return [dataclasses.replace(i) for i in inds]


def select(state: SearchState) -> list[Individual]:
    """Frontier of the current population; its members become ever-good."""
    front = pareto_frontier(state.population)
    for ind in front:
        ind.ever_good = True
        state.archive.setdefault(ind.params, ind)
        state.bad.pop(ind.params, None)
    return front


def step_generation(
    state: SearchState,
    evaluator: Evaluator,
    config: SearchConfig,
    bounds: Bounds,
    rng: np.random.Generator,
    lineage_rng: np.random.Generator | None = None,
) -> tuple[SearchState, GenerationRecord]:
    front = select(state)
    parents = _pick(front, config.parents, rng)
    if len(parents) < 2:
        others = [i for i in state.archive.values() if i.params not in parents]
        parents += _pick(others, config.parents - len(parents), rng)
    kids = evaluator.fill([Individual(p) for p in _breed(parents, bounds, rng, config.mutation_scale)])

    fresh: dict[AlergiaParams, Individual] = {}
    for ind in kids:
        if ind.params not in state.archive:
            fresh.setdefault(ind.params, ind)
    pool = list(state.archive.values()) + list(fresh.values())
    on_front = {id(i) for i in pareto_frontier(pool)}
    admitted = [i for i in fresh.values() if id(i) in on_front]
    for p, ind in fresh.items():
        if id(ind) not in on_front:
            state.bad.setdefault(p, ind)

    record = GenerationRecord(
        state.generation, _snapshot(state.population), _snapshot(front), new_good=len(admitted)
    )
    if lineage_rng is not None:
        bad_parents = _pick(list(state.bad.values()), config.parents, lineage_rng)
        bad_kids = []
        if bad_parents:
            bred = _breed(bad_parents, bounds, lineage_rng, config.mutation_scale)
            bad_kids = evaluator.fill([Individual(p) for p in bred])
        everyone: dict[AlergiaParams, Individual] = {}
        for ind in pool + bad_kids:
            everyone.setdefault(ind.params, ind)
        good = {i.params for i in pareto_frontier(list(everyone.values()))}
        record.frac_good_from_good = _fraction(kids, good)
        record.frac_good_from_bad = _fraction(bad_kids, good)

    population = list(state.archive.values()) + admitted
    nxt = SearchState(state.generation + 1, population, state.archive, state.bad)
    return nxt, record


def _fraction(kids: list[Individual], good: set) -> float:
    if not kids:
        return 0.0
    return sum(k.params in good for k in kids) / len(kids)


def run_search(log: EventLog, config: SearchConfig) -> tuple[list[Individual], list[GenerationRecord]]:
    """Run the search and return the final frontier and the per-generation history."""
    if log.total == 0:
        raise ValueError("cannot search on an empty log")
    bounds = config.bounds_for(log)
    seeds = np.random.SeedSequence(config.seed).spawn(2)
    rng = np.random.default_rng(seeds[0])
    lineage_rng = np.random.default_rng(seeds[1]) if config.lineage else None
    history = []
    with Evaluator(log, config.n_jobs) as evaluator:
        population = evaluator.fill(init_population(config.population_size, bounds, rng))
        state = SearchState(0, population)
        for ind in population:
            state.bad[ind.params] = ind
        for _ in range(config.generations):
            state, record = step_generation(state, evaluator, config, bounds, rng, lineage_rng)
            history.append(record)
        front = select(state)
        history.append(
            GenerationRecord(state.generation, _snapshot(state.population), _snapshot(front))
        )
    return _snapshot(front), history


def default_jobs() -> int:
    env = os.environ.get("SGMINE_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


_FMT = "%.6f"


def _row(generation, ind: Individual):
    return [generation, _FMT % ind.params.omega, _FMT % ind.params.t, _FMT % ind.params.f,
            ind.size, _FMT % ind.relevance, int(ind.ever_good)]


HEADER = ["generation", "omega", "t", "f", "size", "relevance", "ever_good"]


def write_frontier_csv(frontier: list[Individual], generation: int, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(HEADER)
        for ind in sorted(frontier, key=lambda i: (i.size, i.relevance)):
            w.writerow(_row(generation, ind))


def write_history_csv(history: list[GenerationRecord], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(HEADER)
        for rec in history:
            for ind in rec.population:
                w.writerow(_row(rec.generation, ind))


def write_lineage_csv(history: list[GenerationRecord], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["generation", "frac_good_from_good", "frac_good_from_bad"])
        for rec in history:
            if rec.frac_good_from_good is None:
                continue
            w.writerow([rec.generation, _FMT % rec.frac_good_from_good, _FMT % rec.frac_good_from_bad])

"""Stochastic directed action graphs (SDAGs) and directly-follows graphs.

An SDAG has action-labelled nodes plus a distinguished input and output
node.  Arcs carry flow probabilities, and the outgoing probabilities of every
node other than the output sum to one.  A DFG is an SDAG with one node per
action.
"""

from __future__ import annotations

import math
from collections import defaultdict, deque
from collections.abc import Hashable, Iterable, Mapping
from dataclasses import dataclass, field

import numpy as np

from .automata import SDFA, termination_probability
from .linalg import solve

INPUT = "i"
OUTPUT = "o"
FLOW_TOL = 1e-9


class ExecutionLimitError(RuntimeError):
    """Too many executions confirm a trace of a non-deterministic SDAG."""


@dataclass(frozen=True)
class SDAG:
    """Nodes ``labels`` (id -> action) and arcs ``(src, dst) -> probability``."""

    labels: Mapping[Hashable, str]
    arcs: Mapping[tuple[Hashable, Hashable], float]
    input: Hashable = INPUT
    output: Hashable = OUTPUT
    _out: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.input == self.output:
            raise ValueError("input and output must be distinct")
        if self.input in self.labels or self.output in self.labels:
            raise ValueError("input/output nodes cannot carry action labels")
        sources = set(self.labels) | {self.input}
        targets = set(self.labels) | {self.output}
        out: dict = {n: {} for n in sources}
        for (src, dst), prob in self.arcs.items():
            if src not in sources:
                raise ValueError(f"arc {src}->{dst}: bad source")
            if dst not in targets:
                raise ValueError(f"arc {src}->{dst}: bad target")
            if not 0.0 <= prob <= 1.0 + FLOW_TOL:
                raise ValueError(f"arc {src}->{dst}: probability {prob} out of range")
            out[src][dst] = prob
        for node, arcs in out.items():
            total = math.fsum(arcs.values())
            if abs(total - 1.0) > FLOW_TOL:
                raise ValueError(f"outgoing probabilities of node {node!r} sum to {total}")
        object.__setattr__(self, "_out", out)

    @property
    def nodes(self) -> list:
        return sorted(self.labels, key=_sort_key)

    def outgoing(self, node) -> dict:
        """Outgoing arcs of ``node`` as ``{target: probability}``."""
        return self._out.get(node, {})

    def alphabet(self) -> frozenset[str]:
        return frozenset(self.labels.values())


def _sort_key(x):
    return (type(x).__name__, x)


@dataclass(frozen=True)
class AnnotatedSDAG:
    base: SDAG
    arc_freq: Mapping[tuple, float]
    node_freq: Mapping[Hashable, float]
    cases: float


def model_size(graph: SDAG) -> int:
    """Number of nodes (input and output included) plus number of arcs."""
    return len(graph.labels) + 2 + len(graph.arcs)


def sdag_of_sdfa(sdfa: SDFA) -> SDAG:
    """One node per SDFA transition; arcs chain transitions through shared states."""
    trans = sorted(
        (src, action, dst)
        for (src, action), (dst, _) in sdfa.transitions.items()
    )
    node_of = {tr: i for i, tr in enumerate(trans)}
    labels = {i: tr[1] for tr, i in node_of.items()}
    by_source = defaultdict(list)
    for tr in trans:
        by_source[tr[0]].append(tr)
    arcs = {}

    def link(from_node, state):
        for tr in by_source[state]:
            arcs[(from_node, node_of[tr])] = sdfa.transitions[(tr[0], tr[1])][1]
        term = termination_probability(sdfa, state)
        if term > 0.0:
            arcs[(from_node, OUTPUT)] = term

    link(INPUT, sdfa.initial)
    for tr in trans:
        link(node_of[tr], tr[2])
    return SDAG(labels, arcs)


def is_deterministic(graph: SDAG) -> bool:
    for targets in graph._out.values():
        seen = set()
        for dst in targets:
            if dst == graph.output:
                continue
            label = graph.labels[dst]
            if label in seen:
                return False
            seen.add(label)
    return True


def is_sound(graph: SDAG) -> bool:
    """Every action node lies on a walk from the input to the output."""
    forward = _reach(graph.input, graph._out)
    backward_adj: dict = defaultdict(dict)
    for (src, dst) in graph.arcs:
        backward_adj[dst][src] = None
    backward = _reach(graph.output, backward_adj)
    return all(n in forward and n in backward for n in graph.labels)


def _reach(start, adj) -> set:
    seen = {start}
    queue = deque([start])
    while queue:
        n = queue.popleft()
        for m in adj.get(n, ()):
            if m not in seen:
                seen.add(m)
                queue.append(m)
    return seen


def sfa_of_sdag(graph: SDAG) -> SDFA:
    """SDFA over states ``{input} | nodes``; the input becomes state 0."""
    if not is_deterministic(graph):
        raise ValueError("SDAG is not deterministic; its SFA is not an SDFA")
    order = [graph.input] + graph.nodes
    ids = {n: i for i, n in enumerate(order)}
    transitions = {}
    for src in order:
        for dst, prob in graph.outgoing(src).items():
            if dst == graph.output:
                continue
            transitions[(ids[src], graph.labels[dst])] = (ids[dst], prob)
    return SDFA(tuple(range(len(order))), 0, transitions)


def sdag_trace_probability(graph: SDAG, trace: Iterable[str], max_execs: int = 1_000_000) -> float:
    """Sum of the probabilities of all executions confirming ``trace``.

    Runs a forward pass over positions of the trace, carrying per node both
    the accumulated probability and the number of partial executions.
    """
    current = {graph.input: (1.0, 1)}
    for action in trace:
        nxt: dict = {}
        for node, (prob, count) in current.items():
            for dst, q in graph.outgoing(node).items():
                if dst == graph.output or graph.labels[dst] != action:
                    continue
                p, c = nxt.get(dst, (0.0, 0))
                nxt[dst] = (p + prob * q, c + count)
        if not nxt:
            return 0.0
        if sum(c for _, c in nxt.values()) > max_execs:
            raise ExecutionLimitError(f"more than {max_execs} executions confirm the trace prefix")
        current = nxt
    total = 0.0
    for node, (prob, _) in current.items():
        q = graph.outgoing(node).get(graph.output)
        if q is not None:
            total += prob * q
    return total


class _Partition:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if _sort_key(rb) < _sort_key(ra):
                ra, rb = rb, ra
            self.parent[rb] = ra


def reduce_to_dfg(graph: SDAG, merge_order: Iterable[tuple] | None = None, rng=None) -> SDAG:
    """Merge same-labelled nodes until every action has a single node.

    Pairs in ``merge_order`` are merged first (pairs with different labels are
    rejected); otherwise, or afterwards, the remaining same-label pairs are
    merged in sorted order, or in an order shuffled by ``rng``.  The fresh
    node of each class keeps the smallest member id.  Its outgoing arcs pool
    the members' outgoing probabilities and are normalised by their total;
    incoming arcs from a common source add up.
    """
    part = _Partition(list(graph.labels))
    if merge_order is not None:
        for a, b in merge_order:
            if graph.labels[a] != graph.labels[b]:
                raise ValueError(f"cannot merge {a!r} and {b!r}: labels differ")
            part.union(a, b)
    by_label = defaultdict(list)
    for n in graph.nodes:
        by_label[graph.labels[n]].append(n)
    pairs = [(grp[0], other) for grp in by_label.values() for other in grp[1:]]
    if rng is not None:
        pairs = [pairs[i] for i in rng.permutation(len(pairs))]
    for a, b in pairs:
        part.union(a, b)

    cls = {n: part.find(n) for n in graph.labels}
    cls[graph.input] = graph.input
    cls[graph.output] = graph.output
    pooled: dict = defaultdict(lambda: defaultdict(list))
    for (src, dst), prob in graph.arcs.items():
        pooled[cls[src]][cls[dst]].append(prob)

    arcs = {}
    for src in sorted(pooled, key=_sort_key):
        sums = {dst: math.fsum(ps) for dst, ps in pooled[src].items()}
        total = math.fsum(sums.values())
        for dst in sorted(sums, key=_sort_key):
            arcs[(src, dst)] = sums[dst] / total
    labels = {n: graph.labels[n] for n in graph.labels if cls[n] == n}
    return SDAG(labels, arcs, graph.input, graph.output)


def canonical_form(graph: SDAG, ndigits: int | None = None) -> dict:
    """Label-keyed arc map of a graph with unique labels, for comparisons."""
    names = {graph.input: "<i>", graph.output: "<o>"}
    if len(set(graph.labels.values())) != len(graph.labels):
        raise ValueError("canonical form requires one node per label")
    names.update(graph.labels)
    out = {}
    for (src, dst), prob in graph.arcs.items():
        out[(names[src], names[dst])] = prob if ndigits is None else round(prob, ndigits)
    return out


def _arc_order(graph: SDAG) -> list[tuple]:
    return sorted(graph.arcs, key=lambda a: (_sort_key(a[0]), _sort_key(a[1])))


def annotate_frequencies(graph: SDAG, cases: float) -> AnnotatedSDAG:
    """Derive arc and node frequencies for ``cases`` flowing through ``graph``.

    One unknown per arc.  Each arc ``s -> v`` contributes the equation
    ``f(s, v) = q(s, v) * inflow(s)`` where the inflow of the input node is
    ``cases``.  This square system fixes all frequencies; the conservation
    equations then hold as consequences (see :func:`frequency_residuals`).
    """
    if not cases > 0:
        raise ValueError("cases must be positive")
    arcs = _arc_order(graph)
    index = {a: k for k, a in enumerate(arcs)}
    incoming = defaultdict(list)
    for a in arcs:
        incoming[a[1]].append(index[a])
    m = len(arcs)
    mat = np.eye(m)
    rhs = np.zeros(m)
    for k, (src, dst) in enumerate(arcs):
        q = graph.arcs[(src, dst)]
        if src == graph.input:
            rhs[k] = q * cases
        else:
            for j in incoming[src]:
                mat[k, j] -= q
    freqs = solve(mat, rhs) if m else np.zeros(0)
    arc_freq = {a: float(freqs[index[a]]) for a in arcs}
    node_freq = {graph.input: float(cases)}
    for n in list(graph.labels) + [graph.output]:
        node_freq[n] = math.fsum(arc_freq[arcs[j]] for j in incoming[n])
    return AnnotatedSDAG(graph, arc_freq, node_freq, float(cases))


def frequency_residuals(ann: AnnotatedSDAG) -> dict[str, float]:
    """Largest absolute residual of each equation family."""
    g = ann.base
    inflow = defaultdict(list)
    outflow = defaultdict(list)
    for (src, dst), f in ann.arc_freq.items():
        outflow[src].append(f)
        inflow[dst].append(f)
    conservation = max(
        (abs(math.fsum(inflow[n]) - math.fsum(outflow[n])) for n in g.labels), default=0.0
    )
    boundary = max(
        abs(math.fsum(outflow[g.input]) - ann.cases),
        abs(math.fsum(inflow[g.output]) - ann.cases),
    )
    arc = 0.0
    for (src, dst), f in ann.arc_freq.items():
        base = ann.cases if src == g.input else math.fsum(inflow[src])
        arc = max(arc, abs(f - g.arcs[(src, dst)] * base))
    return {"conservation": conservation, "boundary": boundary, "arc": arc}


def probabilities_from_frequencies(
    labels: Mapping[Hashable, str],
    arc_freq: Mapping[tuple, float],
    cases: float | None = None,
    input: Hashable = INPUT,
    output: Hashable = OUTPUT,
) -> SDAG:
    """Flow probabilities as each arc's share of its source's outgoing frequency."""
    totals: dict = defaultdict(float)
    for (src, _), f in arc_freq.items():
        if f < 0:
            raise ValueError(f"negative frequency on arc from {src!r}")
        totals[src] += f
    for node in list(labels) + [input]:
        if totals.get(node, 0.0) <= 0.0:
            raise ValueError(f"node {node!r} has no outgoing frequency")
    if cases is not None and abs(totals[input] - cases) > 1e-6 * max(cases, 1.0):
        raise ValueError(f"input outflow {totals[input]} differs from case count {cases}")
    arcs = {a: f / totals[a[0]] for a, f in arc_freq.items()}
    return SDAG(dict(labels), arcs, input, output)

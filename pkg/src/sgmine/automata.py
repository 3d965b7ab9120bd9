"""Stochastic deterministic finite automata and frequency prefix trees."""

from __future__ import annotations

import math
from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from .eventlog import EventLog, Trace

PROB_TOL = 1e-9


@dataclass(frozen=True)
class SDFA:
    """Stochastic deterministic finite automaton.

    ``transitions`` maps ``(state, action)`` to ``(target, probability)``.
    The termination probability of a state is whatever outgoing mass is
    missing from 1.
    """

    states: tuple[int, ...]
    initial: int
    transitions: Mapping[tuple[int, str], tuple[int, float]]
    alphabet: frozenset[str] = field(default=frozenset())
    _out: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        states = set(self.states)
        if self.initial not in states:
            raise ValueError(f"initial state {self.initial} is not a state")
        out: dict[int, dict[str, tuple[int, float]]] = {s: {} for s in self.states}
        for (src, action), (dst, prob) in self.transitions.items():
            if src not in states or dst not in states:
                raise ValueError(f"transition {src} -{action}-> {dst} uses an unknown state")
            if not 0.0 <= prob <= 1.0 + PROB_TOL:
                raise ValueError(f"probability {prob} out of range on {src} -{action}->")
            out[src][action] = (dst, prob)
        for s, edges in out.items():
            total = math.fsum(p for _, p in edges.values())
            if total > 1.0 + PROB_TOL:
                raise ValueError(f"outgoing probabilities of state {s} sum to {total} > 1")
        alphabet = self.alphabet | {a for _, a in self.transitions}
        object.__setattr__(self, "alphabet", frozenset(alphabet))
        object.__setattr__(self, "_out", out)

    def outgoing(self, state: int) -> dict[str, tuple[int, float]]:
        """Outgoing transitions of ``state`` as ``{action: (target, prob)}``."""
        return self._out[state]

    def __len__(self) -> int:
        return len(self.states)


def termination_probability(sdfa: SDFA, state: int) -> float:
    if state not in sdfa._out:
        raise ValueError(f"unknown state {state}")
    rest = 1.0 - math.fsum(p for _, p in sdfa._out[state].values())
    # round-off from relative frequencies must not create phantom termination
    if rest < 1e-12:
        return 0.0
    return min(rest, 1.0)


def trace_probability(sdfa: SDFA, trace: Iterable[str]) -> float:
    state = sdfa.initial
    prob = 1.0
    for action in trace:
        edge = sdfa._out[state].get(action)
        if edge is None:
            return 0.0
        state, p = edge
        prob *= p
    return prob * termination_probability(sdfa, state)


def language_mass(sdfa: SDFA, max_len: int) -> float:
    """Total probability of all traces of length at most ``max_len``."""
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    term = {s: termination_probability(sdfa, s) for s in sdfa.states}
    mass = {sdfa.initial: 1.0}
    total = 0.0
    for step in range(max_len + 1):
        total += math.fsum(m * term[s] for s, m in mass.items())
        if step == max_len:
            break
        nxt: dict[int, float] = {}
        for s, m in mass.items():
            for dst, p in sdfa._out[s].values():
                nxt[dst] = nxt.get(dst, 0.0) + m * p
        mass = nxt
        if not mass:
            break
    return total


def reachable_states(sdfa: SDFA) -> list[int]:
    """States reachable from the initial state, in breadth-first order."""
    seen = {sdfa.initial}
    order = [sdfa.initial]
    queue = deque(order)
    while queue:
        s = queue.popleft()
        for action in sorted(sdfa._out[s]):
            dst = sdfa._out[s][action][0]
            if dst not in seen:
                seen.add(dst)
                order.append(dst)
                queue.append(dst)
    return order


def canonicalize(sdfa: SDFA) -> SDFA:
    """Drop unreachable states and renumber the rest 0..n-1 in BFS order."""
    order = reachable_states(sdfa)
    ids = {s: i for i, s in enumerate(order)}
    transitions = {
        (ids[s], a): (ids[dst], p)
        for s in order
        for a, (dst, p) in sorted(sdfa._out[s].items())
    }
    return SDFA(tuple(range(len(order))), 0, transitions, sdfa.alphabet)


class PrefixTree:
    """Frequency prefix acceptor tree (PAT).

    Nodes are integer ids.  For every node ``q`` the tree stores the number of
    traces arriving at ``q``, the number terminating there, and its outgoing
    edges ``action -> [target, frequency]``.  The structure is mutable so that
    the learner can merge and fold nodes in place; after merging it is a graph
    rather than a tree, but the count identity
    ``arrivals = terminations + sum(edge frequencies)`` holds at every live node.
    """

    def __init__(self):
        self.arrivals: list[int] = []
        self.terminations: list[int] = []
        self.children: list[dict[str, list[int]]] = []
        self.parent: list[tuple[int, str] | None] = []
        self.prefix: list[Trace] = []
        self.alive: list[bool] = []
        self.root = self._new_node(None, ())

    def _new_node(self, parent, prefix) -> int:
        self.arrivals.append(0)
        self.terminations.append(0)
        self.children.append({})
        self.parent.append(parent)
        self.prefix.append(prefix)
        self.alive.append(True)
        return len(self.arrivals) - 1

    def add_trace(self, trace: Trace, mult: int = 1) -> None:
        node = self.root
        self.arrivals[node] += mult
        for i, action in enumerate(trace):
            edge = self.children[node].get(action)
            if edge is None:
                child = self._new_node((node, action), tuple(trace[: i + 1]))
                edge = self.children[node][action] = [child, 0]
            edge[1] += mult
            node = edge[0]
            self.arrivals[node] += mult
        self.terminations[node] += mult

    def live_nodes(self) -> list[int]:
        return [q for q, ok in enumerate(self.alive) if ok]

    def edge_frequency(self, node: int, action: str) -> int:
        edge = self.children[node].get(action)
        return 0 if edge is None else edge[1]

    def child(self, node: int, action: str) -> int | None:
        edge = self.children[node].get(action)
        return None if edge is None else edge[0]

    def find(self, prefix: Iterable[str]) -> int | None:
        """Follow ``prefix`` from the root; ``None`` if it leaves the tree."""
        node = self.root
        for action in prefix:
            node = self.child(node, action)
            if node is None:
                return None
        return node

    def check_counts(self) -> None:
        """Raise ``AssertionError`` if the count identity is broken somewhere."""
        for q in self.live_nodes():
            out = sum(f for _, f in self.children[q].values())
            if self.arrivals[q] != self.terminations[q] + out:
                raise AssertionError(
                    f"node {q}: arrivals {self.arrivals[q]} != "
                    f"terminations {self.terminations[q]} + outgoing {out}"
                )

    def max_branch_frequency(self) -> int:
        """Largest edge frequency leaving the root (root arrivals if there is none)."""
        freqs = [f for _, f in self.children[self.root].values()]
        return max(freqs) if freqs else self.arrivals[self.root]


def build_pat(log: EventLog) -> PrefixTree:
    if log.total == 0:
        raise ValueError("cannot build a prefix tree from an empty log")
    tree = PrefixTree()
    # sorted insertion keeps node ids independent of the log's variant order
    for trace in sorted(log):
        tree.add_trace(trace, log[trace])
    return tree


def convert(tree: PrefixTree) -> SDFA:
    """Turn frequency counts into an SDFA by relative frequencies.

    Only nodes reachable from the root are kept; ids are assigned in BFS order
    with children visited by action name.
    """
    order = [tree.root]
    ids = {tree.root: 0}
    queue = deque(order)
    while queue:
        q = queue.popleft()
        for action in sorted(tree.children[q]):
            dst = tree.children[q][action][0]
            if dst not in ids:
                ids[dst] = len(order)
                order.append(dst)
                queue.append(dst)
    transitions = {}
    for q in order:
        n = tree.arrivals[q]
        for action, (dst, freq) in sorted(tree.children[q].items()):
            transitions[(ids[q], action)] = (ids[dst], freq / n)
    return SDFA(tuple(range(len(order))), 0, transitions)

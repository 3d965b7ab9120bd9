"""Random model generators and brute-force oracles shared by the tests."""

from __future__ import annotations

import itertools
from pathlib import Path

import numpy as np

from sgmine.automata import SDFA
from sgmine.sdag import SDAG

DATA = Path(__file__).resolve().parent.parent / "data"

EXAMPLE_TEXT = "1057;a,c,e,c\n272;a,b,c,e\n164;b,b,b,d\n"


def _terminates_everywhere(n, out, term):
    # every state must be able to reach a state with positive termination
    good = {s for s in range(n) if term[s] > 0}
    changed = True
    while changed:
        changed = False
        for s in range(n):
            if s not in good and any(d in good for d, _ in out[s].values()):
                good.add(s)
                changed = True
    return len(good) == n


def random_sdfa(rng: np.random.Generator, max_states: int = 6, max_actions: int = 4) -> SDFA:
    """A random SDFA whose states are all reachable and can all terminate."""
    actions = "abcd"[:max_actions]
    while True:
        n = int(rng.integers(1, max_states + 1))
        k = int(rng.integers(1, max_actions + 1))
        alphabet = actions[:k]
        out = {}
        term = {}
        for s in range(n):
            used = [a for a in alphabet if rng.random() < 0.6]
            weights = rng.random(len(used) + 1)
            if rng.random() < 0.4:
                weights[-1] = 0.0  # no termination at this state
            if weights.sum() == 0:
                weights[-1] = 1.0
            weights = weights / weights.sum()
            out[s] = {a: (int(rng.integers(0, n)), float(w)) for a, w in zip(used, weights)}
            term[s] = float(weights[-1])
        # reachability from state 0
        seen, stack = {0}, [0]
        while stack:
            s = stack.pop()
            for d, _ in out[s].values():
                if d not in seen:
                    seen.add(d)
                    stack.append(d)
        if len(seen) != n or not _terminates_everywhere(n, out, term):
            continue
        transitions = {(s, a): v for s in out for a, v in out[s].items()}
        return SDFA(tuple(range(n)), 0, transitions)


def random_sdag_with_duplicates(rng: np.random.Generator, max_nodes: int = 7) -> SDAG:
    """A random valid SDAG that has at least one repeated label."""
    while True:
        n = int(rng.integers(2, max_nodes + 1))
        labels = {i: "xyz"[int(rng.integers(0, 3))] for i in range(n)}
        if len(set(labels.values())) == n:
            continue
        arcs = {}
        for src in ["i"] + list(range(n)):
            targets = [d for d in range(n) if rng.random() < 0.4]
            if src != "i" and (rng.random() < 0.5 or not targets):
                targets.append("o")
            if not targets:
                targets = [int(rng.integers(0, n))]
            w = rng.random(len(targets)) + 0.05
            w = w / w.sum()
            for d, p in zip(targets, w):
                arcs[(src, d)] = float(p)
        return SDAG(labels, arcs)


def all_traces(alphabet, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(sorted(alphabet), repeat=n)


def brute_force_frontier(points):
    """Indices of points not dominated by any other, first of equal points kept."""
    keep = []
    for i, a in enumerate(points):
        dominated = False
        for j, b in enumerate(points):
            if j == i:
                continue
            if b[0] <= a[0] and b[1] <= a[1] and (b[0] < a[0] or b[1] < a[1]):
                dominated = True
                break
            if b == a and j < i:
                dominated = True
                break
        if not dominated:
            keep.append(i)
    return keep


# criterion number -> PASS/FAIL line, filled by test_acceptance
ACCEPTANCE_LINES: dict[int, str] = {}

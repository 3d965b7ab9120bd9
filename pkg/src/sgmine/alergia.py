"""ALERGIA: red-blue state merging over a frequency prefix tree."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .automata import SDFA, PrefixTree, build_pat, convert
from .eventlog import EventLog, filter_by_frequency


@dataclass(frozen=True, order=True)
class AlergiaParams:
    """Merge bound multiplier ``omega``, arrival threshold ``t``, filter level ``f``."""

    omega: float
    t: float
    f: float

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be > 0, got {self.omega}")
        if not self.t >= 0:
            raise ValueError(f"t must be >= 0, got {self.t}")
        if not 0.0 <= self.f <= 1.0:
            raise ValueError(f"f must lie in [0, 1], got {self.f}")


def hoeffding_compatible(g1: int, n1: int, g2: int, n2: int, omega: float) -> bool:
    """Whether the ratios ``g1/n1`` and ``g2/n2`` are within the Hoeffding bound."""
    if n1 <= 0 or n2 <= 0:
        raise ValueError("arrival counts must be positive")
    bound = omega * (math.sqrt(1.0 / n1) + math.sqrt(1.0 / n2))
    return abs(g1 / n1 - g2 / n2) < bound


def compatible(tree: PrefixTree, qr: int, qb: int, omega: float) -> bool:
    """Recursive compatibility of red node ``qr`` and blue node ``qb``.

    Compares termination ratios and every outgoing edge ratio (an absent edge
    counts as frequency 0), then recurses into children reached by actions
    both nodes share.  The blue side is always a finite tree, so the recursion
    terminates even when the red side loops.
    """
    n_r, n_b = tree.arrivals[qr], tree.arrivals[qb]
    if n_r == 0 or n_b == 0:
        return True
    if not hoeffding_compatible(tree.terminations[qr], n_r, tree.terminations[qb], n_b, omega):
        return False
    kids_r, kids_b = tree.children[qr], tree.children[qb]
    for action in kids_r.keys() | kids_b.keys():
        g_r = kids_r[action][1] if action in kids_r else 0
        g_b = kids_b[action][1] if action in kids_b else 0
        if not hoeffding_compatible(g_r, n_r, g_b, n_b, omega):
            return False
    for action in sorted(kids_r.keys() & kids_b.keys()):
        if not compatible(tree, kids_r[action][0], kids_b[action][0], omega):
            return False
    return True


def _fold(tree: PrefixTree, qr: int, qb: int) -> None:
    tree.arrivals[qr] += tree.arrivals[qb]
    tree.terminations[qr] += tree.terminations[qb]
    for action, (child_b, freq) in list(tree.children[qb].items()):
        edge_r = tree.children[qr].get(action)
        if edge_r is None:
            tree.children[qr][action] = [child_b, freq]
            tree.parent[child_b] = (qr, action)
        else:
            edge_r[1] += freq
            _fold(tree, edge_r[0], child_b)
    tree.children[qb] = {}
    tree.alive[qb] = False


def merge_fold(tree: PrefixTree, qr: int, qb: int) -> None:
    """Redirect the edge into ``qb`` onto ``qr`` and fold ``qb``'s subtree into ``qr``."""
    parent = tree.parent[qb]
    if parent is None:
        raise ValueError("cannot merge the root into another node")
    src, action = parent
    tree.children[src][action][0] = qr
    tree.parent[qb] = None
    _fold(tree, qr, qb)


def _blue_nodes(tree: PrefixTree, red: list[int], red_set: set[int]) -> list[int]:
    blue = []
    seen = set()
    for q in red:
        for action in sorted(tree.children[q]):
            dst = tree.children[q][action][0]
            if dst not in red_set and dst not in seen:
                seen.add(dst)
                blue.append(dst)
    return blue


def learn(tree: PrefixTree, omega: float, t: float) -> tuple[list[int], list[int]]:
    """Run the red-blue loop on ``tree`` in place.

    Returns the final red and blue node lists.  Blue nodes arriving fewer than
    ``t`` times are never touched and stay in the tree as unmerged remnants.
    """
    red = [tree.root]
    red_set = {tree.root}
    while True:
        blue = [q for q in _blue_nodes(tree, red, red_set) if tree.arrivals[q] >= t]
        if not blue:
            break
        qb = min(blue, key=lambda q: (-tree.arrivals[q], tree.prefix[q]))
        for qr in red:
            if compatible(tree, qr, qb, omega):
                merge_fold(tree, qr, qb)
                break
        else:
            red.append(qb)
            red_set.add(qb)
    return red, _blue_nodes(tree, red, red_set)


def run_alergia(log: EventLog, params: AlergiaParams) -> SDFA:
    """Filter ``log``, build its prefix tree, merge compatible states, convert."""
    if log.total == 0:
        raise ValueError("cannot learn from an empty log")
    filtered = filter_by_frequency(log, params.f)
    if filtered.total == 0:
        raise ValueError("filtered log is empty")
    tree = build_pat(filtered)
    learn(tree, params.omega, params.t)
    return convert(tree)

"""Exact edit distance from a string to a regular language.

Pipeline: a chain-shaped tropical WFA whose stringsum against any u equals
the Levenshtein distance between u and the query string; the language DFA
lifted to tropical weights (cost 0 on members, unreachable otherwise); their
product; and a min-plus shortest-path allsum with witness reconstruction.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .automata import EPSILON, PartialDfa, Wfa, WeightedDfa, check_trim
from .errors import UsageError
from .semiring import TROPICAL

# Dense all-pairs closure is quadratic in memory and cubic in time, so past
# this many product states the allsum switches to single-source relaxation,
# which is exact for these nonnegative weights.
FW_MAX_STATES = 256


@dataclass(frozen=True)
class EditDistanceResult:
    distance: int | float
    witness: tuple[int, ...] | None


def build_chain_wfa(word, alphabet) -> Wfa:
    """Tropical chain automaton for one query string: match costs 0,
    substitution and deletion cost 1, and every state carries cost-1
    insertion self-loops; only the final state accepts."""
    n_syms = len(alphabet)
    n = len(word)
    arcs = []
    for i, wi in enumerate(word):
        wi = int(wi)
        if not 0 <= wi < n_syms:
            raise UsageError(f"symbol id {wi} outside the alphabet")
        arcs.append((i, wi, 0.0, i + 1))
        arcs.append((i, EPSILON, 1.0, i + 1))
        for a in range(n_syms):
            if a != wi:
                arcs.append((i, a, 1.0, i + 1))
    for q in range(n + 1):
        for a in range(n_syms):
            arcs.append((q, a, 1.0, q))
    accept = [math.inf] * (n + 1)
    accept[n] = 0.0
    return Wfa(n + 1, alphabet, arcs, 0, accept)


def lift_tropical(dfa: PartialDfa) -> WeightedDfa:
    """The DFA with every transition and accepting state at cost 0."""
    transitions = {
        (q, sym): (dst, 0.0)
        for q in range(dfa.n_states)
        for sym, dst in dfa.transitions_from(q)
    }
    accept = [0.0 if dfa.is_accepting(q) else math.inf for q in range(dfa.n_states)]
    return WeightedDfa(dfa.n_states, dfa.alphabet, TROPICAL, transitions, dfa.start, accept)


def wfa_intersect(a: WeightedDfa, b: Wfa) -> Wfa:
    """Product automaton; epsilon arcs of ``b`` advance only the b side."""
    if len(a.alphabet) != len(b.alphabet):
        raise UsageError("intersection requires matching alphabets")
    nb = b.n_states

    a_by_sym: dict[int, list[tuple[int, int, float]]] = {}
    for (src, sym), (dst, w) in a.transitions.items():
        a_by_sym.setdefault(sym, []).append((src, dst, w))

    arcs = []
    for bsrc, label, bw, bdst in b.arcs:
        if label is EPSILON:
            for qa in range(a.n_states):
                arcs.append((qa * nb + bsrc, EPSILON, bw, qa * nb + bdst))
        else:
            for asrc, adst, aw in a_by_sym.get(label, []):
                arcs.append((asrc * nb + bsrc, label, aw + bw, adst * nb + bdst))
    accept = [
        a.accept_weights[qa] + b.accept_weights[qb]
        for qa in range(a.n_states)
        for qb in range(nb)
    ]
    return Wfa(a.n_states * nb, a.alphabet, arcs, a.start * nb + b.start, accept)


def _best_direct_arcs(wfa: Wfa) -> dict[tuple[int, int], tuple[float, object]]:
    ranked: dict[tuple[int, int], tuple[tuple[float, int], object]] = {}
    for src, label, w, dst in wfa.arcs:
        key = (src, dst)
        order = (w, -1 if label is EPSILON else label)
        if key not in ranked or order < ranked[key][0]:
            ranked[key] = (order, label)
    return {key: (order[0], label) for key, (order, label) in ranked.items()}


def _allsum_floyd_warshall(wfa: Wfa) -> tuple[float, list | None]:
    n = wfa.n_states
    direct = _best_direct_arcs(wfa)
    dist = np.full((n, n), np.inf)
    for (i, j), (w, _label) in direct.items():
        dist[i, j] = w
    via = np.full((n, n), -1, dtype=np.int64)
    for k in range(n):
        alt = dist[:, k : k + 1] + dist[k : k + 1, :]
        better = alt < dist
        dist = np.where(better, alt, dist)
        via[better] = k
    for i in range(n):
        if dist[i, i] > 0.0:
            dist[i, i] = 0.0
            via[i, i] = -2

    accept = np.asarray(wfa.accept_weights)
    totals = dist[wfa.start] + accept
    r = int(np.argmin(totals))
    if not np.isfinite(totals[r]):
        return math.inf, None

    def labels(i: int, j: int) -> list:
        k = via[i, j]
        if k == -2:
            return []
        if k == -1:
            return [direct[(i, j)][1]]
        return labels(i, int(k)) + labels(int(k), j)

    return float(totals[r]), labels(wfa.start, r)


def _allsum_dijkstra(wfa: Wfa) -> tuple[float, list | None]:
    n = wfa.n_states
    adjacency: list[list[tuple[float, int, object]]] = [[] for _ in range(n)]
    for (src, dst), (w, label) in _best_direct_arcs(wfa).items():
        adjacency[src].append((w, dst, label))
    dist = np.full(n, np.inf)
    prev: dict[int, tuple[int, object]] = {}
    dist[wfa.start] = 0.0
    heap = [(0.0, wfa.start)]
    while heap:
        d, q = heapq.heappop(heap)
        if d > dist[q]:
            continue
        for w, dst, label in adjacency[q]:
            alt = d + w
            if alt < dist[dst]:
                dist[dst] = alt
                prev[dst] = (q, label)
                heapq.heappush(heap, (alt, dst))

    totals = dist + np.asarray(wfa.accept_weights)
    r = int(np.argmin(totals))
    if not np.isfinite(totals[r]):
        return math.inf, None
    labels = []
    q = r
    while q in prev:
        q, label = prev[q]
        labels.append(label)
    labels.reverse()
    return float(totals[r]), labels


def shortest_allsum(wfa: Wfa, method: str | None = None) -> EditDistanceResult:
    """Minimum-cost accepted run weight from the start state, with one
    optimal run's consumed symbols as witness.

    ``method`` forces a route ("floyd-warshall" or "dijkstra"); by default
    small automata take the dense closure and large ones single-source
    relaxation.
    """
    if method is None:
        method = "floyd-warshall" if wfa.n_states <= FW_MAX_STATES else "dijkstra"
    if method == "floyd-warshall":
        total, labels = _allsum_floyd_warshall(wfa)
    elif method == "dijkstra":
        total, labels = _allsum_dijkstra(wfa)
    else:
        raise UsageError(f"unknown allsum method {method!r}")
    if labels is None:
        return EditDistanceResult(math.inf, None)
    witness = tuple(lab for lab in labels if lab is not EPSILON)
    return EditDistanceResult(int(round(total)), witness)


def edit_distance(dfa: PartialDfa, word, method: str | None = None) -> EditDistanceResult:
    """d(L, word): fewest single-symbol edits from ``word`` to a member."""
    ok, state = check_trim(dfa)
    if not ok:
        raise UsageError(f"edit distance needs a trim DFA (dead state {state})")
    chain = build_chain_wfa(word, dfa.alphabet)
    lifted = lift_tropical(dfa)
    return shortest_allsum(wfa_intersect(lifted, chain), method=method)

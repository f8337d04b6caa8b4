"""Length-constrained sampling from the uniform-policy distribution of a DFA.

The pipeline lifts a trim partial DFA into length-binned log weights, closes
the transition matrix with a generic all-pairs star, pushes the backward
weights into per-state local distributions conditioned on how many symbols
remain, and then draws strings symbol by symbol.  The local tables make each
draw O(log fan-out) after an O(n_states^3 * n_max^2) preprocessing step.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from .automata import EOS, PartialDfa, WeightedDfa, check_trim, compute_next_sets
from .errors import ConfigurationError, UsageError
from .semiring import LOG, BinningSemiring, Semiring, binning


def lift_weights(dfa: PartialDfa, n_max: int) -> WeightedDfa:
    """Attach length-binned log weights for the uniform-policy distribution.

    At a state with j outgoing transitions (plus stopping, when accepting)
    every choice gets probability 1/k, k = j + accepting.  Transition
    weights put that mass in bin 1 (one symbol consumed); accept weights
    put it in bin 0.
    """
    ok, witness = check_trim(dfa)
    if not ok:
        raise UsageError(f"lifting needs a trim DFA; state {witness} is not live")
    if n_max < 0:
        raise UsageError(f"n_max must be nonnegative, got {n_max}")
    sr = binning(LOG, n_max)
    transitions = {}
    accept_weights = []
    for q in range(dfa.n_states):
        outs = dfa.transitions_from(q)
        k = len(outs) + (1 if dfa.is_accepting(q) else 0)
        p = -np.log(k)
        for sym, dst in outs:
            w = sr.zero
            if n_max >= 1:
                w[1] = p
            transitions[(q, sym)] = (dst, w)
        rho = sr.zero
        if dfa.is_accepting(q):
            rho[0] = p
        accept_weights.append(rho)
    return WeightedDfa(dfa.n_states, dfa.alphabet, sr, transitions, dfa.start, accept_weights)


def lehmann(matrix: list[list], semiring: Semiring) -> list[list]:
    """All-pairs closure of a weighted adjacency matrix over a closed semiring.

    Entry (i, j) of the result sums every path from i to j, the empty path
    included on the diagonal.  Eliminates one pivot state per round, taking
    the star of its self-loop weight.
    """
    n = len(matrix)
    cur = [[matrix[i][j] for j in range(n)] for i in range(n)]
    for k in range(n):
        a = semiring.star(cur[k][k])
        pivot_row = cur[k]
        nxt = []
        for i in range(n):
            through = semiring.mul(cur[i][k], a)
            nxt.append(
                [semiring.add(cur[i][j], semiring.mul(through, pivot_row[j])) for j in range(n)]
            )
        cur = nxt
    for i in range(n):
        cur[i][i] = semiring.add(cur[i][i], semiring.one)
    return cur


def backward(wdfa: WeightedDfa) -> list:
    """Per state, the summed weight of all accepting runs that start there."""
    sr = wdfa.semiring
    n = wdfa.n_states
    adj = [[sr.zero for _ in range(n)] for _ in range(n)]
    for (src, _sym), (dst, w) in wdfa.transitions.items():
        adj[src][dst] = sr.add(adj[src][dst], w)
    closure = lehmann(adj, sr)
    beta = []
    for q in range(n):
        acc = sr.zero
        for r in range(n):
            acc = sr.add(acc, sr.mul(closure[q][r], wdfa.accept_weights[r]))
        beta.append(acc)
    return beta


@dataclass
class StateTable:
    """Local sampling table for one state.

    ``probs[j, i]`` is the probability of taking transition j (sorted by
    symbol id) given that exactly i more symbols will be consumed before
    stopping.  Bin 0 is never a valid condition for taking a transition, so
    column 0 is marked unavailable rather than holding numbers.
    """

    symbols: np.ndarray
    targets: np.ndarray
    probs: np.ndarray
    available: np.ndarray
    cumulative: np.ndarray = field(init=False)
    _rows: list = field(init=False, repr=False)
    _symbols: list = field(init=False, repr=False)
    _targets: list = field(init=False, repr=False)

    def __post_init__(self):
        # cumulative along the transition axis, stored bins-first so a
        # bin lookup during sampling touches contiguous memory
        cum = np.cumsum(self.probs, axis=0).T.copy()
        if cum.size:
            cum[self.available, -1] = 1.0
        self.cumulative = cum
        # plain-Python mirrors: the per-draw bisect is several times faster
        # on tuples of floats than on strided numpy columns
        self._rows = [
            tuple(cum[i]) if self.available[i] else None
            for i in range(self.available.shape[0])
        ]
        self._symbols = [int(s) for s in self.symbols]
        self._targets = [int(t) for t in self.targets]


@dataclass
class SamplerTables:
    """Everything needed to draw strings of an exact length from a DFA."""

    dfa: PartialDfa
    n_min: int
    n_max: int
    pushed: list[StateTable]
    allsum_z: np.ndarray
    valid_lengths: tuple[int, ...]
    next_sets: list[frozenset[int]]
    _valid_set: frozenset[int] = field(init=False)

    def __post_init__(self):
        self._valid_set = frozenset(self.valid_lengths)


def push_weights(lifted: WeightedDfa) -> tuple[list[StateTable], np.ndarray]:
    """Turn backward weights into per-state local distributions.

    For each state and each remaining-length bin i >= 1, the probability of
    a transition is proportional to its weight times the target's backward
    weight at bin i-1, normalized across the state's transitions.  Also
    returns the start state's backward weights, the per-length allsum.
    """
    sr = lifted.semiring
    if not isinstance(sr, BinningSemiring) or sr.base is not LOG:
        raise UsageError("push_weights expects length-binned log weights")
    order = sr.order
    beta = backward(lifted)
    tables = []
    for q in range(lifted.n_states):
        rows = []
        symbols = []
        targets = []
        for sym, dst, w in lifted.transitions_from(q):
            # mass sits in bin 1, so the product is beta[dst] shifted by one
            shifted = np.full(order + 1, -np.inf)
            if order >= 1:
                shifted[1:] = beta[dst][:-1] + float(w[1])
            symbols.append(sym)
            targets.append(dst)
            rows.append(shifted)
        if rows:
            logits = np.stack(rows)
            peak = logits.max(axis=0)
            available = peak > -np.inf
            probs = np.zeros_like(logits)
            cols = np.nonzero(available)[0]
            if cols.size:
                shifted_cols = np.exp(logits[:, cols] - peak[cols])
                probs[:, cols] = shifted_cols / shifted_cols.sum(axis=0)
        else:
            logits = np.zeros((0, order + 1))
            available = np.zeros(order + 1, dtype=bool)
            probs = logits
        tables.append(
            StateTable(
                symbols=np.array(symbols, dtype=np.int64),
                targets=np.array(targets, dtype=np.int64),
                probs=probs,
                available=available,
            )
        )
    return tables, np.asarray(beta[lifted.start])


def valid_lengths(allsum_z: np.ndarray, n_min: int, n_max: int) -> tuple[int, ...]:
    """Lengths in [n_min, n_max] whose total probability mass is nonzero."""
    if n_min < 0 or n_min > n_max:
        raise UsageError(f"bad length range [{n_min}, {n_max}]")
    if n_max >= allsum_z.shape[0]:
        raise UsageError(
            f"n_max {n_max} exceeds the preprocessed bound {allsum_z.shape[0] - 1}"
        )
    return tuple(n for n in range(n_min, n_max + 1) if allsum_z[n] > -np.inf)


def build_sampler_tables(dfa: PartialDfa, n_min: int, n_max: int) -> SamplerTables:
    """Preprocess a trim DFA for exact-length sampling over [n_min, n_max]."""
    if n_min < 0 or n_min > n_max:
        raise UsageError(f"bad length range [{n_min}, {n_max}]")
    lifted = lift_weights(dfa, n_max)
    pushed, z = push_weights(lifted)
    return SamplerTables(
        dfa=dfa,
        n_min=n_min,
        n_max=n_max,
        pushed=pushed,
        allsum_z=z,
        valid_lengths=valid_lengths(z, n_min, n_max),
        next_sets=compute_next_sets(dfa),
    )


def sample_string(
    tables: SamplerTables, n: int, rng: np.random.Generator
) -> tuple[list[int], list[frozenset[int]]]:
    """Draw one accepted string of exact length ``n`` plus its n+1 next-symbol
    sets, one per prefix, the last containing EOS."""
    if n not in tables._valid_set:
        raise UsageError(f"length {n} is not a valid length for this table")
    pushed = tables.pushed
    next_sets = tables.next_sets
    rand = rng.random
    q = tables.dfa.start
    out: list[int] = []
    nexts = [next_sets[q]]
    for remaining in range(n, 0, -1):
        st = pushed[q]
        row = st._rows[remaining]
        if row is None:
            raise AssertionError(
                f"no mass at state {q} with {remaining} symbols remaining"
            )
        j = bisect_right(row, rand())
        if j >= len(row):
            j = len(row) - 1
        out.append(st._symbols[j])
        q = st._targets[j]
        nexts.append(next_sets[q])
    if not tables.dfa.is_accepting(q):
        raise AssertionError(f"sampler stopped in non-accepting state {q}")
    return out, nexts


def sample_positive_regular(tables: SamplerTables, rng: np.random.Generator) -> list[int]:
    """Uniform valid length, then one string of that exact length."""
    if not tables.valid_lengths:
        raise ConfigurationError(
            f"language has no strings in range [{tables.n_min}, {tables.n_max}]"
        )
    n = tables.valid_lengths[int(rng.integers(len(tables.valid_lengths)))]
    return sample_string(tables, n, rng)[0]

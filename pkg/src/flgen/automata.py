"""Finite automata: alphabets, partial DFAs, and weighted machines.

States are dense integers.  Symbols are dense integer ids into an
``Alphabet`` that maps them to printable glyphs; the end-of-string marker
``EOS`` lives outside every alphabet and renders as ``"</s>"``.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ParseError, UsageError

EOS = -1
EOS_GLYPH = "</s>"

#: transition label for an epsilon move in a nondeterministic machine
EPSILON = None


class Alphabet:
    """Ordered set of glyphs; symbol ids are positions in the glyph tuple.

    ``encode`` tokenizes greedily, longest glyph first, and skips ASCII
    spaces so glyphs longer than one character can be written readably.
    """

    def __init__(self, glyphs: Sequence[str]):
        glyphs = tuple(glyphs)
        if not glyphs:
            raise UsageError("alphabet needs at least one glyph")
        if len(set(glyphs)) != len(glyphs):
            raise UsageError(f"duplicate glyphs in {glyphs!r}")
        for g in glyphs:
            if not g or " " in g or g == EOS_GLYPH:
                raise UsageError(f"bad glyph {g!r}")
        self.glyphs = glyphs
        self._ids = {g: i for i, g in enumerate(glyphs)}
        self._greedy = sorted(glyphs, key=len, reverse=True)

    def __len__(self) -> int:
        return len(self.glyphs)

    def __contains__(self, glyph: str) -> bool:
        return glyph in self._ids

    def id_of(self, glyph: str) -> int:
        try:
            return self._ids[glyph]
        except KeyError:
            raise UsageError(f"glyph {glyph!r} is not in alphabet {self.glyphs!r}") from None

    def encode(self, text: str) -> list[int]:
        out = []
        i = 0
        while i < len(text):
            if text[i] == " ":
                i += 1
                continue
            for g in self._greedy:
                if text.startswith(g, i):
                    out.append(self._ids[g])
                    i += len(g)
                    break
            else:
                raise UsageError(f"cannot tokenize {text!r} at position {i}")
        return out

    def decode(self, symbols: Iterable[int]) -> str:
        parts = []
        for s in symbols:
            if not 0 <= s < len(self.glyphs):
                raise UsageError(f"symbol id {s} outside alphabet of size {len(self.glyphs)}")
            parts.append(self.glyphs[s])
        return "".join(parts)

    def render_symbol(self, symbol: int) -> str:
        if symbol == EOS:
            return EOS_GLYPH
        if not 0 <= symbol < len(self.glyphs):
            raise UsageError(f"symbol id {symbol} outside alphabet of size {len(self.glyphs)}")
        return self.glyphs[symbol]


def _normalize_transitions(transitions) -> dict[tuple[int, int], int]:
    if isinstance(transitions, Mapping):
        return dict(transitions)
    table: dict[tuple[int, int], int] = {}
    for src, sym, dst in transitions:
        if (src, sym) in table:
            raise UsageError(f"duplicate transition from state {src} on symbol {sym}")
        table[(src, sym)] = dst
    return table


class PartialDfa:
    """Deterministic automaton whose transition function may be undefined.

    A missing transition means immediate rejection.  The table is stored
    densely: ``delta[q, a]`` is the target state or -1.
    """

    def __init__(
        self,
        n_states: int,
        alphabet: Alphabet,
        transitions,
        start: int,
        accepting: Iterable[int],
    ):
        if n_states <= 0:
            raise UsageError("a DFA needs at least one state")
        if not 0 <= start < n_states:
            raise UsageError(f"start state {start} out of range")
        self.n_states = n_states
        self.alphabet = alphabet
        self.start = start
        self.accepting = frozenset(accepting)
        for q in self.accepting:
            if not 0 <= q < n_states:
                raise UsageError(f"accepting state {q} out of range")
        self.delta = np.full((n_states, len(alphabet)), -1, dtype=np.int32)
        for (src, sym), dst in _normalize_transitions(transitions).items():
            if not 0 <= src < n_states or not 0 <= dst < n_states:
                raise UsageError(f"transition ({src}, {sym}, {dst}) out of range")
            if not 0 <= sym < len(alphabet):
                raise UsageError(f"transition symbol {sym} outside the alphabet")
            self.delta[src, sym] = dst
        self._accept_mask = np.zeros(n_states, dtype=bool)
        self._accept_mask[list(self.accepting)] = True

    @property
    def n_transitions(self) -> int:
        return int((self.delta >= 0).sum())

    def step(self, state: int, symbol: int) -> int:
        """Target state, or -1 when the transition is undefined."""
        return int(self.delta[state, symbol])

    def transitions_from(self, state: int) -> list[tuple[int, int]]:
        """(symbol, target) pairs leaving ``state``, sorted by symbol id."""
        row = self.delta[state]
        return [(int(a), int(row[a])) for a in np.nonzero(row >= 0)[0]]

    def is_accepting(self, state: int) -> bool:
        return bool(self._accept_mask[state])


def dfa_accepts(dfa: PartialDfa, symbols: Sequence[int]) -> bool:
    """Run the DFA; out-of-alphabet ids raise rather than reject."""
    n_syms = len(dfa.alphabet)
    state = dfa.start
    for s in symbols:
        if not 0 <= s < n_syms:
            raise UsageError(f"symbol id {s} outside alphabet of size {n_syms}")
        state = int(dfa.delta[state, s])
        if state < 0:
            return False
    return dfa.is_accepting(state)


def _reachable(dfa: PartialDfa) -> np.ndarray:
    seen = np.zeros(dfa.n_states, dtype=bool)
    seen[dfa.start] = True
    queue = deque([dfa.start])
    while queue:
        q = queue.popleft()
        for dst in dfa.delta[q]:
            if dst >= 0 and not seen[dst]:
                seen[dst] = True
                queue.append(int(dst))
    return seen


def _coreachable(dfa: PartialDfa) -> np.ndarray:
    back: list[list[int]] = [[] for _ in range(dfa.n_states)]
    srcs, syms = np.nonzero(dfa.delta >= 0)
    for src, sym in zip(srcs, syms):
        back[dfa.delta[src, sym]].append(int(src))
    seen = np.zeros(dfa.n_states, dtype=bool)
    queue = deque()
    for q in dfa.accepting:
        seen[q] = True
        queue.append(q)
    while queue:
        q = queue.popleft()
        for src in back[q]:
            if not seen[src]:
                seen[src] = True
                queue.append(src)
    return seen


def check_trim(dfa: PartialDfa) -> tuple[bool, int | None]:
    """Whether every state is reachable and co-reachable; else a witness state."""
    live = _reachable(dfa) & _coreachable(dfa)
    if live.all():
        return True, None
    return False, int(np.nonzero(~live)[0][0])


def compute_next_sets(dfa: PartialDfa) -> list[frozenset[int]]:
    """Per state, the symbols that can extend some accepted string, plus EOS
    at accepting states.  Requires a trim DFA: there, a transition existing
    is the same as it being completable."""
    ok, witness = check_trim(dfa)
    if not ok:
        raise UsageError(f"next sets need a trim DFA; state {witness} is not live")
    out = []
    for q in range(dfa.n_states):
        syms = {a for a, _ in dfa.transitions_from(q)}
        if dfa.is_accepting(q):
            syms.add(EOS)
        out.append(frozenset(syms))
    return out


def dfa_to_text(dfa: PartialDfa) -> str:
    """Plain-text form: header ``states alphabet start``, one transition per
    line as ``src sym dst``, then the accepting states on the final line."""
    lines = [f"{dfa.n_states} {len(dfa.alphabet)} {dfa.start}"]
    for src in range(dfa.n_states):
        for sym, dst in dfa.transitions_from(src):
            lines.append(f"{src} {sym} {dst}")
    lines.append(" ".join(str(q) for q in sorted(dfa.accepting)))
    return "\n".join(lines) + "\n"


def dfa_from_text(text: str, alphabet: Alphabet | None = None) -> PartialDfa:
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty automaton text")
    try:
        n_states, n_syms, start = (int(x) for x in lines[0].split())
    except ValueError:
        raise ParseError(f"bad header {lines[0]!r}", line=1) from None
    if alphabet is None:
        alphabet = Alphabet([f"s{i}" for i in range(n_syms)])
    elif len(alphabet) != n_syms:
        raise ParseError(f"alphabet size {len(alphabet)} does not match header {n_syms}")
    if len(lines) < 2:
        raise ParseError("missing accepting-state line")
    transitions = []
    for ln, line in enumerate(lines[1:-1], start=2):
        try:
            src, sym, dst = (int(x) for x in line.split())
        except ValueError:
            raise ParseError(f"bad transition {line!r}", line=ln) from None
        transitions.append((src, sym, dst))
    try:
        accepting = [int(x) for x in lines[-1].split()]
    except ValueError:
        raise ParseError(f"bad accepting line {lines[-1]!r}", line=len(lines)) from None
    try:
        return PartialDfa(n_states, alphabet, transitions, start, accepting)
    except UsageError as exc:
        raise ParseError(str(exc)) from None


class WeightedDfa:
    """Deterministic automaton whose transitions carry (target, weight) pairs
    and whose states carry accept weights, over an explicit semiring."""

    def __init__(self, n_states, alphabet, semiring, transitions, start, accept_weights):
        self.n_states = n_states
        self.alphabet = alphabet
        self.semiring = semiring
        self.start = start
        self.transitions = dict(transitions)
        for (src, sym), (dst, _w) in self.transitions.items():
            if not (0 <= src < n_states and 0 <= dst < n_states):
                raise UsageError(f"transition ({src}, {sym}) -> {dst} out of range")
            if not 0 <= sym < len(alphabet):
                raise UsageError(f"transition symbol {sym} outside the alphabet")
        accept_weights = list(accept_weights)
        if len(accept_weights) != n_states:
            raise UsageError("need one accept weight per state")
        self.accept_weights = accept_weights

    def transitions_from(self, state: int) -> list[tuple[int, int, object]]:
        """(symbol, target, weight) triples leaving ``state``, sorted by symbol."""
        out = [
            (sym, dst, w)
            for (src, sym), (dst, w) in self.transitions.items()
            if src == state
        ]
        out.sort(key=lambda t: t[0])
        return out

    def check_stochastic(self, tol: float = 1e-9) -> bool:
        """For a real-weighted machine: outgoing mass plus accept mass is 1
        at every state."""
        totals = [self.accept_weights[q] for q in range(self.n_states)]
        for (src, _sym), (_dst, w) in self.transitions.items():
            totals[src] += w
        return all(abs(t - 1.0) <= tol for t in totals)


class Wfa:
    """Nondeterministic weighted automaton with optional epsilon arcs."""

    def __init__(self, n_states, alphabet, arcs, start, accept_weights):
        self.n_states = n_states
        self.alphabet = alphabet
        self.start = start
        self.arcs = list(arcs)
        for src, label, _w, dst in self.arcs:
            if not (0 <= src < n_states and 0 <= dst < n_states):
                raise UsageError(f"arc ({src} -> {dst}) out of range")
            if label is not EPSILON and not 0 <= label < len(alphabet):
                raise UsageError(f"arc label {label} outside the alphabet")
        accept_weights = list(accept_weights)
        if len(accept_weights) != n_states:
            raise UsageError("need one accept weight per state")
        self.accept_weights = accept_weights


def wfa_stringsum(wfa: Wfa, symbols: Sequence[int]) -> float:
    """Minimum-cost accepting run on ``symbols`` (tropical weights), with
    epsilon arcs relaxed to a fixed point between consumed symbols."""
    by_label: dict[object, list[tuple[int, float, int]]] = {}
    for src, label, w, dst in wfa.arcs:
        by_label.setdefault(label, []).append((src, w, dst))
    eps_arcs = by_label.get(EPSILON, [])

    def relax(cost: np.ndarray) -> None:
        for _ in range(wfa.n_states):
            changed = False
            for src, w, dst in eps_arcs:
                alt = cost[src] + w
                if alt < cost[dst]:
                    cost[dst] = alt
                    changed = True
            if not changed:
                return

    cost = np.full(wfa.n_states, np.inf)
    cost[wfa.start] = 0.0
    relax(cost)
    for s in symbols:
        nxt = np.full(wfa.n_states, np.inf)
        for src, w, dst in by_label.get(int(s), []):
            alt = cost[src] + w
            if alt < nxt[dst]:
                nxt[dst] = alt
        relax(nxt)
        cost = nxt
    return float((cost + np.asarray(wfa.accept_weights)).min())

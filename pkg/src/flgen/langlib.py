"""The benchmark languages: membership, positive samplers, next-symbol sets.

Regular languages carry a trim partial DFA used for exact-length sampling
and next-set computation, while membership goes through an independently
coded predicate so the two routes can be checked against each other.
Non-regular languages implement all three operations procedurally.
"""

from __future__ import annotations

import math
from itertools import product
from typing import Callable, Sequence

import numpy as np

from .automata import EOS, Alphabet, PartialDfa, check_trim, compute_next_sets
from .errors import ConfigurationError, UsageError
from .lcsampler import SamplerTables, build_sampler_tables, sample_positive_regular

BIT_ALPHABET = Alphabet(["0", "1"])


class LanguageSpec:
    """One language: identity, alphabet, and its three core operations."""

    def __init__(
        self,
        name: str,
        class_label: str,
        alphabet: Alphabet,
        contains: Callable[[list[int]], bool],
        sample_positive: Callable[[int, int, np.random.Generator], list[int]] | None = None,
        next_sets: Callable[[list[int]], list[frozenset[int]]] | None = None,
        dfa: PartialDfa | None = None,
    ):
        self.name = name
        self.class_label = class_label
        self.alphabet = alphabet
        self.dfa = dfa
        self.kind = "regular" if dfa is not None else "procedural"
        self._contains = contains
        self._sample_positive = sample_positive
        self._next_sets = next_sets
        self._tables: dict[tuple[int, int], SamplerTables] = {}
        if dfa is not None:
            ok, witness = check_trim(dfa)
            if not ok:
                raise AssertionError(f"{name}: shipped DFA is not trim at state {witness}")
            self._state_next = compute_next_sets(dfa)

    def _validate(self, symbols: Sequence[int]) -> list[int]:
        n = len(self.alphabet)
        out = []
        for s in symbols:
            if not 0 <= s < n:
                raise UsageError(
                    f"symbol id {s} outside the {self.name} alphabet of size {n}"
                )
            out.append(int(s))
        return out

    def contains(self, symbols: Sequence[int]) -> bool:
        return self._contains(self._validate(symbols))

    def sample_positive(self, n_min: int, n_max: int, rng: np.random.Generator) -> list[int]:
        if n_min < 0 or n_min > n_max:
            raise UsageError(f"bad length range [{n_min}, {n_max}]")
        if self.dfa is not None:
            return sample_positive_regular(self.sampler_tables(n_min, n_max), rng)
        return self._sample_positive(n_min, n_max, rng)

    def next_sets(self, symbols: Sequence[int]) -> list[frozenset[int]]:
        symbols = self._validate(symbols)
        if self.dfa is not None:
            return self._dfa_next_sets(symbols)
        return self._next_sets(symbols)

    def sampler_tables(self, n_min: int, n_max: int) -> SamplerTables:
        if self.dfa is None:
            raise UsageError(f"{self.name} is procedural and has no sampler tables")
        key = (n_min, n_max)
        if key not in self._tables:
            self._tables[key] = build_sampler_tables(self.dfa, n_min, n_max)
        return self._tables[key]

    def _dfa_next_sets(self, symbols: list[int]) -> list[frozenset[int]]:
        state = self.dfa.start
        out = [self._state_next[state]]
        for s in symbols:
            if state >= 0:
                state = self.dfa.step(state, s)
            out.append(self._state_next[state] if state >= 0 else frozenset())
        return out

    def parse(self, text: str) -> list[int]:
        return self.alphabet.encode(text)

    def render(self, symbols: Sequence[int]) -> str:
        return self.alphabet.decode(symbols)

    def __repr__(self) -> str:
        return f"<language {self.name} ({self.class_label}, {self.kind})>"


# ---------------------------------------------------------------------------
# shared numeric helpers

def _uniform_int(rng: np.random.Generator, hi: int) -> int:
    """Uniform integer in [0, hi], exact at arbitrary precision."""
    if hi < 0:
        raise UsageError(f"empty integer range [0, {hi}]")
    if hi == 0:
        return 0
    k = hi.bit_length()
    while True:
        bits = rng.integers(0, 2, size=k, dtype=np.uint8)
        val = int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")
        if val <= hi:
            return val


def _dirichlet_parts(rng: np.random.Generator, alphas: Sequence[float], total: int) -> list[int]:
    """Split ``total`` into integer parts with Dirichlet-distributed
    proportions, rounding by largest remainder."""
    if total == 0:
        return [0] * len(alphas)
    raw = rng.dirichlet(alphas) * total
    parts = np.floor(raw).astype(int)
    frac = raw - parts
    for idx in np.argsort(-frac, kind="stable")[: total - parts.sum()]:
        parts[idx] += 1
    return [int(p) for p in parts]


def _encode_le(x: int, width: int) -> list[int]:
    """Little-endian bits of x, zero-padded to exactly ``width``."""
    return [(x >> i) & 1 for i in range(width)]


def _minimal_le(x: int) -> list[int]:
    return _encode_le(x, max(1, x.bit_length()))


def _decode_le(bits: Sequence[int]) -> int:
    out = 0
    for i, b in enumerate(bits):
        out |= int(b) << i
    return out


def _range_or_error(name: str, lo: int, hi: int, n_min: int, n_max: int) -> tuple[int, int]:
    if lo > hi:
        raise ConfigurationError(
            f"{name}: sampler cannot realize a length in [{n_min}, {n_max}]"
        )
    return lo, hi


def _half_range(n_min: int, n_max: int, extra: int) -> tuple[int, int]:
    """Bounds for m when the produced length is 2*m + extra."""
    lo = (max(0, n_min - extra) + 1) // 2
    hi = (n_max - extra) // 2
    return lo, hi


def _marker_walk(
    symbols: list[int],
    pre_symbols: frozenset[int],
    marker: int,
    completion: Callable[[list[int]], list[int]],
) -> list[frozenset[int]]:
    """Next sets for languages of shape ``u marker f(u)`` with free prefix u:
    anything from the pre-marker set until the marker, then the forced
    completion of the recorded left part, then EOS."""
    pre = frozenset(pre_symbols) | {marker}
    sets: list[frozenset[int]] = []
    expected: list[int] | None = None
    matched = 0
    invalid = False
    for t in range(len(symbols) + 1):
        if invalid:
            sets.append(frozenset())
        elif expected is None:
            sets.append(pre)
        elif matched < len(expected):
            sets.append(frozenset({expected[matched]}))
        else:
            sets.append(frozenset({EOS}))
        if t == len(symbols):
            break
        s = symbols[t]
        if invalid:
            continue
        if expected is None:
            if s == marker:
                expected = completion(symbols[:t])
            elif s not in pre:
                invalid = True
        elif matched < len(expected) and s == expected[matched]:
            matched += 1
        else:
            invalid = True
    return sets


# ---------------------------------------------------------------------------
# regular languages

def _even_pairs_dfa() -> PartialDfa:
    # start (accepting, covers lengths < 2), then one state per (first, last)
    trans = {(0, 0): 1, (0, 1): 4}
    for first in (0, 1):
        for last in (0, 1):
            q = 1 + 2 * first + last
            for b in (0, 1):
                trans[(q, b)] = 1 + 2 * first + b
    return PartialDfa(5, BIT_ALPHABET, trans, 0, [0, 1, 4])


def _build_even_pairs() -> LanguageSpec:
    def member(w: list[int]) -> bool:
        return len(w) < 2 or w[0] == w[-1]

    return LanguageSpec("even-pairs", "R", BIT_ALPHABET, member, dfa=_even_pairs_dfa())


def _build_repeat01() -> LanguageSpec:
    dfa = PartialDfa(2, BIT_ALPHABET, {(0, 0): 1, (1, 1): 0}, 0, [0])

    def member(w: list[int]) -> bool:
        return len(w) % 2 == 0 and all(b == i % 2 for i, b in enumerate(w))

    return LanguageSpec("repeat-01", "R", BIT_ALPHABET, member, dfa=dfa)


def _build_parity() -> LanguageSpec:
    dfa = PartialDfa(2, BIT_ALPHABET, {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 0}, 0, [1])

    def member(w: list[int]) -> bool:
        return sum(w) % 2 == 1

    return LanguageSpec("parity", "R", BIT_ALPHABET, member, dfa=dfa)


def _build_first() -> LanguageSpec:
    dfa = PartialDfa(2, BIT_ALPHABET, {(0, 1): 1, (1, 0): 1, (1, 1): 1}, 0, [1])

    def member(w: list[int]) -> bool:
        return bool(w) and w[0] == 1

    return LanguageSpec("first", "R", BIT_ALPHABET, member, dfa=dfa)


_CYCLE_ALPHABET = Alphabet(["<", ">", "=", "0", "1", "2", "3", "4"])


def _build_cycle_navigation() -> LanguageSpec:
    left, right, stay = 0, 1, 2
    acc = 5
    trans = {}
    for p in range(5):
        trans[(p, left)] = (p - 1) % 5
        trans[(p, right)] = (p + 1) % 5
        trans[(p, stay)] = p
        trans[(p, 3 + p)] = acc
    dfa = PartialDfa(6, _CYCLE_ALPHABET, trans, 0, [acc])

    def member(w: list[int]) -> bool:
        if not w or w[-1] < 3:
            return False
        pos = 0
        for s in w[:-1]:
            if s == left:
                pos -= 1
            elif s == right:
                pos += 1
            elif s != stay:
                return False
        return w[-1] - 3 == pos % 5

    return LanguageSpec("cycle-navigation", "R", _CYCLE_ALPHABET, member, dfa=dfa)


_MOD_ALPHABET = Alphabet(["0", "1", "2", "3", "4", "+", "-", "×", "="])
_MOD_OPS = {5: lambda a, b: (a + b) % 5, 6: lambda a, b: (a - b) % 5, 7: lambda a, b: (a * b) % 5}


def _build_modular_arithmetic() -> LanguageSpec:
    # states: start; have(v); pending(v, op); expect(v); accept
    have = lambda v: 1 + v
    pend = lambda v, op: 6 + 3 * v + op
    expect = lambda v: 21 + v
    acc = 26
    trans = {}
    for d in range(5):
        trans[(0, d)] = have(d)
    for v in range(5):
        for op_idx, op_sym in enumerate((5, 6, 7)):
            trans[(have(v), op_sym)] = pend(v, op_idx)
            for d in range(5):
                trans[(pend(v, op_idx), d)] = have(_MOD_OPS[op_sym](v, d))
        trans[(have(v), 8)] = expect(v)
        trans[(expect(v), v)] = acc
    dfa = PartialDfa(27, _MOD_ALPHABET, trans, 0, [acc])

    def member(w: list[int]) -> bool:
        eq_positions = [i for i, s in enumerate(w) if s == 8]
        if len(eq_positions) != 1:
            return False
        lhs, rhs = w[: eq_positions[0]], w[eq_positions[0] + 1:]
        if len(rhs) != 1 or rhs[0] > 4:
            return False
        if len(lhs) % 2 == 0:
            return False
        if any(s > 4 for s in lhs[::2]) or any(s < 5 or s > 7 for s in lhs[1::2]):
            return False
        value = lhs[0]
        for op_sym, operand in zip(lhs[1::2], lhs[2::2]):
            value = _MOD_OPS[op_sym](value, operand)
        return value == rhs[0]

    return LanguageSpec("modular-arithmetic", "R", _MOD_ALPHABET, member, dfa=dfa)


_DYCK_ALPHABET = Alphabet(["(", ")", "[", "]"])


def _build_dyck() -> LanguageSpec:
    max_depth = 2 + 1  # two bracket kinds, nesting bounded by three
    stacks = []
    for depth in range(max_depth + 1):
        stacks.extend(product((0, 1), repeat=depth))
    index = {s: i for i, s in enumerate(stacks)}
    trans = {}
    for s in stacks:
        q = index[s]
        for kind, (open_sym, close_sym) in enumerate(((0, 1), (2, 3))):
            if len(s) < max_depth:
                trans[(q, open_sym)] = index[s + (kind,)]
            if s and s[-1] == kind:
                trans[(q, close_sym)] = index[s[:-1]]
    dfa = PartialDfa(len(stacks), _DYCK_ALPHABET, trans, index[()], [index[()]])

    def member(w: list[int]) -> bool:
        stack = []
        for s in w:
            if s in (0, 2):
                stack.append(s)
                if len(stack) > max_depth:
                    return False
            elif not stack or stack.pop() != s - 1:
                return False
        return not stack

    return LanguageSpec("dyck-2-3", "R", _DYCK_ALPHABET, member, dfa=dfa)


# ---------------------------------------------------------------------------
# deterministic context-free languages

def _build_majority() -> LanguageSpec:
    def member(w: list[int]) -> bool:
        ones = sum(w)
        return ones > len(w) - ones

    def sample(n_min: int, n_max: int, rng: np.random.Generator) -> list[int]:
        lo, hi = _range_or_error("majority", max(n_min, 1), n_max, n_min, n_max)
        n = int(rng.integers(lo, hi + 1))
        ones = int(rng.integers(n // 2 + 1, n + 1))
        word = np.array([0] * (n - ones) + [1] * ones)
        return [int(b) for b in rng.permutation(word)]

    def next_sets(w: list[int]) -> list[frozenset[int]]:
        out = []
        ones = 0
        for t in range(len(w) + 1):
            cur = {0, 1}
            if ones > t - ones:
                cur.add(EOS)
            out.append(frozenset(cur))
            if t < len(w):
                ones += w[t]
        return out

    return LanguageSpec("majority", "DCF", BIT_ALPHABET, member, sample, next_sets)


_STACK_ALPHABET = Alphabet(["0", "1", "POP", "PUSH", "="])
_POP, _PUSH, _SEQ = 2, 3, 4


def _stack_member(w: list[int]) -> bool:
    i = 0
    stack: list[int] = []
    while i < len(w) and w[i] <= 1:
        stack.append(w[i])
        i += 1
    while i < len(w) and w[i] != _SEQ:
        if w[i] == _POP:
            if not stack:
                return False
            stack.pop()
            i += 1
        elif w[i] == _PUSH:
            if i + 1 >= len(w) or w[i + 1] > 1:
                return False
            stack.append(w[i + 1])
            i += 2
        else:
            return False
    if i == len(w):
        return False
    suffix = w[i + 1:]
    if any(s > 1 for s in suffix):
        return False
    return suffix == stack[::-1]


def _stack_sample(n_min: int, n_max: int, rng: np.random.Generator) -> list[int]:
    lo, hi = _half_range(n_min, n_max, 1)
    _range_or_error("stack-manipulation", lo, hi, n_min, n_max)
    n_stack = int(rng.integers(lo, hi + 1))
    push_lo = (max(0, n_min - 2 * n_stack - 1) + 2) // 3
    push_hi = (n_max - 2 * n_stack - 1) // 3
    _range_or_error("stack-manipulation", push_lo, push_hi, n_min, n_max)
    n_push = int(rng.integers(push_lo, push_hi + 1))
    stack = [int(b) for b in rng.integers(0, 2, size=n_stack)]
    word = list(stack)
    pushes = 0
    while True:
        can_pop = bool(stack)
        action = _PUSH if not can_pop else (_PUSH, _POP)[int(rng.integers(2))]
        if action == _PUSH:
            if pushes == n_push:
                break
            bit = int(rng.integers(2))
            word += [_PUSH, bit]
            stack.append(bit)
            pushes += 1
        else:
            word.append(_POP)
            stack.pop()
    return word + [_SEQ] + stack[::-1]


def _stack_next_sets(w: list[int]) -> list[frozenset[int]]:
    sets: list[frozenset[int]] = []
    phase = "init"  # init | actions | after_push | final
    stack: list[int] = []
    expected: list[int] = []
    matched = 0
    invalid = False
    for t in range(len(w) + 1):
        if invalid:
            sets.append(frozenset())
        elif phase == "init":
            cur = {0, 1, _PUSH, _SEQ}
            if stack:
                cur.add(_POP)
            sets.append(frozenset(cur))
        elif phase == "actions":
            cur = {_PUSH, _SEQ}
            if stack:
                cur.add(_POP)
            sets.append(frozenset(cur))
        elif phase == "after_push":
            sets.append(frozenset({0, 1}))
        elif matched < len(expected):
            sets.append(frozenset({expected[matched]}))
        else:
            sets.append(frozenset({EOS}))
        if t == len(w):
            break
        c = w[t]
        if invalid:
            continue
        if phase in ("init", "actions"):
            if c <= 1 and phase == "init":
                stack.append(c)
            elif c == _POP and stack:
                stack.pop()
                phase = "actions"
            elif c == _PUSH:
                phase = "after_push"
            elif c == _SEQ:
                expected = stack[::-1]
                phase = "final"
            else:
                invalid = True
        elif phase == "after_push":
            if c <= 1:
                stack.append(c)
                phase = "actions"
            else:
                invalid = True
        else:
            if matched < len(expected) and c == expected[matched]:
                matched += 1
            else:
                invalid = True
    return sets


def _build_stack_manipulation() -> LanguageSpec:
    return LanguageSpec(
        "stack-manipulation", "DCF", _STACK_ALPHABET,
        _stack_member, _stack_sample, _stack_next_sets,
    )


_MARK_ALPHABET = Alphabet(["0", "1", "#"])
_HASH = 2


def _marked_family(name: str, class_label: str, complete: Callable[[list[int]], list[int]]):
    def member(w: list[int]) -> bool:
        if w.count(_HASH) != 1:
            return False
        pos = w.index(_HASH)
        return w[pos + 1:] == complete(w[:pos])

    def sample(n_min: int, n_max: int, rng: np.random.Generator) -> list[int]:
        lo, hi = _half_range(n_min, n_max, 1)
        _range_or_error(name, lo, hi, n_min, n_max)
        m = int(rng.integers(lo, hi + 1))
        u = [int(b) for b in rng.integers(0, 2, size=m)]
        return u + [_HASH] + complete(u)

    def next_sets(w: list[int]) -> list[frozenset[int]]:
        return _marker_walk(w, frozenset({0, 1}), _HASH, complete)

    return LanguageSpec(name, class_label, _MARK_ALPHABET, member, sample, next_sets)


def _build_marked_reversal() -> LanguageSpec:
    return _marked_family("marked-reversal", "DCF", lambda u: u[::-1])


def _build_marked_copy() -> LanguageSpec:
    return _marked_family("marked-copy", "CS", lambda u: list(u))


def _build_odds_first() -> LanguageSpec:
    return _marked_family("odds-first", "CS", lambda u: u[::2] + u[1::2])


# ---------------------------------------------------------------------------
# the remaining context-free / context-sensitive languages

def _build_unmarked_reversal() -> LanguageSpec:
    def member(w: list[int]) -> bool:
        return len(w) % 2 == 0 and w == w[::-1]

    def sample(n_min: int, n_max: int, rng: np.random.Generator) -> list[int]:
        lo, hi = _half_range(n_min, n_max, 0)
        _range_or_error("unmarked-reversal", lo, hi, n_min, n_max)
        m = int(rng.integers(lo, hi + 1))
        u = [int(b) for b in rng.integers(0, 2, size=m)]
        return u + u[::-1]

    def next_sets(w: list[int]) -> list[frozenset[int]]:
        out = []
        for t in range(len(w) + 1):
            cur = {0, 1}
            prefix = w[:t]
            if t % 2 == 0 and prefix == prefix[::-1]:
                cur.add(EOS)
            out.append(frozenset(cur))
        return out

    return LanguageSpec("unmarked-reversal", "CF", BIT_ALPHABET, member, sample, next_sets)


_UND_ALPHABET = Alphabet(["0", "1", "_"])
_UND = 2


def _build_missing_duplicate() -> LanguageSpec:
    def member(w: list[int]) -> bool:
        if len(w) % 2 != 0 or w.count(_UND) != 1:
            return False
        filled = [1 if s == _UND else s for s in w]
        half = len(filled) // 2
        return filled[:half] == filled[half:]

    def sample(n_min: int, n_max: int, rng: np.random.Generator) -> list[int]:
        lo = max(1, (n_min + 1) // 2)
        hi = n_max // 2
        _range_or_error("missing-duplicate", lo, hi, n_min, n_max)
        m = int(rng.integers(lo, hi + 1))
        u = [int(b) for b in rng.integers(0, 2, size=m)]
        u[int(rng.integers(m))] = 1
        w = u + u
        ones = [i for i, b in enumerate(w) if b == 1]
        w[ones[int(rng.integers(len(ones)))]] = _UND
        return w

    def next_sets(w: list[int]) -> list[frozenset[int]]:
        out = []
        blanks = 0
        for t in range(len(w) + 1):
            if blanks == 0:
                out.append(frozenset({0, 1, _UND}))
            elif blanks == 1:
                cur = {0, 1}
                if member(w[:t]):
                    cur.add(EOS)
                out.append(frozenset(cur))
            else:
                out.append(frozenset())
            if t < len(w) and w[t] == _UND:
                blanks += 1
        return out

    return LanguageSpec("missing-duplicate", "CS", _UND_ALPHABET, member, sample, next_sets)


def _arith_spec(name: str, alphabet: Alphabet, op_sym: int, eq_sym: int,
                combine: Callable[[int, int], int], sampler) -> LanguageSpec:
    def member(w: list[int]) -> bool:
        if w.count(op_sym) != 1 or w.count(eq_sym) != 1:
            return False
        op_pos, eq_pos = w.index(op_sym), w.index(eq_sym)
        if op_pos > eq_pos:
            return False
        x_bits, y_bits, z_bits = w[:op_pos], w[op_pos + 1:eq_pos], w[eq_pos + 1:]
        if not x_bits or not y_bits or not z_bits:
            return False
        if any(s > 1 for s in x_bits + y_bits + z_bits):
            return False
        return combine(_decode_le(x_bits), _decode_le(y_bits)) == _decode_le(z_bits)

    def next_sets(w: list[int]) -> list[frozenset[int]]:
        sets: list[frozenset[int]] = []
        phase = "x"
        x_bits: list[int] = []
        y_bits: list[int] = []
        expected: list[int] = []
        matched = 0
        invalid = False
        for t in range(len(w) + 1):
            if invalid:
                sets.append(frozenset())
            elif phase == "x":
                sets.append(frozenset({0, 1, op_sym}) if x_bits else frozenset({0, 1}))
            elif phase == "y":
                sets.append(frozenset({0, 1, eq_sym}) if y_bits else frozenset({0, 1}))
            elif matched < len(expected):
                sets.append(frozenset({expected[matched]}))
            else:
                sets.append(frozenset({0, EOS}))
            if t == len(w):
                break
            c = w[t]
            if invalid:
                continue
            if phase == "x":
                if c <= 1:
                    x_bits.append(c)
                elif c == op_sym and x_bits:
                    phase = "y"
                else:
                    invalid = True
            elif phase == "y":
                if c <= 1:
                    y_bits.append(c)
                elif c == eq_sym and y_bits:
                    expected = _minimal_le(combine(_decode_le(x_bits), _decode_le(y_bits)))
                    phase = "z"
                else:
                    invalid = True
            else:
                if matched < len(expected) and c == expected[matched]:
                    matched += 1
                elif matched >= len(expected) and c == 0:
                    pass
                else:
                    invalid = True
        return sets

    return LanguageSpec(name, "CS", alphabet, member, sampler, next_sets)


_ADD_ALPHABET = Alphabet(["0", "1", "+", "="])
_MUL_ALPHABET = Alphabet(["0", "1", "×", "="])


def _addition_sampler(n_min: int, n_max: int, rng: np.random.Generator) -> list[int]:
    lo, hi = _range_or_error("binary-addition", max(5, n_min), n_max, n_min, n_max)
    n = int(rng.integers(lo, hi + 1))
    parts = _dirichlet_parts(rng, (1.0, 1.0, 1.0), n - 5)
    n_x, n_y, n_z = (p + 1 for p in parts)
    n_x, n_y = min(n_x, n_y), max(n_x, n_y)
    x = _uniform_int(rng, min(2 ** n_x - 1, 2 ** n_z - 1))
    y = _uniform_int(rng, min(2 ** n_y - 1, 2 ** n_z - 1 - x))
    u_x, u_y = _encode_le(x, n_x), _encode_le(y, n_y)
    if int(rng.integers(2)):
        u_x, u_y = u_y, u_x
    return u_x + [2] + u_y + [3] + _encode_le(x + y, n_z)


def _multiplication_sampler(n_min: int, n_max: int, rng: np.random.Generator) -> list[int]:
    lo, hi = _range_or_error("binary-multiplication", max(5, n_min), n_max, n_min, n_max)
    n = int(rng.integers(lo, hi + 1))
    parts = _dirichlet_parts(rng, (1.0, 1.0, 2.0), n - 5)
    n_x, n_y, n_z = (p + 1 for p in parts)
    n_x, n_y = min(n_x, n_y), max(n_x, n_y)
    x = _uniform_int(rng, 2 ** n_x - 1)
    if x > 0:
        y = _uniform_int(rng, min(2 ** n_y - 1, (2 ** n_z - 1) // x))
    else:
        y = _uniform_int(rng, 2 ** n_y - 1)
    u_x, u_y = _encode_le(x, n_x), _encode_le(y, n_y)
    if int(rng.integers(2)):
        u_x, u_y = u_y, u_x
    return u_x + [2] + u_y + [3] + _encode_le(x * y, n_z)


def _build_binary_addition() -> LanguageSpec:
    return _arith_spec(
        "binary-addition", _ADD_ALPHABET, 2, 3, lambda a, b: a + b, _addition_sampler
    )


def _build_binary_multiplication() -> LanguageSpec:
    return _arith_spec(
        "binary-multiplication", _MUL_ALPHABET, 2, 3, lambda a, b: a * b,
        _multiplication_sampler,
    )


_SQRT_ALPHABET = Alphabet(["0", "1", "="])


def _build_compute_sqrt() -> LanguageSpec:
    eq = 2

    def member(w: list[int]) -> bool:
        if w.count(eq) != 1:
            return False
        pos = w.index(eq)
        x_bits, z_bits = w[:pos], w[pos + 1:]
        if not x_bits or not z_bits:
            return False
        return math.isqrt(_decode_le(x_bits)) == _decode_le(z_bits)

    def sample(n_min: int, n_max: int, rng: np.random.Generator) -> list[int]:
        lo, hi = _range_or_error("compute-sqrt", max(3, n_min), n_max, n_min, n_max)
        n = int(rng.integers(lo, hi + 1))
        parts = _dirichlet_parts(rng, (2.0, 1.0), n - 3)
        n_x, n_z = parts[0] + 1, parts[1] + 1
        x = _uniform_int(rng, min(2 ** n_x - 1, 2 ** (2 * n_z) - 1))
        return _encode_le(x, n_x) + [eq] + _encode_le(math.isqrt(x), n_z)

    def next_sets(w: list[int]) -> list[frozenset[int]]:
        sets: list[frozenset[int]] = []
        phase = "x"
        x_bits: list[int] = []
        expected: list[int] = []
        matched = 0
        invalid = False
        for t in range(len(w) + 1):
            if invalid:
                sets.append(frozenset())
            elif phase == "x":
                sets.append(frozenset({0, 1, eq}) if x_bits else frozenset({0, 1}))
            elif matched < len(expected):
                sets.append(frozenset({expected[matched]}))
            else:
                sets.append(frozenset({0, EOS}))
            if t == len(w):
                break
            c = w[t]
            if invalid:
                continue
            if phase == "x":
                if c <= 1:
                    x_bits.append(c)
                elif c == eq and x_bits:
                    expected = _minimal_le(math.isqrt(_decode_le(x_bits)))
                    phase = "z"
                else:
                    invalid = True
            else:
                if matched < len(expected) and c == expected[matched]:
                    matched += 1
                elif matched >= len(expected) and c == 0:
                    pass
                else:
                    invalid = True
        return sets

    return LanguageSpec("compute-sqrt", "CS", _SQRT_ALPHABET, member, sample, next_sets)


_SORT_ALPHABET = Alphabet(["0", "1", "2", "3", "4", "5", "#"])
_SORT_HASH = 6


def _build_bucket_sort() -> LanguageSpec:
    def member(w: list[int]) -> bool:
        if w.count(_SORT_HASH) != 1:
            return False
        pos = w.index(_SORT_HASH)
        return w[pos + 1:] == sorted(w[:pos])

    def sample(n_min: int, n_max: int, rng: np.random.Generator) -> list[int]:
        lo, hi = _half_range(n_min, n_max, 1)
        _range_or_error("bucket-sort", lo, hi, n_min, n_max)
        m = int(rng.integers(lo, hi + 1))
        u = [int(d) for d in rng.integers(1, 6, size=m)]
        return u + [_SORT_HASH] + sorted(u)

    def next_sets(w: list[int]) -> list[frozenset[int]]:
        return _marker_walk(w, frozenset(range(6)), _SORT_HASH, sorted)

    return LanguageSpec("bucket-sort", "CS", _SORT_ALPHABET, member, sample, next_sets)


# ---------------------------------------------------------------------------
# registry

_BUILDERS: dict[str, Callable[[], LanguageSpec]] = {
    "even-pairs": _build_even_pairs,
    "repeat-01": _build_repeat01,
    "parity": _build_parity,
    "cycle-navigation": _build_cycle_navigation,
    "modular-arithmetic": _build_modular_arithmetic,
    "dyck-2-3": _build_dyck,
    "first": _build_first,
    "majority": _build_majority,
    "stack-manipulation": _build_stack_manipulation,
    "marked-reversal": _build_marked_reversal,
    "unmarked-reversal": _build_unmarked_reversal,
    "marked-copy": _build_marked_copy,
    "missing-duplicate": _build_missing_duplicate,
    "odds-first": _build_odds_first,
    "binary-addition": _build_binary_addition,
    "binary-multiplication": _build_binary_multiplication,
    "compute-sqrt": _build_compute_sqrt,
    "bucket-sort": _build_bucket_sort,
}

LANGUAGE_NAMES: tuple[str, ...] = tuple(_BUILDERS)
REGULAR_NAMES: tuple[str, ...] = (
    "even-pairs", "repeat-01", "parity", "cycle-navigation",
    "modular-arithmetic", "dyck-2-3", "first",
)

_CACHE: dict[str, LanguageSpec] = {}


def get_language(name: str) -> LanguageSpec:
    if name not in _BUILDERS:
        raise ConfigurationError(
            f"unknown language {name!r}; known: {', '.join(LANGUAGE_NAMES)}"
        )
    if name not in _CACHE:
        _CACHE[name] = _BUILDERS[name]()
    return _CACHE[name]


def build_regular_dfa(name: str) -> PartialDfa:
    """The trim DFA of one of the regular languages."""
    lang = get_language(name)
    if lang.dfa is None:
        raise ConfigurationError(f"{name} is not regular; no DFA is available")
    return lang.dfa

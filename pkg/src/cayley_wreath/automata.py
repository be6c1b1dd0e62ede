"""Finite automata over indexed alphabets and synchronous two-tape relations.

Automata are immutable values.  States are the integers ``0..n_states-1``;
transitions map ``(state, symbol index)`` to a tuple of successor states.
Words are tuples of symbol *names*; the helpers translate to indices.

Two-tape relations are ordinary automata over a :class:`PairAlphabet`,
reading the convolution of a pair of words: the shorter word is padded at
the end with the padding symbol (``PAD``, printed ``~``).
"""

from __future__ import annotations

import json
import weakref
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product as _cartesian
from typing import Iterable, Sequence

PAD = None
PAD_NAME = "~"

Word = tuple


class AutomatonError(Exception):
    pass


class AlphabetMismatch(AutomatonError, ValueError):
    pass


class PaddingViolation(AutomatonError, ValueError):
    pass


class NotPairAlphabet(AutomatonError, TypeError):
    pass


class NoImage(AutomatonError, LookupError):
    """The word is outside the domain of the relation."""


class NotFunctional(AutomatonError):
    """The relation has two or more images for a word."""


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError(f"duplicate symbol names in {self.symbols}")
        for s in self.symbols:
            if not isinstance(s, str) or not s or s.isspace():
                raise ValueError(f"bad symbol name {s!r}")
            if s == PAD_NAME:
                raise ValueError("the padding symbol cannot be an alphabet member")

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.symbols)}

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ValueError(f"symbol {name!r} not in alphabet") from None

    def encode(self, word: Iterable[str]) -> tuple[int, ...]:
        return tuple(self.index(s) for s in word)

    def decode(self, indices: Iterable[int]) -> Word:
        return tuple(self.symbols[i] for i in indices)


@dataclass(frozen=True)
class PairAlphabet(Alphabet):
    """All pairs over ``base ∪ {PAD}`` except ``(PAD, PAD)``.

    Pair ``(a, b)`` has index ``a*(n+1) + b`` where PAD counts as index n.
    """

    base: Alphabet = None

    @classmethod
    def over(cls, base: Alphabet) -> "PairAlphabet":
        for s in base:
            if "|" in s:
                raise ValueError(f"symbol {s!r} cannot be paired (contains '|')")
        names = list(base.symbols) + [PAD_NAME]
        pairs = [f"{a}|{b}" for a in names for b in names][:-1]
        return cls(tuple(pairs), base)

    def components(self, idx: int) -> tuple[int | None, int | None]:
        n = len(self.base) + 1
        a, b = divmod(idx, n)
        return (None if a == n - 1 else a, None if b == n - 1 else b)

    def pair_index(self, a: int | None, b: int | None) -> int:
        n = len(self.base)
        if a is None and b is None:
            raise PaddingViolation("(PAD, PAD) is not a pair symbol")
        return (n if a is None else a) * (n + 1) + (n if b is None else b)


@dataclass(frozen=True, eq=False)
class FiniteAutomaton:
    alphabet: Alphabet
    n_states: int
    initial: frozenset
    accepting: frozenset
    delta: tuple  # per state: dict symbol -> tuple of successors
    deterministic: bool = False

    def __post_init__(self):
        k = len(self.alphabet)
        for s, row in enumerate(self.delta):
            for sym, succ in row.items():
                if not 0 <= sym < k:
                    raise ValueError(f"transition symbol {sym} outside alphabet")
                if self.deterministic and len(succ) != 1:
                    raise ValueError(f"state {s} is not deterministic on {sym}")
        if len(self.delta) != self.n_states:
            raise ValueError("transition table does not match state count")
        if self.deterministic and len(self.initial) != 1:
            raise ValueError("a deterministic automaton needs exactly one initial state")

    @classmethod
    def build(cls, alphabet, n_states, initial, accepting, transitions, deterministic=None):
        rows = [defaultdict(set) for _ in range(n_states)]
        for src, sym, dst in transitions:
            rows[src][sym].add(dst)
        delta = tuple({sym: tuple(sorted(d)) for sym, d in row.items()} for row in rows)
        if deterministic is None:
            deterministic = len(set(initial)) == 1 and all(
                len(d) == 1 for row in delta for d in row.values())
        return cls(alphabet, n_states, frozenset(initial), frozenset(accepting), delta,
                   deterministic)

    def transitions(self):
        for s, row in enumerate(self.delta):
            for sym, succ in row.items():
                for d in succ:
                    yield s, sym, d

    @property
    def n_transitions(self) -> int:
        return sum(len(d) for row in self.delta for d in row.values())

    @cached_property
    def table(self) -> list[dict[int, int]]:
        """Deterministic transition table (``state -> {symbol: state}``)."""
        if not self.deterministic:
            raise AutomatonError("table is only defined for deterministic automata")
        return [{sym: succ[0] for sym, succ in row.items()} for row in self.delta]

    @cached_property
    def start(self) -> int:
        (s,) = self.initial
        return s

    def run(self, indices: Iterable[int]) -> frozenset:
        current = self.initial
        for sym in indices:
            current = frozenset(d for s in current for d in self.delta[s].get(sym, ()))
            if not current:
                break
        return current

    def accepts_indices(self, indices: Iterable[int]) -> bool:
        return not self.accepting.isdisjoint(self.run(indices))

    def accepts(self, word: Iterable[str]) -> bool:
        try:
            indices = self.alphabet.encode(word)
        except ValueError:
            return False
        return self.accepts_indices(indices)

    def __repr__(self):
        kind = "DFA" if self.deterministic else "NFA"
        return f"<{kind} states={self.n_states} |Σ|={len(self.alphabet)}>"


# ---------------------------------------------------------------------------
# construction helpers


def from_words(alphabet: Alphabet, words: Iterable[Sequence[str]]) -> FiniteAutomaton:
    """Trie automaton accepting exactly the given finite set of words."""
    children: list[dict[int, int]] = [{}]
    accepting = set()
    for w in words:
        s = 0
        for sym in alphabet.encode(w):
            nxt = children[s].get(sym)
            if nxt is None:
                nxt = len(children)
                children.append({})
                children[s][sym] = nxt
            s = nxt
        accepting.add(s)
    trans = [(s, sym, d) for s, row in enumerate(children) for sym, d in row.items()]
    return FiniteAutomaton.build(alphabet, len(children), {0}, accepting, trans, True)


def universal(alphabet: Alphabet) -> FiniteAutomaton:
    return FiniteAutomaton.build(alphabet, 1, {0}, {0},
                                 [(0, i, 0) for i in range(len(alphabet))], True)


def empty(alphabet: Alphabet) -> FiniteAutomaton:
    return FiniteAutomaton.build(alphabet, 1, {0}, (), (), True)


# ---------------------------------------------------------------------------
# reachability


def _reachable(a: FiniteAutomaton) -> set[int]:
    seen = set(a.initial)
    stack = list(seen)
    while stack:
        s = stack.pop()
        for succ in a.delta[s].values():
            for d in succ:
                if d not in seen:
                    seen.add(d)
                    stack.append(d)
    return seen


def _coreachable(a: FiniteAutomaton) -> set[int]:
    pred = defaultdict(set)
    for s, _, d in a.transitions():
        pred[d].add(s)
    seen = set(a.accepting)
    stack = list(seen)
    while stack:
        s = stack.pop()
        for p in pred[s]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


def trim(a: FiniteAutomaton) -> FiniteAutomaton:
    """Drop states that are unreachable or cannot reach acceptance."""
    keep = _reachable(a) & _coreachable(a)
    if not keep:
        return empty(a.alphabet)
    order = sorted(keep)
    renum = {s: i for i, s in enumerate(order)}
    trans = [(renum[s], sym, renum[d]) for s, sym, d in a.transitions()
             if s in keep and d in keep]
    init = [renum[s] for s in a.initial if s in keep]
    if not init:
        return empty(a.alphabet)
    return FiniteAutomaton.build(a.alphabet, len(order), init,
                                 [renum[s] for s in a.accepting if s in keep], trans,
                                 a.deterministic or None)


def is_empty(a: FiniteAutomaton) -> bool:
    return a.accepting.isdisjoint(_reachable(a))


# ---------------------------------------------------------------------------
# determinization and minimization


def determinize(a: FiniteAutomaton) -> FiniteAutomaton:
    start = frozenset(a.initial)
    index = {start: 0}
    queue = deque([start])
    trans = []
    accepting = []
    delta = a.delta
    while queue:
        subset = queue.popleft()
        src = index[subset]
        if not a.accepting.isdisjoint(subset):
            accepting.append(src)
        moves = defaultdict(set)
        for s in subset:
            for sym, succ in delta[s].items():
                moves[sym].update(succ)
        for sym in sorted(moves):
            target = frozenset(moves[sym])
            dst = index.get(target)
            if dst is None:
                dst = index[target] = len(index)
                queue.append(target)
            trans.append((src, sym, dst))
    return FiniteAutomaton.build(a.alphabet, len(index), {0}, accepting, trans, True)


def _hopcroft(n: int, table: list[dict[int, int]], accepting: frozenset) -> list[int]:
    """Coarsest stable partition of a trim partial DFA; returns block ids.

    Missing transitions go to an implicit sink whose block never acts as a
    splitter, which is sound because the initial worklist may omit one block.
    """
    pred: list[dict[int, list[int]]] = [{} for _ in range(n)]
    for s in range(n):
        for sym, d in table[s].items():
            pred[d].setdefault(sym, []).append(s)
    fin = {s for s in range(n) if s in accepting}
    blocks = [b for b in (fin, set(range(n)) - fin) if b]
    block_of = [0] * n
    for i, b in enumerate(blocks):
        for s in b:
            block_of[s] = i
    # splitting also depends on which symbols are defined
    by_signature = defaultdict(list)
    for s in range(n):
        by_signature[(block_of[s], frozenset(table[s]))].append(s)
    blocks = [set(v) for v in by_signature.values()]
    for i, b in enumerate(blocks):
        for s in b:
            block_of[s] = i
    work = list(range(len(blocks)))
    in_work = set(work)
    while work:
        a = work.pop()
        in_work.discard(a)
        by_sym = defaultdict(set)
        for s in blocks[a]:
            for sym, srcs in pred[s].items():
                by_sym[sym].update(srcs)
        for sym, X in by_sym.items():
            touched = defaultdict(list)
            for s in X:
                touched[block_of[s]].append(s)
            for b, members in touched.items():
                if len(members) == len(blocks[b]):
                    continue
                inter = set(members)
                rest = blocks[b] - inter
                small, large = (inter, rest) if len(inter) <= len(rest) else (rest, inter)
                blocks[b] = large
                nb = len(blocks)
                blocks.append(small)
                for s in small:
                    block_of[s] = nb
                work.append(nb)
                in_work.add(nb)
    return block_of


def minimize(a: FiniteAutomaton) -> FiniteAutomaton:
    """Minimal trim DFA with canonical (BFS, symbol-ordered) state numbering.

    The empty language yields a single non-accepting state with no moves.
    """
    if not a.deterministic:
        a = determinize(a)
    a = trim(a)
    if not a.accepting:
        return empty(a.alphabet)
    table = a.table
    block_of = _hopcroft(a.n_states, table, a.accepting)
    start = block_of[a.start]
    order = {start: 0}
    queue = deque([a.start])
    rep = {start: a.start}
    for s in range(a.n_states):
        rep.setdefault(block_of[s], s)
    trans = []
    while queue:
        s = queue.popleft()
        src = order[block_of[s]]
        for sym in sorted(table[s]):
            d = table[s][sym]
            bd = block_of[d]
            if bd not in order:
                order[bd] = len(order)
                queue.append(rep[bd])
            trans.append((src, sym, order[bd]))
    accepting = {order[block_of[s]] for s in a.accepting}
    return FiniteAutomaton.build(a.alphabet, len(order), {0}, accepting, trans, True)


def structurally_equal(a: FiniteAutomaton, b: FiniteAutomaton) -> bool:
    return (a.alphabet == b.alphabet and a.n_states == b.n_states
            and a.initial == b.initial and a.accepting == b.accepting
            and a.delta == b.delta)


# ---------------------------------------------------------------------------
# boolean algebra

_MODES = {
    "intersect": lambda x, y: x and y,
    "union": lambda x, y: x or y,
    "difference": lambda x, y: x and not y,
    "xor": lambda x, y: x != y,
}


def product(a: FiniteAutomaton, b: FiniteAutomaton, mode: str = "intersect") -> FiniteAutomaton:
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch("product of automata over different alphabets")
    try:
        combine = _MODES[mode]
    except KeyError:
        raise ValueError(f"unknown product mode {mode!r}") from None
    if mode == "intersect":
        return _nfa_intersection(a, b)
    a, b = determinize(a), determinize(b)
    ta, tb = a.table, b.table
    start = (a.start, b.start)
    index = {start: 0}
    queue = deque([start])
    trans, accepting = [], []
    while queue:
        pa, pb = pair = queue.popleft()
        src = index[pair]
        if combine(pa is not None and pa in a.accepting, pb is not None and pb in b.accepting):
            accepting.append(src)
        syms = set(ta[pa] if pa is not None else ()) | set(tb[pb] if pb is not None else ())
        for sym in sorted(syms):
            nxt = (ta[pa].get(sym) if pa is not None else None,
                   tb[pb].get(sym) if pb is not None else None)
            dst = index.get(nxt)
            if dst is None:
                dst = index[nxt] = len(index)
                queue.append(nxt)
            trans.append((src, sym, dst))
    return FiniteAutomaton.build(a.alphabet, len(index), {0}, accepting, trans, True)


def _nfa_intersection(a: FiniteAutomaton, b: FiniteAutomaton) -> FiniteAutomaton:
    starts = [(p, q) for p in sorted(a.initial) for q in sorted(b.initial)]
    index = {s: i for i, s in enumerate(starts)}
    queue = deque(starts)
    trans, accepting = [], []
    while queue:
        pa, pb = pair = queue.popleft()
        src = index[pair]
        if pa in a.accepting and pb in b.accepting:
            accepting.append(src)
        rb = b.delta[pb]
        for sym, succ_a in a.delta[pa].items():
            succ_b = rb.get(sym)
            if not succ_b:
                continue
            for nxt in _cartesian(succ_a, succ_b):
                dst = index.get(nxt)
                if dst is None:
                    dst = index[nxt] = len(index)
                    queue.append(nxt)
                trans.append((src, sym, dst))
    if not index:
        return empty(a.alphabet)
    return FiniteAutomaton.build(a.alphabet, len(index), range(len(starts)), accepting, trans)


def complement(a: FiniteAutomaton) -> FiniteAutomaton:
    a = determinize(a)
    k = len(a.alphabet)
    sink = a.n_states
    table = a.table
    trans = [(s, sym, table[s].get(sym, sink)) for s in range(a.n_states) for sym in range(k)]
    trans += [(sink, sym, sink) for sym in range(k)]
    accepting = set(range(a.n_states + 1)) - set(a.accepting)
    return FiniteAutomaton.build(a.alphabet, a.n_states + 1, {0}, accepting, trans, True)


def equivalent(a: FiniteAutomaton, b: FiniteAutomaton) -> bool:
    return is_empty(product(a, b, "xor"))


# ---------------------------------------------------------------------------
# enumeration


def enumerate_words(a: FiniteAutomaton, max_len: int) -> list[Word]:
    """Accepted words of length <= max_len, ordered by length then symbol index."""
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    a = trim(a)
    layer = [((), frozenset(a.initial))]
    out = []
    for length in range(max_len + 1):
        for w, states in layer:
            if not a.accepting.isdisjoint(states):
                out.append(a.alphabet.decode(w))
        if length == max_len:
            break
        nxt = []
        for w, states in layer:
            moves = defaultdict(set)
            for s in states:
                for sym, succ in a.delta[s].items():
                    moves[sym].update(succ)
            for sym in sorted(moves):
                nxt.append((w + (sym,), frozenset(moves[sym])))
        layer = nxt
    return out


# ---------------------------------------------------------------------------
# convolution and relations


def convolve(u: Sequence, v: Sequence) -> list[tuple]:
    n = max(len(u), len(v))
    return [(u[i] if i < len(u) else PAD, v[i] if i < len(v) else PAD) for i in range(n)]


def deconvolve(cw: Iterable[tuple]) -> tuple[Word, Word]:
    u, v = [], []
    ended = [False, False]
    for pair in cw:
        if len(pair) != 2 or pair == (PAD, PAD):
            raise PaddingViolation(f"invalid convolution symbol {pair!r}")
        for side, (sym, out) in enumerate(zip(pair, (u, v))):
            if sym is PAD:
                ended[side] = True
            elif ended[side]:
                raise PaddingViolation("symbol after padding in a convolution word")
            else:
                out.append(sym)
    return tuple(u), tuple(v)


def pair_word(alphabet: PairAlphabet, u: Sequence[str], v: Sequence[str]) -> tuple[int, ...]:
    """Index sequence of ``convolve(u, v)`` over ``alphabet``."""
    base = alphabet.base
    return tuple(alphabet.pair_index(None if a is PAD else base.index(a),
                                     None if b is PAD else base.index(b))
                 for a, b in convolve(u, v))


def accepts_pair(r: FiniteAutomaton, u: Sequence[str], v: Sequence[str]) -> bool:
    _require_pairs(r)
    try:
        w = pair_word(r.alphabet, u, v)
    except ValueError:
        return False
    return r.accepts_indices(w)


def enumerate_pairs(r: FiniteAutomaton, max_len: int) -> list[tuple[Word, Word]]:
    _require_pairs(r)
    return [deconvolve(tuple(None if x == PAD_NAME else x for x in sym.split("|"))
                       for sym in w)
            for w in enumerate_words(r, max_len)]


def _require_pairs(r: FiniteAutomaton) -> PairAlphabet:
    if not isinstance(r.alphabet, PairAlphabet):
        raise NotPairAlphabet("expected an automaton over a pair alphabet")
    return r.alphabet


def convolution_language(a: FiniteAutomaton, b: FiniteAutomaton) -> FiniteAutomaton:
    """DFA over pairs accepting convolve(u, v) for u in L(a), v in L(b)."""
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch("convolution of automata over different alphabets")
    a, b = determinize(a), determinize(b)
    pa = PairAlphabet.over(a.alphabet)
    ta, tb = a.table, b.table
    start = (a.start, b.start, False, False)
    index = {start: 0}
    queue = deque([start])
    trans, accepting = [], []
    while queue:
        state = queue.popleft()
        p, q, e1, e2 = state
        src = index[state]
        if p in a.accepting and q in b.accepting:
            accepting.append(src)
        left = [(None, p)] if e1 else list(ta[p].items())
        right = [(None, q)] if e2 else list(tb[q].items())
        if not e1 and p in a.accepting:
            left.append((None, p))
        if not e2 and q in b.accepting:
            right.append((None, q))
        for (x, p2), (y, q2) in _cartesian(left, right):
            if x is None and y is None:
                continue
            nxt = (p2, q2, e1 or x is None, e2 or y is None)
            dst = index.get(nxt)
            if dst is None:
                dst = index[nxt] = len(index)
                queue.append(nxt)
            trans.append((src, pa.pair_index(x, y), dst))
    return FiniteAutomaton.build(pa, len(index), {0}, accepting, trans, True)


def relation_transpose(r: FiniteAutomaton) -> FiniteAutomaton:
    pa = _require_pairs(r)
    swap = []
    for i in range(len(pa)):
        x, y = pa.components(i)
        swap.append(pa.pair_index(y, x))
    trans = [(s, swap[sym], d) for s, sym, d in r.transitions()]
    return FiniteAutomaton.build(pa, r.n_states, r.initial, r.accepting, trans,
                                 r.deterministic)


def identity_relation(alphabet: Alphabet) -> FiniteAutomaton:
    pa = PairAlphabet.over(alphabet)
    return FiniteAutomaton.build(pa, 1, {0}, {0},
                                 [(0, pa.pair_index(i, i), 0) for i in range(len(alphabet))],
                                 True)


_INFINITE = 3


@dataclass(eq=False)
class _RelationIndex:
    """Per-state moves of a deterministic relation keyed by first-tape symbol.

    ``tails[q]`` counts accepted second-tape continuations from ``q`` once the
    first tape is exhausted: 0, 1, 2 (meaning two or more) or ``_INFINITE``.
    """

    by_first: list = field(default_factory=list)
    pad_moves: list = field(default_factory=list)
    tails: list = field(default_factory=list)

    @classmethod
    def of(cls, r: FiniteAutomaton) -> "_RelationIndex":
        pa = r.alphabet
        idx = cls()
        for row in r.table:
            first = defaultdict(list)
            pad = []
            for sym, d in row.items():
                x, y = pa.components(sym)
                if x is None:
                    pad.append((y, d))
                else:
                    first[x].append((y, d))
            idx.by_first.append(dict(first))
            idx.pad_moves.append(pad)
        idx.tails = _count_tails(r.n_states, idx.pad_moves, r.accepting)
        return idx


def _count_tails(n: int, pad_moves: list, accepting: frozenset) -> list[int]:
    pred = defaultdict(list)
    for q in range(n):
        for _, d in pad_moves[q]:
            pred[d].append(q)
    live = set(accepting)
    stack = list(live)
    while stack:
        q = stack.pop()
        for p in pred[q]:
            if p not in live:
                live.add(p)
                stack.append(p)
    # peel live states whose live successors are all resolved; leftovers reach a cycle
    out_deg = {q: sum(1 for _, d in pad_moves[q] if d in live) for q in live}
    ready = [q for q, k in out_deg.items() if k == 0]
    counts = [0] * n
    resolved = set()
    while ready:
        q = ready.pop()
        resolved.add(q)
        total = (1 if q in accepting else 0) + sum(counts[d] for _, d in pad_moves[q] if d in live)
        counts[q] = min(total, 2)
        for p in pred[q]:
            if p in live:
                out_deg[p] -= 1
                if out_deg[p] == 0:
                    ready.append(p)
    for q in live - resolved:
        counts[q] = _INFINITE
    return counts


_INDEX_CACHE: "weakref.WeakKeyDictionary[FiniteAutomaton, _RelationIndex]" = (
    weakref.WeakKeyDictionary())


def _relation_index(r: FiniteAutomaton) -> _RelationIndex:
    idx = _INDEX_CACHE.get(r)
    if idx is None:
        idx = _INDEX_CACHE[r] = _RelationIndex.of(r)
    return idx


def apply_relation(r: FiniteAutomaton, u: Sequence[str]) -> Word:
    """The unique v with convolve(u, v) accepted by r.

    Walks the layers of ``r`` restricted to ``u`` on the first tape, counts
    accepting witnesses (capped at two) and reconstructs the unique one.
    """
    pa = _require_pairs(r)
    if not r.deterministic:
        r = minimize(r)
    base = pa.base
    try:
        ui = base.encode(u)
    except ValueError:
        raise NoImage(f"{' '.join(u)!r} uses symbols outside the relation's alphabet") from None
    idx = _relation_index(r)
    acc = r.accepting
    n = len(ui)

    # forward layers over nodes (state, second tape ended)
    layers = [{(r.start, False)}]
    for i in range(n):
        nxt = set()
        for q, ended in layers[-1]:
            for y, d in idx.by_first[q].get(ui[i], ()):
                if y is None:
                    nxt.add((d, True))
                elif not ended:
                    nxt.add((d, False))
        if not nxt:
            raise NoImage(f"{' '.join(u)!r} has no image")
        layers.append(nxt)

    counts: list[dict] = [dict() for _ in range(n + 1)]
    for node in layers[n]:
        q, ended = node
        c = (1 if q in acc else 0) if ended else idx.tails[q]
        if c == _INFINITE:
            raise NotFunctional(f"{' '.join(u)!r} has infinitely many images")
        counts[n][node] = c
    for i in range(n - 1, -1, -1):
        nxt_counts = counts[i + 1]
        for node in layers[i]:
            q, ended = node
            total = 0
            for y, d in idx.by_first[q].get(ui[i], ()):
                if y is None:
                    total += nxt_counts.get((d, True), 0)
                elif not ended:
                    total += nxt_counts.get((d, False), 0)
            counts[i][node] = min(total, 2)
    found = counts[0][(r.start, False)]
    if found == 0:
        raise NoImage(f"{' '.join(u)!r} has no image")
    if found > 1:
        raise NotFunctional(f"{' '.join(u)!r} has more than one image")

    out = []
    q, ended = r.start, False
    for i in range(n):
        for y, d in idx.by_first[q].get(ui[i], ()):
            if y is not None and ended:
                continue
            node = (d, y is None)
            if counts[i + 1].get(node, 0):
                if y is not None:
                    out.append(y)
                q, ended = node
                break
    if not ended:
        while q not in acc:
            for y, d in idx.pad_moves[q]:
                if idx.tails[d]:
                    out.append(y)
                    q = d
                    break
    return base.decode(out)


# ---------------------------------------------------------------------------
# serialization


def to_dict(a: FiniteAutomaton) -> dict:
    return {
        "alphabet": list(a.alphabet.symbols),
        "pair_alphabet": isinstance(a.alphabet, PairAlphabet),
        "states": a.n_states,
        "initial": sorted(a.initial),
        "accepting": sorted(a.accepting),
        "transitions": [[s, sym, d] for s, sym, d in a.transitions()],
        "deterministic": a.deterministic,
    }


def from_dict(doc: dict) -> FiniteAutomaton:
    names = doc["alphabet"]
    if doc.get("pair_alphabet") or (names and all("|" in n for n in names)):
        base_names = []
        for n in names:
            x = n.split("|")[0]
            if x != PAD_NAME and x not in base_names:
                base_names.append(x)
        alphabet = PairAlphabet.over(Alphabet(tuple(base_names)))
        if list(alphabet.symbols) != list(names):
            raise ValueError("pair alphabet symbols are not in canonical order")
    else:
        alphabet = Alphabet(tuple(names))
    return FiniteAutomaton.build(alphabet, doc["states"], doc["initial"], doc["accepting"],
                                 [tuple(t) for t in doc["transitions"]],
                                 doc.get("deterministic"))


def dumps(a: FiniteAutomaton) -> str:
    return json.dumps(to_dict(a))


def loads(text: str) -> FiniteAutomaton:
    return from_dict(json.loads(text))

"""Synchronous two-tape automata from bounded-lag transducers.

A transducer reads the first tape and writes the second; each move consumes
at most one input symbol and produces at most one output symbol.  When the
difference between consumed and produced symbols stays within ``max_lag``
along every accepting run, the relation is synchronous, and reading the two
tapes in lock-step only ever needs a buffer of ``max_lag`` unmatched symbols.
"""

from __future__ import annotations

from collections import deque
from typing import Hashable, Iterable, Protocol

from .automata import Alphabet, FiniteAutomaton, PairAlphabet, determinize, minimize

Move = tuple[bool, bool, Hashable]


class Transducer(Protocol):
    def initial_states(self) -> Iterable[Hashable]: ...

    def moves(self, state, a: int | None, b: int | None) -> Iterable[Move]:
        """Moves from ``state`` given the next pending input ``a`` and output ``b``.

        Each move is ``(consumes_a, produces_b, next_state)``; ``None`` means
        that tape has no pending symbol, so a move may not touch it.
        """

    def is_final(self, state) -> bool: ...


def synchronize(t: Transducer, alphabet: Alphabet, max_lag: int,
                guard: FiniteAutomaton | None = None) -> FiniteAutomaton:
    """NFA over ``PairAlphabet.over(alphabet)`` for the relation computed by ``t``.

    ``guard`` (a DFA over ``alphabet``) restricts both tapes to its language;
    it is applied during construction so invalid buffers are never explored.
    """
    pa = PairAlphabet.over(alphabet)
    k = len(alphabet)
    if guard is not None:
        if guard.alphabet != alphabet:
            raise ValueError("guard must be over the transducer alphabet")
        guard = determinize(guard)
        gtable, gstart, gacc = guard.table, guard.start, guard.accepting
    else:
        gtable, gstart, gacc = [{i: 0 for i in range(k)}], 0, frozenset({0})

    def closure(p, X, Y):
        seen = set()
        stack = [(p, X, Y)]
        while stack:
            c = stack.pop()
            if c in seen:
                continue
            seen.add(c)
            p, X, Y = c
            a = X[0] if X else None
            b = Y[0] if Y else None
            for cons, prod, p2 in t.moves(p, a, b):
                stack.append((p2, X[1:] if cons else X, Y[1:] if prod else Y))
        # With both heads known a config can only ever do what it can do now,
        # so it is equivalent to the set of its successors and need not be kept.
        return [c for c in seen
                if not (c[1] and c[2]) and len(c[1]) <= max_lag and len(c[2]) <= max_lag]

    # config: (transducer state, pending input, pending output, ended1, ended2, g1, g2)
    index: dict = {}
    queue: deque = deque()
    initial = []

    def intern(cfg):
        i = index.get(cfg)
        if i is None:
            i = index[cfg] = len(index)
            queue.append(cfg)
        return i

    for p0 in t.initial_states():
        for p, X, Y in closure(p0, (), ()):
            initial.append(intern((p, X, Y, False, False, gstart, gstart)))

    trans = []
    accepting = []
    while queue:
        cfg = queue.popleft()
        src = index[cfg]
        p, X, Y, e1, e2, g1, g2 = cfg
        if not X and not Y and g1 in gacc and g2 in gacc and t.is_final(p):
            accepting.append(src)
        left = [(None, g1)] if e1 else list(gtable[g1].items())
        right = [(None, g2)] if e2 else list(gtable[g2].items())
        if not e1 and g1 in gacc:
            left.append((None, g1))
        if not e2 and g2 in gacc:
            right.append((None, g2))
        for a, h1 in left:
            X2 = X if a is None else X + (a,)
            if len(X2) > max_lag + 1:
                continue
            for b, h2 in right:
                if a is None and b is None:
                    continue
                Y2 = Y if b is None else Y + (b,)
                if len(Y2) > max_lag + 1:
                    continue
                sym = pa.pair_index(a, b)
                n1, n2 = e1 or a is None, e2 or b is None
                for q, X3, Y3 in closure(p, X2, Y2):
                    trans.append((src, sym, intern((q, X3, Y3, n1, n2, h1, h2))))
    return FiniteAutomaton.build(pa, len(index), initial, accepting, trans, False)


def synchronous_relation(t: Transducer, alphabet: Alphabet, max_lag: int,
                         guard: FiniteAutomaton | None = None) -> FiniteAutomaton:
    """``synchronize`` followed by determinization and minimization."""
    return minimize(determinize(synchronize(t, alphabet, max_lag, guard)))

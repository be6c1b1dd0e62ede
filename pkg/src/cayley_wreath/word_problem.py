"""Word problem for ``G wr H`` by folding multiplier relations over a word."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from . import automata as fa
from .groups import UnknownGenerator, eval_word
from .wreath import WreathStructure


@dataclass
class SolverTrace:
    word: tuple
    forms: list = field(default_factory=list)  # forms[i] is the normal form of word[:i]
    sizes: list = field(default_factory=list)  # state count of each relation applied

    @property
    def final(self) -> tuple:
        return self.forms[-1]

    @property
    def steps(self) -> int:
        return len(self.forms) - 1

    def is_trivial(self, ws: WreathStructure) -> bool:
        return self.final == ws.identity_word()

    def verdict(self, ws: WreathStructure) -> str:
        return "trivial" if self.is_trivial(ws) else "nontrivial"


class ConstructionBug(RuntimeError):
    """A multiplier had no image or several; the partial trace is attached."""

    def __init__(self, message: str, trace: SolverTrace):
        super().__init__(message)
        self.trace = trace


def solve(ws: WreathStructure, word: Sequence[str]) -> SolverTrace:
    word = tuple(word)
    for a in word:
        if a not in ws.multipliers:
            raise UnknownGenerator(a)
    trace = SolverTrace(word, [ws.identity_word()])
    for i, a in enumerate(word):
        r = ws.multipliers[a]
        try:
            nxt = fa.apply_relation(r, trace.forms[-1])
        except (fa.NoImage, fa.NotFunctional) as exc:
            raise ConstructionBug(f"step {i} ({a}): {exc}", trace) from exc
        trace.forms.append(nxt)
        trace.sizes.append(r.n_states)
    return trace


def crosscheck(ws: WreathStructure, word: Sequence[str], prefixes: bool = False) -> bool:
    """Does the solver agree with the oracle (on every prefix, if asked)?"""
    trace = solve(ws, word)
    group = ws.base.group
    if not prefixes:
        return ws.decode(trace.final) == eval_word(ws.hspec, group, word)
    return all(ws.decode(trace.forms[i]) == eval_word(ws.hspec, group, word[:i])
               for i in range(len(word) + 1))


def random_words(ws: WreathStructure, count: int, max_len: int, seed: int) -> list[tuple]:
    rng = random.Random(seed)
    gens = sorted(ws.multipliers)
    return [tuple(rng.choice(gens) for _ in range(rng.randint(0, max_len)))
            for _ in range(count)]


def targeted_words(ws: WreathStructure) -> list[tuple]:
    """Words that walk the lamplighter across every kind of support change."""
    base_gens = [g for g in ws.base.generators if not g.endswith("^-1")]
    cosets = [f"x{i}" for i in range(1, ws.m + 1)]
    s = base_gens[0] if base_gens else None
    lit = [s] if s else []
    words = [()]
    for n in range(1, 5):
        for step in ("t", "t^-1"):
            words.append((step,) * n)  # extension from the identity
            words.append(tuple(lit) + (step,) * n + tuple(lit))  # lamps at both ends
            words.append((step,) * n + tuple(lit) + (_inv(step),) * n)  # retraction
            words.append(tuple(lit) + (step,) * n + tuple(lit) + (_inv(step),) * (2 * n))
    for x in cosets:
        for n in range(-3, 4):
            step = "t" if n > 0 else "t^-1"
            walk = (step,) * abs(n)
            words.append(walk + (x,))
            words.append(walk + (x, x))
            words.append(tuple(lit) + walk + (x,) + tuple(lit) + (x + "^-1",) + walk)
            words.append(walk + tuple(lit) + (x, "t", x + "^-1", "t^-1"))
            words.append((x,) + walk + tuple(lit) + (x + "^-1",))
    for g in base_gens:
        words.append((g, g, g))
        words.append((g, "t", g, "t^-1", g + "^-1"))
    return words


def _inv(a: str) -> str:
    return a[:-3] if a.endswith("^-1") else a + "^-1"

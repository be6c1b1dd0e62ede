"""Cayley automatic structures for base groups.

A structure bundles a regular normal-form language ``L0`` for a group ``G``,
an evaluator ``L0 -> G`` (checked against the group oracle), its inverse, and
one synchronous multiplier automaton per generator and formal inverse.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import automata as fa
from .automata import Alphabet, FiniteAutomaton, PairAlphabet
from .groups import FiniteGroupTable, IntegerGroup


class ValidationFailure(Exception):
    def __init__(self, message: str, pair=None):
        super().__init__(message)
        self.pair = pair


class UnboundedShift(ValueError):
    pass


@dataclass(frozen=True)
class QuasigeodesicBound:
    lam: Fraction
    audit_depth: int


@dataclass(frozen=True, eq=False)
class BaseAutomaticStructure:
    group: object  # FiniteGroupTable or IntegerGroup; the evaluator's codomain
    generators: dict  # generator name -> group element, formal inverses included
    inverse_of: dict  # generator name -> name of its inverse
    alphabet: Alphabet
    language: FiniteAutomaton
    evaluator: Callable  # word -> group element
    encoder: Callable  # group element -> word
    multipliers: dict  # generator name -> FiniteAutomaton over PairAlphabet
    empty_is_identity: bool = True

    def evaluate(self, word) -> object:
        return self.evaluator(tuple(word))

    def encode(self, g) -> tuple:
        return self.encoder(g)


def _symmetrize(group, primary: dict[str, object]) -> tuple[dict, dict]:
    gens, inv = {}, {}
    for name, g in primary.items():
        gens[name] = g
        gens[f"{name}^-1"] = group.inv(g)
        inv[name] = f"{name}^-1"
        inv[f"{name}^-1"] = name
    return gens, inv


def build_finite_group_structure(g: FiniteGroupTable) -> BaseAutomaticStructure:
    """One symbol per non-identity element; ``L0 = {ε} ∪ Λ0``."""
    others = [x for x in g.elements() if x != g.identity]
    alphabet = Alphabet(tuple(g.names[x] for x in others))
    by_name = {g.names[x]: x for x in others}

    def evaluator(word):
        if not word:
            return g.identity
        if len(word) == 1 and word[0] in by_name:
            return by_name[word[0]]
        raise ValueError(f"{word!r} is not a normal form")

    def encoder(x):
        return () if x == g.identity else (g.names[x],)

    language = fa.from_words(alphabet, [()] + [(s,) for s in alphabet])
    gens, inv = _symmetrize(g, g.generators)
    multipliers = {}
    for name, s in gens.items():
        pairs = [fa.convolve(encoder(x), encoder(g.mul(x, s))) for x in g.elements()]
        pa = PairAlphabet.over(alphabet)
        words = [[f"{a if a is not None else fa.PAD_NAME}|{b if b is not None else fa.PAD_NAME}"
                  for a, b in cw] for cw in pairs]
        multipliers[name] = fa.minimize(fa.from_words(pa, words))
    return BaseAutomaticStructure(g, gens, inv, alphabet, fa.minimize(language), evaluator,
                                  encoder, multipliers)


def build_integer_structure(group: IntegerGroup | None = None) -> BaseAutomaticStructure:
    """Unary normal forms ``p^k`` (k > 0), ``n^k`` (k < 0), ``ε`` for 0."""
    group = group or IntegerGroup()
    alphabet = Alphabet(("p", "n"))
    P, N = 0, 1

    def evaluator(word):
        if word and len(set(word)) != 1:
            raise ValueError(f"{word!r} is not a normal form")
        if not word:
            return 0
        if word[0] == "p":
            return len(word)
        if word[0] == "n":
            return -len(word)
        raise ValueError(f"{word!r} is not a normal form")

    def encoder(k):
        return ("p",) * k if k >= 0 else ("n",) * (-k)

    language = FiniteAutomaton.build(alphabet, 3, {0}, {0, 1, 2},
                                     [(0, P, 1), (1, P, 1), (0, N, 2), (2, N, 2)], True)
    pa = PairAlphabet.over(alphabet)
    pp, nn = pa.pair_index(P, P), pa.pair_index(N, N)
    # +1: n^k -> n^(k-1) (drop one n), ε -> p, p^k -> p^(k+1)
    plus = FiniteAutomaton.build(pa, 4, {0}, {3}, [
        (0, pa.pair_index(None, P), 3),
        (0, pp, 1), (1, pp, 1), (1, pa.pair_index(None, P), 3),
        (0, pa.pair_index(N, None), 3),
        (0, nn, 2), (2, nn, 2), (2, pa.pair_index(N, None), 3),
    ], True)
    gens, inv = _symmetrize(group, group.generators)
    name = group.generator
    multipliers = {name: fa.minimize(plus), inv[name]: fa.minimize(fa.relation_transpose(plus))}
    return BaseAutomaticStructure(group, gens, inv, alphabet, fa.minimize(language), evaluator,
                                  encoder, multipliers)


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    depth: int
    words_checked: int = 0
    pairs_checked: int = 0
    shift_bounds: dict = field(default_factory=dict)
    quasigeodesic: QuasigeodesicBound | None = None

    def lines(self) -> list[str]:
        out = [f"audit depth {self.depth}: {self.words_checked} normal forms, "
               f"{self.pairs_checked} multiplier pairs"]
        for name, d in self.shift_bounds.items():
            out.append(f"  shift bound M_{name} = {d}")
        if self.quasigeodesic:
            out.append(f"  quasigeodesic constant = {self.quasigeodesic.lam}")
        return out


def validate_structure(b: BaseAutomaticStructure, depth: int = 6) -> ValidationReport:
    if depth < 1:
        raise ValueError("depth must be >= 1")
    group = b.group
    report = ValidationReport(depth)
    if not b.language.accepts(()) or b.evaluate(()) != group.identity:
        raise ValidationFailure("the empty word must be a normal form for the identity")
    words = fa.enumerate_words(b.language, depth)
    report.words_checked = len(words)
    seen = {}
    for w in words:
        g = b.evaluate(w)
        if g in seen:
            raise ValidationFailure(f"evaluator not injective: {seen[g]} and {w}", (seen[g], w))
        seen[g] = w
        if tuple(b.encode(g)) != w:
            raise ValidationFailure(f"encoder does not invert evaluator at {w}", (w, b.encode(g)))
    for name, s in b.generators.items():
        m = b.multipliers.get(name)
        if m is None:
            raise ValidationFailure(f"missing multiplier for {name}")
        for u, v in fa.enumerate_pairs(m, depth):
            report.pairs_checked += 1
            if not (b.language.accepts(u) and b.language.accepts(v)):
                raise ValidationFailure(f"M_{name} accepts a non-normal form pair", (u, v))
            if b.evaluate(v) != group.mul(b.evaluate(u), s):
                raise ValidationFailure(f"M_{name} accepts a wrong pair", (u, v))
        for u in words:
            try:
                v = fa.apply_relation(m, u)
            except (fa.NoImage, fa.NotFunctional) as exc:
                raise ValidationFailure(f"M_{name} at {u}: {exc}", (u, None)) from exc
            if b.evaluate(v) != group.mul(b.evaluate(u), s):
                raise ValidationFailure(f"M_{name} maps to a wrong element", (u, v))
        report.shift_bounds[name] = multiplier_shift_bound(b, name)
    report.quasigeodesic = quasigeodesic_bound(b, depth)
    return report


def quasigeodesic_bound(b: BaseAutomaticStructure, depth: int) -> QuasigeodesicBound:
    """Smallest λ >= 1 with ``|nf(g)| <= λ|g| + λ`` over the ball of radius ``depth``."""
    group = b.group
    dist = {group.identity: 0}
    queue = deque([group.identity])
    while queue:
        x = queue.popleft()
        if dist[x] == depth:
            continue
        for s in b.generators.values():
            y = group.mul(x, s)
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    lam = Fraction(1)
    for g, d in dist.items():
        lam = max(lam, Fraction(len(b.encode(g)), d + 1))
    return QuasigeodesicBound(lam, depth)


def multiplier_shift_bound(b: BaseAutomaticStructure, s: str) -> int:
    """Largest ``||u| - |v||`` over pairs accepted by ``M_s``."""
    m = b.multipliers[s]
    return relation_shift_bound(m)


def relation_shift_bound(m: FiniteAutomaton) -> int:
    m = fa.trim(m)
    pa = m.alphabet
    best = 0
    for side in (0, 1):
        edges = {q: [] for q in range(m.n_states)}
        for q, sym, d in m.transitions():
            if pa.components(sym)[side] is None:
                edges[q].append(d)
        longest: dict[int, int] = {}
        visiting: set[int] = set()

        def walk(q):
            if q in longest:
                return longest[q]
            if q in visiting:
                raise UnboundedShift("padded region of the multiplier contains a cycle")
            visiting.add(q)
            length = max([1 + walk(d) for d in edges[q]], default=0)
            visiting.discard(q)
            longest[q] = length
            return length

        for q in range(m.n_states):
            best = max(best, walk(q))
    return best

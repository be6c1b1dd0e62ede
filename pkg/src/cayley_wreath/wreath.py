"""Cayley automatic structure for ``G wr H`` with H virtually infinite cyclic.

Normal forms
------------
An element with integer support ``[m1, m2]`` is written as ``m2 - m1 + 1``
blocks, one per spine vertex ``t^k`` (left to right).  Each block is::

    β Γ_0 v_0 Γ_1 v_1 ... Γ_m v_m

where ``v_j`` is the base normal form of the lamp at ``t^k x_j``, ``β`` is
``B0`` on the block for ``t^0`` and ``B`` elsewhere, and ``Γ_j`` is ``C*`` on
the lamplighter's slot and ``C`` elsewhere.

Multipliers
-----------
Every multiplier is written as a small bounded-lag transducer (see
:mod:`cayley_wreath.sync`) describing how ``u`` is rewritten into ``v``;
it is then turned into a synchronous automaton, intersected with ``L x L``,
determinized and minimized.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from . import automata as fa
from .automata import Alphabet, FiniteAutomaton
from .base import BaseAutomaticStructure, multiplier_shift_bound
from .groups import (HElement, UnknownGenerator, VirtuallyZSpec, WreathElement,
                     generator_elements, support_info, wreath_mult)
from .sync import synchronous_relation

log = logging.getLogger(__name__)

B, B0, C, CSTAR = "B", "B0", "C", "C*"
MARKERS = (B, B0, C, CSTAR)


class NotInLanguage(ValueError):
    pass


@dataclass(frozen=True)
class WreathAlphabet:
    lambda0: Alphabet
    full: Alphabet

    @classmethod
    def over(cls, lambda0: Alphabet) -> "WreathAlphabet":
        clash = set(lambda0) & set(MARKERS)
        if clash:
            raise ValueError(f"base symbols {sorted(clash)} collide with block markers")
        return cls(lambda0, Alphabet(tuple(lambda0) + MARKERS))

    @property
    def n0(self) -> int:
        return len(self.lambda0)

    def marker(self, name: str) -> int:
        return self.full.index(name)


def project_markers(w: Sequence[str]) -> tuple[str, ...]:
    """Erase everything except ``C``, ``C*`` and ``B0``."""
    return tuple(x for x in w if x in (C, CSTAR, B0))


def format_word(w: Sequence[str]) -> str:
    return " ".join(w)


def parse_word(text: str) -> tuple[str, ...]:
    return tuple(text.split())


# ---------------------------------------------------------------------------
# encoding and decoding


@dataclass(frozen=True, eq=False)
class WreathCodec:
    base: BaseAutomaticStructure
    hspec: VirtuallyZSpec

    @property
    def m(self) -> int:
        return self.hspec.m

    @property
    def alphabet(self) -> WreathAlphabet:
        return WreathAlphabet.over(self.base.alphabet)

    def encode(self, v: WreathElement) -> tuple[str, ...]:
        info = support_info(v)
        lamps = v.lamps
        group = self.base.group
        out: list[str] = []
        for k in range(info.m1, info.m2 + 1):
            out.append(B0 if k == 0 else B)
            for j in range(self.m + 1):
                h = HElement(k, j)
                out.append(CSTAR if h == v.position else C)
                out.extend(self.base.encode(lamps.get(h, group.identity)))
        return tuple(out)

    def split_blocks(self, w: Sequence[str]) -> list[tuple[str, list[tuple[str, tuple]]]]:
        """Parse into ``[(β, [(Γ_j, v_j), ...]), ...]`` or raise NotInLanguage."""
        w = tuple(w)
        if not w or w[0] not in (B, B0):
            raise NotInLanguage("a normal form starts with B or B0")
        blocks = []
        for x in w:
            if x in (B, B0):
                blocks.append((x, []))
            elif x in (C, CSTAR):
                blocks[-1][1].append([x, []])
            elif x in self.base.alphabet.symbols:
                if not blocks[-1][1]:
                    raise NotInLanguage("base letters must follow a slot marker")
                blocks[-1][1][-1][1].append(x)
            else:
                raise NotInLanguage(f"unknown symbol {x!r}")
        out = []
        for beta, slots in blocks:
            if len(slots) != self.m + 1:
                raise NotInLanguage(f"block has {len(slots)} slots, expected {self.m + 1}")
            parsed = []
            for gamma, letters in slots:
                word = tuple(letters)
                if not self.base.language.accepts(word):
                    raise NotInLanguage(f"{word!r} is not a base normal form")
                parsed.append((gamma, word))
            out.append((beta, parsed))
        return out

    def decode(self, w: Sequence[str]) -> WreathElement:
        blocks = self.split_blocks(w)
        b0 = [i for i, (beta, _) in enumerate(blocks) if beta == B0]
        stars = [(i, j) for i, (_, slots) in enumerate(blocks)
                 for j, (g, _) in enumerate(slots) if g == CSTAR]
        if len(b0) != 1 or len(stars) != 1:
            raise NotInLanguage("need exactly one B0 and exactly one C*")

        def ok(i):
            beta, slots = blocks[i]
            return beta == B0 or any(g == CSTAR or word for g, word in slots)

        if not ok(0) or not ok(len(blocks) - 1):
            raise NotInLanguage("an end block carries no lamp, origin or lamplighter")
        m1 = -b0[0]
        group = self.base.group
        lamps = {}
        for i, (_, slots) in enumerate(blocks):
            for j, (_, word) in enumerate(slots):
                g = self.base.evaluate(word)
                if g != group.identity:
                    lamps[HElement(m1 + i, j)] = g
        ci, cj = stars[0]
        return WreathElement.make(lamps, HElement(m1 + ci, cj), group.identity)


def closed_form(m: int, n: int, q: int) -> tuple[str, ...]:
    """Normal form of ``t^n x_q`` (no lamps lit)."""
    trivial = (B,) + (C,) * (m + 1)
    origin = (B0,) + (C,) * (m + 1)
    star = (C,) * q + (CSTAR,) + (C,) * (m - q)
    if n > 0:
        return origin + trivial * (n - 1) + (B,) + star
    if n == 0:
        return (B0,) + star
    return (B,) + star + trivial * (-n - 1) + origin


# ---------------------------------------------------------------------------
# the language L


def build_language(base: BaseAutomaticStructure, hspec: VirtuallyZSpec) -> FiniteAutomaton:
    wa = WreathAlphabet.over(base.alphabet)
    return fa.minimize(fa.product(fa.product(_block_shape(base, hspec, wa),
                                             _single_markers(wa)),
                                  _end_blocks(wa)))


def _block_shape(base, hspec, wa: WreathAlphabet) -> FiniteAutomaton:
    """Words ``∏ β Γ_0 v_0 ... Γ_m v_m`` with every ``v_j`` in L0."""
    l0 = fa.minimize(base.language)
    m = hspec.m
    n = l0.n_states
    b, b0, c, cs = (wa.marker(x) for x in MARKERS)
    # state 0: expecting β; slot (j, s) -> 1 + j*n + s
    start = 0
    slot = lambda j, s: 1 + j * n + s
    trans = []
    for beta in (b, b0):
        trans.append((start, beta, n * (m + 1) + 1))  # "after β" state
    after_beta = n * (m + 1) + 1
    for gamma in (c, cs):
        trans.append((after_beta, gamma, slot(0, l0.start)))
    for j in range(m + 1):
        for s in range(n):
            for sym, d in l0.table[s].items():
                trans.append((slot(j, s), sym, slot(j, d)))
            if s in l0.accepting:
                if j < m:
                    for gamma in (c, cs):
                        trans.append((slot(j, s), gamma, slot(j + 1, l0.start)))
                else:
                    for beta in (b, b0):
                        trans.append((slot(j, s), beta, after_beta))
    accepting = [slot(m, s) for s in l0.accepting]
    return FiniteAutomaton.build(wa.full, after_beta + 1, {start}, accepting, trans, True)


def _single_markers(wa: WreathAlphabet) -> FiniteAutomaton:
    """Exactly one ``B0`` and exactly one ``C*``."""
    b0, cs = wa.marker(B0), wa.marker(CSTAR)
    state = lambda x, y: 2 * x + y
    trans = []
    for x in (0, 1):
        for y in (0, 1):
            for sym in range(len(wa.full)):
                if sym == b0:
                    if not x:
                        trans.append((state(x, y), sym, state(1, y)))
                elif sym == cs:
                    if not y:
                        trans.append((state(x, y), sym, state(x, 1)))
                else:
                    trans.append((state(x, y), sym, state(x, y)))
    return FiniteAutomaton.build(wa.full, 4, {0}, {3}, trans, True)


def _end_blocks(wa: WreathAlphabet) -> FiniteAutomaton:
    """First and last blocks each hold a lamp, ``B0`` or ``C*``."""
    b, b0, cs = wa.marker(B), wa.marker(B0), wa.marker(CSTAR)
    # phase 0: before any block; 1: inside first block; 2: later blocks.
    # state = (phase, current block ok)
    index = {(0, False): 0, (1, False): 1, (1, True): 2, (2, False): 3, (2, True): 4}
    trans = []
    for (phase, ok), src in index.items():
        for sym in range(len(wa.full)):
            if sym in (b, b0):
                if phase == 1 and not ok:
                    continue
                nxt = (1 if phase == 0 else 2, sym == b0)
            elif phase == 0:
                continue
            elif sym == cs or sym < wa.n0:
                nxt = (phase, True)
            else:
                nxt = (phase, ok)
            trans.append((src, sym, index[nxt]))
    accepting = [index[(1, True)], index[(2, True)]]
    return FiniteAutomaton.build(wa.full, 5, {0}, accepting, trans, True)


# ---------------------------------------------------------------------------
# multiplier transducers


class _SlotMultiplier:
    """Copy up to ``C*``, rewrite the lamplighter's slot with ``M_s``, copy the rest."""

    def __init__(self, ms: FiniteAutomaton, wa: WreathAlphabet):
        ms = fa.trim(fa.minimize(ms))
        self.n0 = wa.n0
        self.cstar = wa.marker(CSTAR)
        self.ms_start = ms.start
        self.ms_accepting = ms.accepting
        pa = ms.alphabet
        self.ms_moves = [[(pa.components(sym), d) for sym, d in row.items()] for row in ms.table]

    def initial_states(self):
        return [("pre",)]

    def is_final(self, state):
        return state[0] == "post" or (state[0] == "slot" and state[1] in self.ms_accepting)

    def moves(self, state, a, b):
        out = []
        tag = state[0]
        if tag == "pre":
            if a is not None and a == b:
                out.append((True, True, ("slot", self.ms_start) if a == self.cstar else state))
        elif tag == "post":
            if a is not None and a == b:
                out.append((True, True, state))
        else:
            q = state[1]
            for (x, y), d in self.ms_moves[q]:
                if x is not None and a != x:
                    continue
                if y is not None and b != y:
                    continue
                out.append((x is not None, y is not None, ("slot", d)))
            if q in self.ms_accepting and a is not None and a == b and a >= self.n0:
                out.append((True, True, ("post",)))
        return out


class _PositionShift:
    """Right multiplication by an element of H, i.e. ``x_q h = t^k_q x_r_q``.

    The lamps are unchanged; ``C*`` moves from slot ``q`` of some block to
    slot ``r_q`` of the block ``k_q`` positions further on, and up to
    ``K = max|k_q|`` trivial blocks may be added or dropped at either end.

    State ``(mode, slot, status, extra)``.  ``mode`` says which tapes carry
    the current block: ``both``, ``del`` (first tape only) or ``add``
    (second tape only), split into left/right ends; ``status`` tracks the
    pending relocation of ``C*``: ``N`` (nothing seen), ``(O, q, d)`` (seen
    on the first tape, due on the second ``d`` blocks later), ``(I, q, d)``
    (written on the second tape, due on the first ``d`` blocks later),
    ``D`` (done).
    """

    def __init__(self, table: Sequence[tuple[int, int]], m: int, wa: WreathAlphabet):
        self.table = list(table)
        self.m = m
        self.K = max(abs(k) for k, _ in self.table)
        self.n0 = wa.n0
        self.b, self.b0, self.c, self.cs = (wa.marker(x) for x in MARKERS)

    @property
    def max_lag(self) -> int:
        return self.K * (self.m + 2)

    def initial_states(self):
        return [("start", -1, "N", 0)]

    def is_final(self, state):
        mode, j, st, _ = state
        return mode in ("both", "rdel", "radd") and j == self.m and st == "D"

    _NEXT_MODES = {
        "start": ("ldel", "ladd", "both"),
        "ldel": ("ldel", "both"),
        "ladd": ("ladd", "both"),
        "both": ("both", "rdel", "radd"),
        "rdel": ("rdel",),
        "radd": ("radd",),
    }

    def _advance(self, st):
        if isinstance(st, tuple):
            kind, q, d = st
            return None if d == 0 else (kind, q, d - 1)
        return st

    def _gamma(self, st, s, in_star, out_star, has_in, has_out):
        """Statuses reachable by reading slot ``s`` with the given markers."""
        tab = self.table
        if st == "N":
            if in_star:
                k, r = tab[s]
                if out_star:
                    return ["D"] if k == 0 and r == s else []
                if k > 0 or (k == 0 and r > s and has_out):
                    return [("O", s, k)]
                return []
            if out_star:
                return [("I", q, -k) for q, (k, r) in enumerate(tab)
                        if r == s and (k < 0 or (k == 0 and q > s and has_in))]
            return ["N"]
        if st == "D":
            return [] if in_star or out_star else ["D"]
        kind, q, d = st
        if kind == "O":
            if in_star:
                return []
            due = d == 0 and s == tab[q][1]
            return (["D"] if out_star else []) if due else ([] if out_star else [st])
        due = d == 0 and s == q
        if out_star:
            return []
        return (["D"] if in_star else []) if due else ([] if in_star else [st])

    def moves(self, state, a, b):
        mode, j, st, extra = state
        out = []
        if mode == "start" or j == self.m:
            st2 = st if mode == "start" else self._advance(st)
            if st2 is not None:
                for nm in self._NEXT_MODES[mode]:
                    if nm == "both":
                        if a is not None and a == b and a in (self.b, self.b0):
                            out.append((True, True, ("both", -1, st2, 0)))
                        continue
                    n_extra = extra + 1 if nm == mode else 1
                    if n_extra > self.K:
                        continue
                    if nm.endswith("del"):
                        if a == self.b:
                            out.append((True, False, (nm, -1, st2, n_extra)))
                    elif b == self.b:
                        out.append((False, True, (nm, -1, st2, n_extra)))
        if mode != "start" and j < self.m:
            s = j + 1
            has_in = mode in ("both", "ldel", "rdel")
            has_out = mode in ("both", "ladd", "radd")
            if (not has_in or a in (self.c, self.cs)) and (not has_out or b in (self.c, self.cs)):
                in_star = has_in and a == self.cs
                out_star = has_out and b == self.cs
                for st2 in self._gamma(st, s, in_star, out_star, has_in, has_out):
                    out.append((has_in, has_out, (mode, s, st2, extra)))
        if mode == "both" and j >= 0 and a is not None and a == b and a < self.n0:
            out.append((True, True, state))
        return out


# ---------------------------------------------------------------------------
# structure


@dataclass(frozen=True)
class ShiftEntry:
    k: int
    r: int
    shift: int


@dataclass(frozen=True, eq=False)
class WreathStructure(WreathCodec):
    language: FiniteAutomaton = None
    multipliers: dict = field(default_factory=dict)
    shifts: dict = field(default_factory=dict)  # (q, generator) -> ShiftEntry

    @property
    def generators(self) -> list[str]:
        return list(self.multipliers)

    def multiply(self, w: Sequence[str], generator: str) -> tuple[str, ...]:
        try:
            r = self.multipliers[generator]
        except KeyError:
            raise UnknownGenerator(generator) from None
        return fa.apply_relation(r, w)

    def identity_word(self) -> tuple[str, ...]:
        return closed_form(self.m, 0, 0)


def position_table(hspec: VirtuallyZSpec, generator: str) -> list[tuple[int, int]]:
    if generator == "t":
        return list(hspec.t_conj)
    i = int(generator[1:])
    return [hspec.coset_mult[q][i] for q in range(hspec.m + 1)]


def build_R_s(base: BaseAutomaticStructure, hspec: VirtuallyZSpec, s: str,
              language: FiniteAutomaton | None = None) -> FiniteAutomaton:
    wa = WreathAlphabet.over(base.alphabet)
    language = language or build_language(base, hspec)
    lag = multiplier_shift_bound(base, s)
    t = _SlotMultiplier(base.multipliers[s], wa)
    return synchronous_relation(t, wa.full, lag, guard=language)


def build_R_position(base: BaseAutomaticStructure, hspec: VirtuallyZSpec, generator: str,
                     language: FiniteAutomaton | None = None) -> FiniteAutomaton:
    wa = WreathAlphabet.over(base.alphabet)
    language = language or build_language(base, hspec)
    t = _PositionShift(position_table(hspec, generator), hspec.m, wa)
    return synchronous_relation(t, wa.full, t.max_lag, guard=language)


def build_R_coset(base, hspec, i: int, language=None) -> FiniteAutomaton:
    if not 1 <= i <= hspec.m:
        raise ValueError(f"coset generator index {i} out of range 1..{hspec.m}")
    return build_R_position(base, hspec, f"x{i}", language)


def build_R_t(base, hspec, language=None) -> FiniteAutomaton:
    return build_R_position(base, hspec, "t", language)


def _marker_offset(u: Sequence[str], v: Sequence[str]) -> int:
    return project_markers(u).index(CSTAR) - project_markers(v).index(CSTAR)


def derive_shift_table(codec: WreathCodec) -> dict:
    """Tabulate ``x_q a = t^k x_r`` and the ``C*`` offset for same-support moves.

    The offset is measured on a probe whose lamps sit far enough out on both
    sides that the support cannot change and ``B0`` stays left of both
    ``C*`` positions.
    """
    hspec, base = codec.hspec, codec.base
    group = base.group
    lit = next((base.evaluate(w) for w in fa.enumerate_words(base.language, 4)
                if base.evaluate(w) != group.identity), None)
    shifts = {}
    gens = generator_elements(hspec, group)
    for name in ["t"] + [f"x{i}" for i in range(1, hspec.m + 1)]:
        table = position_table(hspec, name)
        K = max(abs(k) for k, _ in table)
        for q, (k, r) in enumerate(table):
            pos = HElement(K + 1, q)
            if lit is None:
                shift = -k * (hspec.m + 1) + q - r
            else:
                lamps = {HElement(-K - 1, 0): lit, HElement(2 * K + 2, 0): lit}
                probe = WreathElement.make(lamps, pos, group.identity)
                after = wreath_mult(hspec, base.group, probe, gens[name])
                shift = _marker_offset(codec.encode(probe), codec.encode(after))
            shifts[(q, name)] = ShiftEntry(k, r, shift)
    return shifts


def build_wreath_structure(base: BaseAutomaticStructure, hspec: VirtuallyZSpec,
                           generators: Sequence[str] | None = None) -> WreathStructure:
    """Assemble ``L`` and every ``R_a``; inverses are converse relations."""
    taken = set(base.generators) & ({"t", "t^-1"} | {f"x{i}" for i in range(1, hspec.m + 1)})
    if taken:
        raise ValueError(f"base generator names {sorted(taken)} clash with H generators")
    codec = WreathCodec(base, hspec)
    language = build_language(base, hspec)
    log.info("L: %d states", language.n_states)
    primary = [s for s in base.generators if not s.endswith("^-1")]
    primary += [f"x{i}" for i in range(1, hspec.m + 1)] + ["t"]
    if generators is not None:
        primary = [g for g in primary if g in generators]
    multipliers = {}
    for g in primary:
        if g in base.generators:
            r = build_R_s(base, hspec, g, language)
        else:
            r = build_R_position(base, hspec, g, language)
        log.info("R_%s: %d states", g, r.n_states)
        multipliers[g] = r
        multipliers[f"{g}^-1"] = fa.minimize(fa.relation_transpose(r))
    return WreathStructure(base, hspec, language, multipliers, derive_shift_table(codec))

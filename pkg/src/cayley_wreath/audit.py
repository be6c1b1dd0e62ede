"""Exhaustive and randomized checks of a built structure against the oracle."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterator

from . import automata as fa
from .groups import (IntegerGroup, WreathElement, enumerate_elements, generator_elements,
                     parse_letter, support_info, wreath_inverse, wreath_mult)
from .word_problem import crosscheck, random_words, targeted_words
from .wreath import B0, CSTAR, WreathStructure, project_markers


class AuditFailure(AssertionError):
    def __init__(self, message: str, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample


@dataclass
class AuditLog:
    lines: list = field(default_factory=list)

    def note(self, text: str) -> None:
        self.lines.append(text)


def _base_elements(base, budget: int) -> list:
    """Base elements whose normal form has length ``<= budget``, identity first."""
    group = base.group
    if isinstance(group, IntegerGroup):
        pool = range(-budget, budget + 1)
    else:
        pool = group.elements()
    found = [g for g in pool if len(base.encode(g)) <= budget]
    return sorted(found, key=lambda g: (g != group.identity, len(base.encode(g)), g))


def oracle_normal_forms(ws: WreathStructure, max_len: int) -> set[tuple]:
    """``{encode(g) : |encode(g)| <= max_len}`` by walking supports block by block."""
    m = ws.m
    block = m + 2
    identity = ws.base.group.identity
    out = set()
    for size in range(1, max_len // block + 1):
        budget = max_len - size * block
        values = _base_elements(ws.base, budget)
        cost = {g: len(ws.base.encode(g)) for g in values}
        for lo in range(-size + 1, 1):
            sites = ws.hspec.elements(lo, lo + size - 1)
            for lamps in _lamp_assignments(sites, values, cost, budget, identity):
                for pos in sites:
                    v = WreathElement.make(lamps, pos, identity)
                    if support_info(v).interval != (lo, lo + size - 1):
                        continue
                    out.add(ws.encode(v))
    return out


def _lamp_assignments(sites, values, cost, budget, identity) -> Iterator[dict]:
    if not sites:
        yield {}
        return
    head, rest = sites[0], sites[1:]
    for g in values:
        c = cost[g]
        if c > budget:
            continue
        for tail in _lamp_assignments(rest, values, cost, budget - c, identity):
            if g != identity:
                tail = {**tail, head: g}
            yield tail


# ---------------------------------------------------------------------------
# individual checks; each raises AuditFailure with a counterexample


def check_language(ws: WreathStructure, depth: int) -> int:
    words = fa.enumerate_words(ws.language, depth)
    got = set(words)
    want = oracle_normal_forms(ws, depth)
    if got != want:
        extra = sorted(got - want, key=len)[:1]
        missing = sorted(want - got, key=len)[:1]
        raise AuditFailure("L differs from the oracle normal forms",
                           {"unexpected": extra, "missing": missing})
    return len(words)


def check_markers(ws: WreathStructure, depth: int) -> int:
    words = fa.enumerate_words(ws.language, depth)
    for w in words:
        blocks = ws.split_blocks(w)
        if w.count(B0) != 1 or w.count(CSTAR) != 1:
            raise AuditFailure("marker count", w)
        if any(len(slots) != ws.m + 1 for _, slots in blocks):
            raise AuditFailure("slot count", w)
    return len(words)


def check_roundtrip_words(ws: WreathStructure, depth: int) -> int:
    words = fa.enumerate_words(ws.language, depth)
    for w in words:
        if ws.encode(ws.decode(w)) != w:
            raise AuditFailure("encode(decode(w)) != w", w)
    return len(words)


def check_roundtrip_elements(ws: WreathStructure, elements) -> int:
    seen = {}
    n = 0
    for v in elements:
        w = ws.encode(v)
        if w in seen and seen[w] != v:
            raise AuditFailure("encode is not injective", (seen[w], v))
        seen[w] = v
        if not ws.language.accepts(w) or ws.decode(w) != v:
            raise AuditFailure("decode(encode(v)) != v", v)
        n += 1
    return n


def window_elements(ws: WreathStructure, window: tuple[int, int]) -> list[WreathElement]:
    group = ws.base.group
    values = [g for g in _base_elements(ws.base, 1) if g != group.identity]
    return enumerate_elements(ws.hspec, group, window, values)


def sparse_window_elements(ws: WreathStructure, window: tuple[int, int], max_lamps: int,
                           samples: int, seed: int) -> list[WreathElement]:
    """Every element with at most ``max_lamps`` lit lamps in ``window``, plus random ones."""
    group = ws.base.group
    identity = group.identity
    values = [g for g in _base_elements(ws.base, 1) if g != identity]
    sites = ws.hspec.elements(*window)
    out = []
    for r in range(max_lamps + 1):
        for chosen in itertools.combinations(sites, r):
            for vals in itertools.product(values, repeat=r):
                lamps = dict(zip(chosen, vals))
                out.extend(WreathElement.make(lamps, pos, identity) for pos in sites)
    rng = random.Random(seed)
    choices = [identity] + values
    for _ in range(samples):
        lamps = {h: rng.choice(choices) for h in sites}
        out.append(WreathElement.make(lamps, rng.choice(sites), identity))
    return out


def _oracle_generator(ws: WreathStructure, name: str) -> WreathElement:
    group = ws.base.group
    base_name, sign = parse_letter(name)
    g = generator_elements(ws.hspec, group)[base_name]
    return g if sign == 1 else wreath_inverse(ws.hspec, group, g)


def check_multipliers(ws: WreathStructure, depth: int) -> int:
    """Completeness and functionality: the image of every ``u`` is the oracle's."""
    group = ws.base.group
    words = fa.enumerate_words(ws.language, depth)
    checked = 0
    for name in ws.generators:
        a = _oracle_generator(ws, name)
        for u in words:
            try:
                v = fa.apply_relation(ws.multipliers[name], u)
            except (fa.NoImage, fa.NotFunctional) as exc:
                raise AuditFailure(f"R_{name}: {exc}", u) from exc
            if ws.decode(v) != wreath_mult(ws.hspec, group, ws.decode(u), a):
                raise AuditFailure(f"R_{name} maps to the wrong element", (u, v))
            checked += 1
    return checked


def check_multiplier_soundness(ws: WreathStructure, depth: int) -> int:
    group = ws.base.group
    checked = 0
    for name, r in ws.multipliers.items():
        a = _oracle_generator(ws, name)
        for u, v in fa.enumerate_pairs(r, depth):
            if ws.decode(v) != wreath_mult(ws.hspec, group, ws.decode(u), a):
                raise AuditFailure(f"R_{name} accepts a wrong pair", (u, v))
            checked += 1
    return checked


def check_inverse_coherence(ws: WreathStructure) -> int:
    n = 0
    for name in ws.generators:
        if name.endswith("^-1"):
            continue
        inv = ws.multipliers[f"{name}^-1"]
        if not fa.equivalent(inv, fa.relation_transpose(ws.multipliers[name])):
            raise AuditFailure(f"R_{name}^-1 is not the converse of R_{name}", name)
        n += 1
    return n


def check_shift_law(ws: WreathStructure, depth: int, strict: bool = False) -> tuple[int, int]:
    """Compare the ``C*`` offset of same-support pairs with the shift table.

    The tabulated offset holds whenever ``B0`` does not sit between the two
    ``C*`` markers.  When it does, the offset differs by exactly one because
    the ``B0`` symbol is counted in the projection.  Returns the number of
    pairs checked and the number that needed that correction; with
    ``strict`` the correction counts as a failure.
    """
    checked = corrected = 0
    for u in fa.enumerate_words(ws.language, depth):
        vu = ws.decode(u)
        for (q, name), entry in ws.shifts.items():
            if vu.position.q != q:
                continue
            v = fa.apply_relation(ws.multipliers[name], u)
            if support_info(ws.decode(v)).interval != support_info(vu).interval:
                continue
            pu, pv = project_markers(u), project_markers(v)
            i, j = pu.index(CSTAR), pv.index(CSTAR)
            b = pu.index(B0)
            crossing = min(i, j) < b < max(i, j)
            expected = entry.shift
            if crossing:
                expected += 1 if i > j else -1
            offset = i - j
            if offset != expected or (strict and crossing):
                raise AuditFailure(f"C* offset {offset} for x{q}*{name}, table says "
                                   f"{entry.shift}", (u, v))
            checked += 1
            corrected += crossing
    return checked, corrected


def check_word_problem(ws: WreathStructure, count: int, max_len: int, seed: int,
                       prefixes: bool = False) -> int:
    words = targeted_words(ws) + random_words(ws, count, max_len, seed)
    for i, w in enumerate(words):
        if not crosscheck(ws, w, prefixes=prefixes or i < len(words) - count):
            raise AuditFailure("solver disagrees with the oracle", w)
    return len(words)


def run_all(ws: WreathStructure, language_depth: int = 12, multiplier_depth: int = 10,
            window: tuple[int, int] = (-2, 2), seed: int = 0, words: int = 200) -> AuditLog:
    log = AuditLog()
    log.note(f"language: {check_language(ws, language_depth)} words up to length "
             f"{language_depth} match the oracle")
    log.note(f"markers: {check_markers(ws, language_depth)} words well formed")
    log.note(f"encode(decode(w)) = w on {check_roundtrip_words(ws, language_depth)} words")
    sites = (window[1] - window[0] + 1) * (ws.m + 1)
    values = len(_base_elements(ws.base, 1))
    if values ** sites * sites <= 200_000:
        elements = window_elements(ws, window)
        label = f"all of window {window[0]}:{window[1]}"
    else:
        elements = sparse_window_elements(ws, window, 2, 20_000, seed)
        label = f"window {window[0]}:{window[1]}, <= 2 lamps + 20000 random"
    log.note(f"decode(encode(v)) = v on {check_roundtrip_elements(ws, elements)} elements "
             f"({label})")
    log.note(f"multipliers: {check_multipliers(ws, multiplier_depth)} images match the oracle")
    log.note(f"soundness: {check_multiplier_soundness(ws, multiplier_depth)} accepted pairs "
             "are correct")
    log.note(f"inverse coherence: {check_inverse_coherence(ws)} converse pairs equal")
    checked, corrected = check_shift_law(ws, multiplier_depth)
    log.note(f"shift law: {checked} same-support pairs, {corrected} with B0 between the markers")
    log.note(f"word problem: {check_word_problem(ws, words, 40, seed)} words agree with the "
             "oracle")
    return log

"""Ground-truth group arithmetic: base groups, virtually-Z groups, wreath products.

Everything here is brute force on purpose.  It is the oracle the automata are
checked against, so it shares no code with the automaton constructions.

A virtually infinite cyclic group H is given by coset data over <t>: every
element is uniquely ``t^k x_q`` with ``0 <= q <= m`` and ``x_0 = 1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence


class GroupSpecError(ValueError):
    """A group table or coset table violates the group axioms."""


class UnknownGenerator(KeyError):
    def __str__(self):
        return f"unknown generator {self.args[0]!r}"


# ---------------------------------------------------------------------------
# base groups


@dataclass(frozen=True, eq=False)
class FiniteGroupTable:
    order: int
    mult: tuple
    inverse: tuple
    identity: int
    generator_indices: tuple
    names: tuple

    def __post_init__(self):
        n = self.order
        object.__setattr__(self, "mult", tuple(tuple(row) for row in self.mult))
        object.__setattr__(self, "inverse", tuple(self.inverse))
        object.__setattr__(self, "generator_indices", tuple(self.generator_indices))
        object.__setattr__(self, "names", tuple(self.names))
        if len(self.mult) != n or any(len(row) != n for row in self.mult):
            raise GroupSpecError("multiplication table is not order x order")
        if len(self.names) != n or len(set(self.names)) != n:
            raise GroupSpecError("need one distinct name per element")
        e, mul, inv = self.identity, self.mult, self.inverse
        for a in range(n):
            if mul[e][a] != a or mul[a][e] != a:
                raise GroupSpecError(f"identity law fails at {self.names[a]}")
            if mul[a][inv[a]] != e or mul[inv[a]][a] != e:
                raise GroupSpecError(f"inverse law fails at {self.names[a]}")
        for a, b, c in itertools.product(range(n), repeat=3):
            if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
                raise GroupSpecError(
                    f"associativity fails at ({self.names[a]}, {self.names[b]}, {self.names[c]})")
        reached = {e}
        frontier = [e]
        while frontier:
            x = frontier.pop()
            for g in self.generator_indices:
                for y in (mul[x][g], mul[x][inv[g]]):
                    if y not in reached:
                        reached.add(y)
                        frontier.append(y)
        if len(reached) != n:
            raise GroupSpecError("generators do not generate the group")

    def mul(self, a: int, b: int) -> int:
        return self.mult[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def elements(self) -> range:
        return range(self.order)

    @property
    def generators(self) -> dict[str, int]:
        return {self.names[g]: g for g in self.generator_indices}

    def name(self, a: int) -> str:
        return self.names[a]


def cyclic_group(n: int, names: Sequence[str] | None = None) -> FiniteGroupTable:
    if names is None:
        names = ["e"] + ["a" if n == 2 else f"c{i}" if i > 1 else "c" for i in range(1, n)]
    mult = [[(i + j) % n for j in range(n)] for i in range(n)]
    inverse = [(-i) % n for i in range(n)]
    return FiniteGroupTable(n, mult, inverse, 0, (1,) if n > 1 else (), names)


@dataclass(frozen=True)
class IntegerGroup:
    """The infinite cyclic group written additively, generated by ``a = 1``."""

    generator: str = "a"
    identity: int = 0

    def mul(self, a: int, b: int) -> int:
        return a + b

    def inv(self, a: int) -> int:
        return -a

    @property
    def generators(self) -> dict[str, int]:
        return {self.generator: 1}

    def name(self, a: int) -> str:
        return str(a)


# ---------------------------------------------------------------------------
# virtually infinite cyclic groups


@dataclass(frozen=True, order=True)
class HElement:
    """The element ``t^k x_q``; ``k`` is its image under the t-exponent map."""

    k: int
    q: int

    def __str__(self):
        parts = []
        if self.k:
            parts.append("t" if self.k == 1 else f"t^{self.k}")
        if self.q:
            parts.append(f"x{self.q}")
        return "".join(parts) or "1"


H_IDENTITY = HElement(0, 0)


@dataclass(frozen=True, eq=False)
class VirtuallyZSpec:
    """Coset data: ``x_q x_i = t^k x_r``, ``x_q t = t^k x_r``, ``x_q^-1 = t^k x_r``."""

    m: int
    coset_mult: tuple
    t_conj: tuple
    inverse: tuple
    name: str = "H"
    _t_inv: tuple = field(init=False, repr=False)

    def __post_init__(self):
        m = self.m
        pairs = lambda rows: tuple((int(k), int(r)) for k, r in rows)
        object.__setattr__(self, "coset_mult", tuple(pairs(row) for row in self.coset_mult))
        object.__setattr__(self, "t_conj", pairs(self.t_conj))
        object.__setattr__(self, "inverse", pairs(self.inverse))
        if m < 0:
            raise GroupSpecError("m must be non-negative")
        if (len(self.coset_mult) != m + 1 or any(len(r) != m + 1 for r in self.coset_mult)
                or len(self.t_conj) != m + 1 or len(self.inverse) != m + 1):
            raise GroupSpecError("coset tables must have m+1 entries")
        for table in (self.t_conj, self.inverse, *self.coset_mult):
            for _, r in table:
                if not 0 <= r <= m:
                    raise GroupSpecError(f"coset index {r} out of range")
        for i in range(m + 1):
            if self.coset_mult[0][i] != (0, i) or self.coset_mult[i][0] != (0, i):
                raise GroupSpecError(f"x_0 is not the identity in coset_mult (index {i})")
        if self.t_conj[0] != (1, 0) or self.inverse[0] != (0, 0):
            raise GroupSpecError("x_0 must be the identity")
        targets = [r for _, r in self.t_conj]
        if sorted(targets) != list(range(m + 1)):
            raise GroupSpecError("right multiplication by t must permute the cosets")
        t_inv = [None] * (m + 1)
        for q, (k, r) in enumerate(self.t_conj):
            t_inv[r] = (-k, q)  # x_q t = t^k x_r  =>  x_r t^-1 = t^-k x_q
        object.__setattr__(self, "_t_inv", tuple(t_inv))

    @property
    def index(self) -> int:
        return self.m + 1

    def shift_by_t(self, q: int, n: int) -> HElement:
        """``x_q t^n`` in normal form."""
        k = 0
        step = self.t_conj if n > 0 else self._t_inv
        for _ in range(abs(n)):
            dk, q = step[q]
            k += dk
        return HElement(k, q)

    def elements(self, lo: int, hi: int) -> list[HElement]:
        return [HElement(k, q) for k in range(lo, hi + 1) for q in range(self.m + 1)]


def h_mult(spec: VirtuallyZSpec, a: HElement, b: HElement) -> HElement:
    moved = spec.shift_by_t(a.q, b.k)
    k, r = spec.coset_mult[moved.q][b.q]
    return HElement(a.k + moved.k + k, r)


def h_inverse(spec: VirtuallyZSpec, a: HElement) -> HElement:
    k, q = spec.inverse[a.q]
    return h_mult(spec, HElement(k, q), HElement(-a.k, 0))


def audit_virtually_z(spec: VirtuallyZSpec, radius: int = 3) -> None:
    """Check associativity and inverses on ``{t^k x_q : |k| <= radius}``."""
    window = spec.elements(-radius, radius)
    for a in window:
        if h_mult(spec, a, H_IDENTITY) != a or h_mult(spec, H_IDENTITY, a) != a:
            raise GroupSpecError(f"identity law fails at {a}")
        ai = h_inverse(spec, a)
        if h_mult(spec, a, ai) != H_IDENTITY or h_mult(spec, ai, a) != H_IDENTITY:
            raise GroupSpecError(f"inverse law fails at {a}")
    products = {(a, b): h_mult(spec, a, b) for a in window for b in window}
    for a, b, c in itertools.product(window, repeat=3):
        left = h_mult(spec, products[a, b], c)
        right = h_mult(spec, a, products[b, c])
        if left != right:
            raise GroupSpecError(f"associativity fails at ({a}, {b}, {c})")


def integers_spec() -> VirtuallyZSpec:
    return VirtuallyZSpec(0, [[(0, 0)]], [(1, 0)], [(0, 0)], name="Z")


def infinite_dihedral_spec() -> VirtuallyZSpec:
    """``<a, b | a^2, b^2>`` with ``t = ab`` and ``x_1 = a``; ``x_1 t = t^-1 x_1``."""
    return VirtuallyZSpec(
        1,
        [[(0, 0), (0, 1)], [(0, 1), (0, 0)]],
        [(1, 0), (-1, 1)],
        [(0, 0), (0, 1)],
        name="D_inf",
    )


def z_times_cyclic_spec(n: int) -> VirtuallyZSpec:
    """``Z x Z_n`` with ``t = (1, 0)`` and ``x_q = (0, q)``."""
    return VirtuallyZSpec(
        n - 1,
        [[(0, (q + i) % n) for i in range(n)] for q in range(n)],
        [(1, q) for q in range(n)],
        [(0, (-q) % n) for q in range(n)],
        name=f"Z x Z_{n}",
    )


def integers_over_even_spec(rep: int = 1) -> VirtuallyZSpec:
    """``Z`` over its index-two subgroup: ``t = 2`` and ``x_1 = rep`` (odd).

    ``x_1 x_1 = t^rep`` and ``x_1^-1 = t^-rep x_1``, so a larger ``rep``
    makes right multiplication by ``x_1`` jump further along the spine.
    """
    if rep % 2 != 1:
        raise GroupSpecError("the coset representative must be odd")
    return VirtuallyZSpec(
        1,
        [[(0, 0), (0, 1)], [(0, 1), (rep, 0)]],
        [(1, 0), (1, 1)],
        [(0, 0), (-rep, 1)],
        name="Z over 2Z" if rep == 1 else f"Z over 2Z, x1 = {rep}",
    )


# ---------------------------------------------------------------------------
# wreath products


@dataclass(frozen=True)
class WreathElement:
    """``(support, position)``; the support stores only non-identity lamps."""

    support: frozenset  # of (HElement, base element) pairs
    position: HElement = H_IDENTITY

    @classmethod
    def make(cls, lamps: Mapping[HElement, object], position: HElement, identity) -> "WreathElement":
        return cls(frozenset((h, g) for h, g in lamps.items() if g != identity), position)

    @property
    def lamps(self) -> dict:
        return dict(self.support)


@dataclass(frozen=True)
class SupportInfo:
    k_star: int
    k1: int
    k2: int
    m1: int
    m2: int

    @property
    def interval(self) -> tuple[int, int]:
        return self.m1, self.m2


def wreath_identity() -> WreathElement:
    return WreathElement(frozenset(), H_IDENTITY)


def wreath_mult(spec: VirtuallyZSpec, base, a: WreathElement, b: WreathElement) -> WreathElement:
    lamps = a.lamps
    h = a.position
    for y, g in b.support:
        x = h_mult(spec, h, y)
        lamps[x] = base.mul(lamps.get(x, base.identity), g)
    return WreathElement.make(lamps, h_mult(spec, h, b.position), base.identity)


def wreath_inverse(spec: VirtuallyZSpec, base, a: WreathElement) -> WreathElement:
    hinv = h_inverse(spec, a.position)
    lamps = {h_mult(spec, hinv, x): base.inv(g) for x, g in a.support}
    return WreathElement.make(lamps, hinv, base.identity)


def parse_letter(token: str) -> tuple[str, int]:
    """``"x1^-1"`` -> ``("x1", -1)``."""
    if token.endswith("^-1"):
        return token[:-3], -1
    return token, 1


def generator_elements(spec: VirtuallyZSpec, base) -> dict[str, WreathElement]:
    gens = {name: WreathElement.make({H_IDENTITY: g}, H_IDENTITY, base.identity)
            for name, g in base.generators.items()}
    gens["t"] = WreathElement(frozenset(), HElement(1, 0))
    for i in range(1, spec.m + 1):
        gens[f"x{i}"] = WreathElement(frozenset(), HElement(0, i))
    return gens


def eval_word(spec: VirtuallyZSpec, base, word: Iterable[str]) -> WreathElement:
    gens = generator_elements(spec, base)
    result = wreath_identity()
    for token in word:
        name, sign = parse_letter(token)
        if name not in gens:
            raise UnknownGenerator(token)
        g = gens[name] if sign == 1 else wreath_inverse(spec, base, gens[name])
        result = wreath_mult(spec, base, result, g)
    return result


def support_info(v: WreathElement) -> SupportInfo:
    ks = [h.k for h, _ in v.support]
    k_star = v.position.k
    k1 = min([0] + ks)
    k2 = max([0] + ks)
    return SupportInfo(k_star, k1, k2, min(k_star, k1), max(k_star, k2))


def enumerate_elements(spec: VirtuallyZSpec, base, window: tuple[int, int],
                       value_set: Iterable) -> list[WreathElement]:
    """All elements with lamps and position over t-exponents in ``window``."""
    w1, w2 = window
    if not w1 <= 0 <= w2:
        raise ValueError("window must contain 0")
    sites = spec.elements(w1, w2)
    values = [base.identity] + sorted({g for g in value_set if g != base.identity})
    out = []
    for choice in itertools.product(values, repeat=len(sites)):
        lamps = {h: g for h, g in zip(sites, choice) if g != base.identity}
        support = frozenset(lamps.items())
        for pos in sites:
            out.append(WreathElement(support, pos))
    return out


def format_element(v: WreathElement, base) -> str:
    lamps = ", ".join(f"{h}:{base.name(g)}" for h, g in sorted(v.support, key=lambda p: p[0]))
    return f"({{{lamps}}}, {v.position})"

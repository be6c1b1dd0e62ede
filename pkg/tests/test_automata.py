import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cayley_wreath import automata as fa
from cayley_wreath.automata import PAD, Alphabet, FiniteAutomaton, PairAlphabet

AB = Alphabet(("a", "b"))
A = Alphabet(("a",))


def brute_accepts(spec, word):
    """Reference NFA simulation straight from the raw transition list."""
    n, initial, accepting, trans = spec
    current = set(initial)
    for sym in word:
        current = {d for s, x, d in trans if s in current and x == sym}
    return bool(current & set(accepting))


def build(spec, alphabet=AB):
    n, initial, accepting, trans = spec
    return FiniteAutomaton.build(alphabet, n, initial, accepting, trans)


def all_words(k, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(range(k), repeat=n)


@st.composite
def nfas(draw, k=2, max_states=5):
    n = draw(st.integers(1, max_states))
    state = st.integers(0, n - 1)
    trans = draw(st.lists(st.tuples(state, st.integers(0, k - 1), state), max_size=3 * n * k))
    initial = draw(st.sets(state, min_size=1, max_size=2))
    accepting = draw(st.sets(state, max_size=n))
    return n, sorted(initial), sorted(accepting), sorted(set(trans))


def star_a(extra_states=3):
    # a* written with a chain of equivalent accepting states
    n = extra_states + 1
    trans = [(i, 0, (i + 1) % n) for i in range(n)]
    return FiniteAutomaton.build(A, n, {0}, range(n), trans, True)


# -- alphabets -------------------------------------------------------------


def test_alphabet_rejects_duplicates_and_pad():
    with pytest.raises(ValueError):
        Alphabet(("a", "a"))
    with pytest.raises(ValueError):
        Alphabet(("a", fa.PAD_NAME))


def test_pair_alphabet_size_and_names():
    for k in range(1, 5):
        base = Alphabet(tuple(f"s{i}" for i in range(k)))
        assert len(PairAlphabet.over(base)) == (k + 1) ** 2 - 1
    pa = PairAlphabet.over(AB)
    assert pa.symbols == ("a|a", "a|b", "a|~", "b|a", "b|b", "b|~", "~|a", "~|b")
    assert pa.components(pa.pair_index(None, 1)) == (None, 1)
    with pytest.raises(fa.PaddingViolation):
        pa.pair_index(None, None)


def test_deterministic_flag_is_enforced():
    with pytest.raises(ValueError):
        FiniteAutomaton.build(A, 2, {0}, {1}, [(0, 0, 0), (0, 0, 1)], True)


# -- determinize / minimize ---------------------------------------------------


def test_determinize_finite_language():
    nfa = FiniteAutomaton.build(A, 3, {0}, {1, 2}, [(0, 0, 1), (0, 0, 2), (2, 0, 1)])
    assert not nfa.deterministic
    dfa = fa.determinize(nfa)
    assert dfa.deterministic
    assert dfa.n_states == 3
    assert fa.enumerate_words(dfa, 5) == [("a",), ("a", "a")]


def test_minimize_collapses_redundant_states():
    m = fa.minimize(star_a(3))
    assert m.n_states == 1
    assert m.accepting == {0}


def test_minimize_empty_language_is_single_state():
    m = fa.minimize(FiniteAutomaton.build(AB, 3, {0}, (), [(0, 0, 1), (1, 1, 2)], True))
    assert m.n_states == 1
    assert not m.accepting
    assert fa.is_empty(m)


@settings(max_examples=150, deadline=None)
@given(nfas())
def test_determinize_and_minimize_preserve_language(spec):
    a = build(spec)
    d = fa.determinize(a)
    m = fa.minimize(a)
    assert d.deterministic and m.deterministic
    for w in all_words(2, 6):
        want = brute_accepts(spec, w)
        assert d.accepts_indices(w) == want
        assert m.accepts_indices(w) == want


@settings(max_examples=100, deadline=None)
@given(nfas())
def test_minimize_is_canonical(spec):
    m = fa.minimize(build(spec))
    assert fa.structurally_equal(fa.minimize(m), m)
    # a different presentation of the same language: reverse the state numbering
    n, initial, accepting, trans = spec
    flip = lambda s: n - 1 - s
    other = (n, [flip(s) for s in initial], [flip(s) for s in accepting],
             [(flip(s), x, flip(d)) for s, x, d in trans])
    assert fa.structurally_equal(fa.minimize(build(other)), m)


# -- boolean algebra ------------------------------------------------------


def test_product_examples():
    star = fa.minimize(star_a(0))
    even = FiniteAutomaton.build(A, 2, {0}, {0}, [(0, 0, 1), (1, 0, 0)], True)
    assert fa.equivalent(fa.product(star, even), even)
    assert fa.is_empty(fa.product(star, fa.empty(A)))
    with pytest.raises(fa.AlphabetMismatch):
        fa.product(star, fa.universal(AB))
    with pytest.raises(fa.AlphabetMismatch):
        fa.equivalent(star, fa.universal(AB))


@settings(max_examples=150, deadline=None)
@given(nfas(), nfas(), st.sampled_from(["intersect", "union", "difference", "xor"]))
def test_product_matches_membership(s1, s2, mode):
    ops = {"intersect": lambda x, y: x and y, "union": lambda x, y: x or y,
           "difference": lambda x, y: x and not y, "xor": lambda x, y: x != y}
    p = fa.product(build(s1), build(s2), mode)
    for w in all_words(2, 6):
        assert p.accepts_indices(w) == ops[mode](brute_accepts(s1, w), brute_accepts(s2, w))


def test_complement_examples():
    assert fa.equivalent(fa.complement(fa.empty(AB)), fa.universal(AB))
    a = fa.from_words(AB, [("a",), ("a", "b")])
    assert fa.equivalent(fa.complement(fa.complement(a)), a)


@settings(max_examples=150, deadline=None)
@given(nfas())
def test_complement_matches_membership(spec):
    c = fa.complement(build(spec))
    for w in all_words(2, 6):
        assert c.accepts_indices(w) != brute_accepts(spec, w)


@settings(max_examples=100, deadline=None)
@given(nfas(max_states=3), nfas(max_states=3))
def test_equivalence_matches_bounded_enumeration(s1, s2):
    a, b = build(s1), build(s2)
    # complete DFAs with n1 and n2 states that differ do so on a word shorter
    # than n1 + n2; minimize() is partial, so count the missing sink too
    bound = fa.minimize(a).n_states + fa.minimize(b).n_states + 1
    differ = any(brute_accepts(s1, w) != brute_accepts(s2, w) for w in all_words(2, bound))
    assert fa.equivalent(a, b) == (not differ)
    assert fa.equivalent(a, fa.minimize(fa.determinize(a)))


def test_is_empty_ignores_unreachable_accepting_states():
    a = FiniteAutomaton.build(AB, 2, {0}, {1}, [(1, 0, 1)], True)
    assert fa.is_empty(a)
    assert fa.is_empty(fa.empty(AB))


# -- enumeration ----------------------------------------------------------


def test_enumerate_examples():
    assert fa.enumerate_words(star_a(0), 2) == [(), ("a",), ("a", "a")]
    assert fa.enumerate_words(fa.empty(AB), 4) == []
    with pytest.raises(ValueError):
        fa.enumerate_words(star_a(0), -1)


@settings(max_examples=100, deadline=None)
@given(nfas())
def test_enumerate_is_sorted_and_complete(spec):
    a = build(spec)
    got = fa.enumerate_words(a, 5)
    want = [AB.decode(w) for w in all_words(2, 5) if brute_accepts(spec, w)]
    assert got == want


# -- convolution and relations -------------------------------------------


def test_convolve_examples():
    assert fa.convolve("ab", "b") == [("a", "b"), ("b", PAD)]
    assert fa.convolve("", "") == []
    with pytest.raises(fa.PaddingViolation):
        fa.deconvolve([("a", PAD), ("b", "b")])
    with pytest.raises(fa.PaddingViolation):
        fa.deconvolve([(PAD, PAD)])


@given(st.text("ab", max_size=8), st.text("ab", max_size=8))
def test_convolve_roundtrip(u, v):
    cw = fa.convolve(tuple(u), tuple(v))
    assert len(cw) == max(len(u), len(v))
    assert fa.deconvolve(cw) == (tuple(u), tuple(v))


def test_transpose_examples():
    ident = fa.identity_relation(AB)
    assert fa.equivalent(fa.relation_transpose(ident), ident)
    with pytest.raises(fa.NotPairAlphabet):
        fa.relation_transpose(fa.universal(AB))


@settings(max_examples=60, deadline=None)
@given(st.sets(st.tuples(st.text("ab", max_size=4), st.text("ab", max_size=4)), max_size=6))
def test_transpose_swaps_pairs(pairs):
    pa = PairAlphabet.over(AB)
    words = [[pa.symbols[i] for i in fa.pair_word(pa, u, v)] for u, v in pairs]
    r = fa.from_words(pa, words)
    t = fa.relation_transpose(r)
    assert fa.equivalent(fa.relation_transpose(t), r)
    for u, v in pairs:
        assert fa.accepts_pair(t, v, u)
    assert sorted(fa.enumerate_pairs(t, 4)) == sorted(
        (tuple(v), tuple(u)) for u, v in pairs)


def test_convolution_language_is_the_product_of_languages():
    a = fa.from_words(AB, [("a",), ("a", "b", "b")])
    b = fa.from_words(AB, [(), ("b", "b")])
    got = sorted(fa.enumerate_pairs(fa.convolution_language(a, b), 5))
    want = sorted((u, v) for u in [("a",), ("a", "b", "b")] for v in [(), ("b", "b")])
    assert got == want


def _relation(pairs):
    pa = PairAlphabet.over(AB)
    words = [[pa.symbols[i] for i in fa.pair_word(pa, u, v)] for u, v in pairs]
    return fa.minimize(fa.from_words(pa, words))


def test_apply_relation_finds_the_unique_image():
    r = _relation([("ab", "b"), ("a", "bbb"), ("", "a")])
    assert fa.apply_relation(r, "ab") == ("b",)
    assert fa.apply_relation(r, "a") == ("b", "b", "b")
    assert fa.apply_relation(r, "") == ("a",)


def test_apply_relation_errors():
    r = _relation([("a", "b"), ("a", "bb")])
    with pytest.raises(fa.NotFunctional):
        fa.apply_relation(r, "a")
    with pytest.raises(fa.NoImage):
        fa.apply_relation(r, "b")
    with pytest.raises(fa.NoImage):
        fa.apply_relation(r, "z")
    # a -> a b^n for every n: infinitely many images
    pa = PairAlphabet.over(AB)
    loop = FiniteAutomaton.build(pa, 2, {0}, {1}, [(0, pa.pair_index(0, 0), 1),
                                                    (1, pa.pair_index(None, 1), 1)], True)
    with pytest.raises(fa.NotFunctional):
        fa.apply_relation(loop, "a")


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.text("ab", max_size=4), st.text("ab", max_size=5), max_size=6))
def test_apply_relation_on_random_functions(f):
    r = _relation(f.items())
    for u, v in f.items():
        assert fa.apply_relation(r, u) == tuple(v)


# -- serialization -----------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(nfas())
def test_json_roundtrip(spec):
    a = build(spec)
    b = fa.loads(fa.dumps(a))
    assert b.n_states == a.n_states and b.delta == a.delta
    assert b.initial == a.initial and b.accepting == a.accepting


def test_pair_automaton_json_keeps_pair_alphabet():
    r = fa.identity_relation(AB)
    doc = fa.to_dict(r)
    assert doc["alphabet"][2] == "a|~"
    back = fa.from_dict(doc)
    assert isinstance(back.alphabet, PairAlphabet)
    assert fa.apply_relation(back, "ab") == ("a", "b")

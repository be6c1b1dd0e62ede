"""The oracle itself is checked against concrete faithful representations."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cayley_wreath.groups import (H_IDENTITY, FiniteGroupTable, GroupSpecError, HElement,
                                  IntegerGroup, UnknownGenerator, VirtuallyZSpec, WreathElement,
                                  audit_virtually_z, cyclic_group, enumerate_elements, eval_word,
                                  h_inverse, h_mult, infinite_dihedral_spec,
                                  integers_over_even_spec, integers_spec, support_info,
                                  wreath_identity, wreath_inverse, wreath_mult,
                                  z_times_cyclic_spec)

# Concrete models: t^k x_q -> something whose product we trust.
#   Z x Z_n : pairs (k, q) added componentwise
#   D_inf   : affine maps x -> s*x + c composed as functions, t = x+1, x1 = -x
#   Z / 2Z  : the integer 2k + q


def affine_mul(f, g):
    (s1, c1), (s2, c2) = f, g
    return (s1 * s2, s1 * c2 + c1)


def affine_of(h):
    t = (1, h.k)
    return affine_mul(t, (-1, 0)) if h.q else t


MODELS = {
    "zn": (z_times_cyclic_spec(4), lambda h: (h.k, h.q),
           lambda a, b: (a[0] + b[0], (a[1] + b[1]) % 4)),
    "dinf": (infinite_dihedral_spec(), affine_of, affine_mul),
    "even": (integers_over_even_spec(), lambda h: 2 * h.k + h.q, lambda a, b: a + b),
    "z": (integers_spec(), lambda h: h.k, lambda a, b: a + b),
}

h_elements = st.builds(HElement, st.integers(-6, 6), st.integers(0, 3))


@pytest.mark.parametrize("name", sorted(MODELS))
def test_h_mult_matches_model(name):
    spec, rep, mul = MODELS[name]
    window = spec.elements(-4, 4)
    images = {rep(h) for h in window}
    assert len(images) == len(window)  # the model is faithful on the window
    for a, b in itertools.product(window, repeat=2):
        assert rep(h_mult(spec, a, b)) == mul(rep(a), rep(b))
        assert h_mult(spec, a, h_inverse(spec, a)) == H_IDENTITY


@pytest.mark.parametrize("name", sorted(MODELS))
def test_coset_tables_pass_the_audit(name):
    audit_virtually_z(MODELS[name][0], radius=3)


def test_dihedral_coset_law():
    spec = infinite_dihedral_spec()
    x1, t = HElement(0, 1), HElement(1, 0)
    assert h_mult(spec, x1, t) == HElement(-1, 1)
    assert h_mult(spec, x1, x1) == H_IDENTITY
    assert h_mult(spec, h_mult(spec, h_mult(spec, x1, t), x1), t) == H_IDENTITY


def test_broken_associativity_is_reported():
    mult = [[0, 1, 2], [1, 2, 0], [2, 0, 0]]
    with pytest.raises(GroupSpecError, match="fails"):
        FiniteGroupTable(3, mult, [0, 2, 1], 0, [1], ["e", "a", "b"])


def test_finite_table_needs_generating_set():
    c4 = cyclic_group(4)
    with pytest.raises(GroupSpecError, match="generate"):
        FiniteGroupTable(4, c4.mult, c4.inverse, 0, [2], c4.names)


def test_bad_coset_data_is_rejected():
    with pytest.raises(GroupSpecError):
        VirtuallyZSpec(1, [[(0, 0), (0, 1)], [(0, 1), (0, 0)]], [(1, 0), (1, 0)], [(0, 0), (0, 1)])
    with pytest.raises(GroupSpecError):
        VirtuallyZSpec(0, [[(0, 0)]], [(2, 0)], [(0, 0)])
    # passes the local checks but x1 x1 = t contradicts x1^-1 = x1
    broken = VirtuallyZSpec(1, [[(0, 0), (0, 1)], [(0, 1), (1, 0)]], [(1, 0), (-1, 1)],
                            [(0, 0), (0, 1)])
    with pytest.raises(GroupSpecError):
        audit_virtually_z(broken)


def test_support_info_examples():
    assert support_info(wreath_identity()) == support_info(WreathElement(frozenset(), H_IDENTITY))
    info = support_info(wreath_identity())
    assert (info.k_star, info.k1, info.k2, info.m1, info.m2) == (0, 0, 0, 0, 0)
    v = WreathElement.make({HElement(-2, 2): 1, HElement(1, 1): 2}, HElement(-1, 3), 0)
    assert support_info(v).interval == (-2, 1)
    w = WreathElement.make({}, HElement(3, 0), 0)
    assert support_info(w).interval == (0, 3)


def test_enumerate_elements_count():
    spec = infinite_dihedral_spec()
    els = enumerate_elements(spec, cyclic_group(2), (-1, 1), [1])
    sites = 3 * 2
    assert len(els) == 2 ** sites * sites
    assert len(set(els)) == len(els)
    with pytest.raises(ValueError):
        enumerate_elements(spec, cyclic_group(2), (1, 2), [1])


def _model_wreath(rep, v):
    """``(γ, h)`` with γ keyed by the model images of the lamp positions."""
    return {rep(h): g for h, g in v.support}, rep(v.position)


def _model_wreath_mult(mul, group, a, b):
    # (γ, h)(γ', h') = (γ γ'^{h^-1}, h h'), where γ'^{h^-1}(x) = γ'(h^-1 x)
    (ga, ha), (gb, hb) = a, b
    lamps = dict(ga)
    for y, g in gb.items():
        x = mul(ha, y)
        lamps[x] = group.mul(lamps.get(x, group.identity), g)
    return {x: g for x, g in lamps.items() if g != group.identity}, mul(ha, hb)


@st.composite
def wreath_elements(draw, spec, group):
    sites = spec.elements(-2, 2)
    values = [g for g in range(group.order) if g != group.identity]
    lamps = draw(st.dictionaries(st.sampled_from(sites), st.sampled_from(values), max_size=4))
    return WreathElement.make(lamps, draw(st.sampled_from(sites)), group.identity)


@pytest.mark.parametrize("name", ["zn", "dinf", "even"])
def test_wreath_mult_matches_model(name):
    spec, rep, mul = MODELS[name]
    group = cyclic_group(3)

    @settings(max_examples=200, deadline=None)
    @given(wreath_elements(spec, group), wreath_elements(spec, group))
    def check(a, b):
        got = wreath_mult(spec, group, a, b)
        want = _model_wreath_mult(mul, group, _model_wreath(rep, a), _model_wreath(rep, b))
        assert _model_wreath(rep, got) == want
        one = wreath_mult(spec, group, a, wreath_inverse(spec, group, a))
        assert one == wreath_identity()

    check()


def test_wreath_associativity_on_samples():
    spec = infinite_dihedral_spec()
    group = cyclic_group(3)

    @settings(max_examples=150, deadline=None)
    @given(wreath_elements(spec, group), wreath_elements(spec, group),
           wreath_elements(spec, group))
    def check(a, b, c):
        left = wreath_mult(spec, group, wreath_mult(spec, group, a, b), c)
        right = wreath_mult(spec, group, a, wreath_mult(spec, group, b, c))
        assert left == right

    check()


def test_eval_word_lamplighter():
    spec, z2 = integers_spec(), cyclic_group(2)
    v = eval_word(spec, z2, "a t a t^-1 a".split())
    # the two toggles at the origin cancel; one lamp stays lit at t
    assert v == WreathElement.make({HElement(1, 0): 1}, H_IDENTITY, 0)
    assert eval_word(spec, z2, []) == wreath_identity()
    with pytest.raises(UnknownGenerator):
        eval_word(spec, z2, ["x1"])


def test_eval_word_dihedral_relator():
    spec, z2 = infinite_dihedral_spec(), cyclic_group(2)
    assert eval_word(spec, z2, "x1 t x1 t".split()) == wreath_identity()
    assert eval_word(spec, z2, "x1 x1^-1 t^-1 t".split()) == wreath_identity()


def test_integer_base_group():
    z = IntegerGroup()
    spec = infinite_dihedral_spec()
    v = eval_word(spec, z, "a a t a^-1 x1 a".split())
    assert v.lamps == {H_IDENTITY: 2, HElement(1, 0): -1, HElement(1, 1): 1}
    assert v.position == HElement(1, 1)


@given(h_elements, h_elements, h_elements)
def test_h_associativity_dihedral(a, b, c):
    spec = infinite_dihedral_spec()
    a, b, c = (HElement(h.k, h.q % 2) for h in (a, b, c))
    assert h_mult(spec, h_mult(spec, a, b), c) == h_mult(spec, a, h_mult(spec, b, c))

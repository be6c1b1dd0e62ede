from dataclasses import replace
from fractions import Fraction

import pytest

from cayley_wreath import automata as fa
from cayley_wreath.automata import FiniteAutomaton, PairAlphabet
from cayley_wreath.base import (UnboundedShift, ValidationFailure, build_finite_group_structure,
                                multiplier_shift_bound, quasigeodesic_bound, relation_shift_bound,
                                validate_structure)
from cayley_wreath.groups import cyclic_group


def test_finite_structure_shape(z3):
    assert z3.alphabet.symbols == ("c", "c2")
    assert fa.enumerate_words(z3.language, 3) == [(), ("c",), ("c2",)]
    assert set(z3.multipliers) == {"c", "c^-1"}
    assert z3.inverse_of["c"] == "c^-1"
    assert fa.apply_relation(z3.multipliers["c"], ("c2",)) == ()
    assert fa.apply_relation(z3.multipliers["c^-1"], ()) == ("c2",)


def test_trivial_group_has_no_multipliers():
    b = build_finite_group_structure(cyclic_group(1))
    assert fa.enumerate_words(b.language, 3) == [()]
    assert b.multipliers == {}
    assert validate_structure(b, 3).words_checked == 1


def test_integer_structure(zbase):
    assert fa.enumerate_words(zbase.language, 2) == [(), ("p",), ("n",), ("p", "p"), ("n", "n")]
    plus = zbase.multipliers["a"]
    for k in range(-5, 6):
        assert zbase.evaluate(fa.apply_relation(plus, zbase.encode(k))) == k + 1
        assert zbase.evaluate(fa.apply_relation(zbase.multipliers["a^-1"], zbase.encode(k))) == k - 1
    with pytest.raises(ValueError):
        zbase.evaluate(("p", "n"))


@pytest.mark.parametrize("name", ["z2", "z3", "zbase"])
def test_validation_passes(name, request):
    b = request.getfixturevalue(name)
    report = validate_structure(b, 6)
    assert report.words_checked == len(fa.enumerate_words(b.language, 6))
    assert report.quasigeodesic.lam == 1
    assert all(d == 1 for d in report.shift_bounds.values())
    assert report.lines()[0].startswith("audit depth 6")


def test_validation_catches_a_wrong_multiplier(z3):
    broken = replace(z3, multipliers={"c": z3.multipliers["c^-1"], "c^-1": z3.multipliers["c^-1"]})
    with pytest.raises(ValidationFailure) as info:
        validate_structure(broken, 3)
    assert info.value.pair is not None


def test_validation_catches_a_partial_multiplier(z3):
    pa = PairAlphabet.over(z3.alphabet)
    # only (ε, c) accepted: no image for c or c2
    partial = FiniteAutomaton.build(pa, 2, {0}, {1}, [(0, pa.pair_index(None, 0), 1)], True)
    broken = replace(z3, multipliers={**z3.multipliers, "c": partial})
    with pytest.raises(ValidationFailure, match="no image"):
        validate_structure(broken, 3)


def test_validation_rejects_bad_depth(z2):
    with pytest.raises(ValueError):
        validate_structure(z2, 0)


def test_shift_bounds(z2, zbase):
    assert multiplier_shift_bound(z2, "a") == 1
    assert multiplier_shift_bound(zbase, "a^-1") == 1
    assert relation_shift_bound(fa.identity_relation(z2.alphabet)) == 0


def test_unbounded_shift_is_detected(z2):
    pa = PairAlphabet.over(z2.alphabet)
    grow = FiniteAutomaton.build(pa, 1, {0}, {0}, [(0, pa.pair_index(None, 0), 0)], True)
    with pytest.raises(UnboundedShift):
        relation_shift_bound(grow)


def test_quasigeodesic_bound_is_measured(zbase):
    q = quasigeodesic_bound(zbase, 5)
    assert q.lam == Fraction(1) and q.audit_depth == 5

import random

import pytest
from hypothesis import given, settings, strategies as st

from normbasis.errors import (
    CtxMismatch,
    DivisionByZero,
    NotADivisor,
    NotInSubfield,
    NotPrime,
    TowerTooDeep,
)
from normbasis.field_tower import (
    coerce_down,
    extend,
    field_from_spec,
    frobenius,
    is_generator,
    make_field,
    parse_field_spec,
    rel_trace,
    subfield_member,
)
from normbasis.poly import is_irreducible


def test_prime_field_f2():
    F = make_field(2, 1)
    assert F.cardinality == 2
    assert F.p == 2


def test_f9_modulus_has_no_root_in_f3():
    F9 = make_field(3, 2, seed=7)
    assert F9.cardinality == 9
    f = F9.modulus
    assert f.degree == 2 and f.is_monic()
    assert all(not f.eval(c).is_zero() for c in make_field(3).elements())


def test_composite_characteristic_rejected():
    with pytest.raises(NotPrime):
        make_field(4, 1)


def test_f8_modulus_irreducible_cubic(F2):
    F8 = extend(F2, 3, seed=5)
    assert F8.modulus.degree == 3
    assert all(not F8.modulus.eval(c).is_zero() for c in F2.elements())
    assert is_irreducible(F8.modulus)


def test_degree_one_extension_is_same_ctx(F3):
    assert extend(F3, 1) is F3


def test_tower_depth_guard(F2):
    F4 = extend(F2, 2)
    F16 = extend(F4, 2)
    with pytest.raises(TowerTooDeep):
        extend(F16, 2)


def test_f8_product_reduces_by_modulus(F8):
    t = F8([0, 1, 0])
    assert t * (t * t) == F8([1, 1, 0])


def test_inverse_of_one_and_zero(F8):
    assert F8.one_element.inverse() == F8.one_element
    with pytest.raises(DivisionByZero):
        F8.zero_element.inverse()


def test_lagrange_power_is_one():
    F = make_field(3, 2, seed=1)
    for a in F.elements():
        if not a.is_zero():
            assert a ** (F.cardinality - 1) == F.one_element


def test_mixed_contexts_rejected():
    with pytest.raises(CtxMismatch):
        make_field(2)(1) + make_field(3)(1)


def test_frobenius_fixes_base(F2):
    F4 = extend(F2, 2)
    F64 = extend(F4, 3)
    for c in F4.elements():
        a = F64.embed(c)
        for i in range(4):
            assert frobenius(a, i, F4) == a


def test_frobenius_full_cycle_is_identity():
    F = extend(make_field(3), 4, seed=2)
    rng = random.Random(0)
    for _ in range(20):
        a = F.random_element(rng)
        assert frobenius(a, 4) == a


def test_frobenius_of_t_is_t_squared(F8):
    t = F8([0, 1, 0])
    assert frobenius(t, 1) == t * t


def test_trace_of_one_is_n_mod_p():
    F = extend(make_field(3), 5)
    assert rel_trace(F.one_element, 1) == F.embed(make_field(3)(5 % 3))


def test_trace_to_itself_is_identity(F8):
    for a in F8.elements():
        assert rel_trace(a, 3) == a


def test_trace_of_base_scalar_in_f9():
    F3 = make_field(3)
    F9 = extend(F3, 2)
    for c in F3.elements():
        assert rel_trace(F9.embed(c), 1) == F9.embed(c + c)


def test_trace_needs_divisor(F8):
    with pytest.raises(NotADivisor):
        rel_trace(F8.one_element, 2)


def test_relative_trace_lands_in_subfield():
    F = extend(make_field(2), 6)
    rng = random.Random(3)
    for _ in range(20):
        a = F.random_element(rng)
        for m in (1, 2, 3, 6):
            assert subfield_member(rel_trace(a, m), m)


def test_trace_transitivity():
    F = extend(make_field(2), 6)
    rng = random.Random(4)
    for _ in range(20):
        a = F.random_element(rng)
        b = rel_trace(a, 2)
        assert b + frobenius(b, 1) == rel_trace(a, 1)
        c = rel_trace(a, 3)
        assert c + frobenius(c, 1) + frobenius(c, 2) == rel_trace(a, 1)


def test_coerce_down_round_trip(F2):
    F4 = extend(F2, 2)
    F16 = extend(F4, 2)
    for c in F4.elements():
        assert coerce_down(F16.embed(c), F4) == c


def test_cube_root_of_unity_sum_coerces_to_one(F2):
    F4 = extend(F2, 2)
    zeta = next(a for a in F4.elements() if not a.is_zero() and a != F4.one_element)
    assert zeta**3 == F4.one_element
    assert coerce_down(zeta + zeta * zeta, F2) == F2.one_element
    with pytest.raises(NotInSubfield):
        coerce_down(zeta, F2)


def test_subfield_membership_examples():
    F = extend(make_field(2), 4)
    rng = random.Random(5)
    a = F.random_element(rng)
    assert subfield_member(a, 4)
    assert subfield_member(F.zero_element, 1)
    assert subfield_member(F.one_element, 1)
    gen = next(b for b in F.elements() if is_generator(b))
    assert not subfield_member(gen, 1)
    assert not subfield_member(gen, 2)
    with pytest.raises(NotADivisor):
        subfield_member(a, 3)


def test_index_round_trip():
    F = make_field(3, 2, seed=4)
    assert [F.index(F.from_index(k)) for k in range(9)] == list(range(9))


def test_field_spec_parsing():
    assert parse_field_spec("p=3,m=2,seed=7") == {"p": 3, "m": 2, "seed": 7}
    F = field_from_spec("p=3,m=2,seed=7")
    assert F.modulus == make_field(3, 2, seed=7).modulus
    with pytest.raises(ValueError):
        parse_field_spec("m=2")


# -- randomized field axioms --------------------------------------------------------

FIELDS = [
    make_field(7, 2),
    make_field(2, 4, seed=1),
    make_field(3, 3, seed=2),
    extend(make_field(2, 2), 3, seed=1),
    extend(make_field(3, 2), 2, seed=3),
]

triples = st.tuples(
    st.sampled_from(range(len(FIELDS))),
    st.integers(min_value=0),
    st.integers(min_value=0),
    st.integers(min_value=0),
)


@settings(max_examples=200, deadline=None)
@given(triples)
def test_field_axioms(t):
    F = FIELDS[t[0]]
    a, b, c = (F.from_index(k % F.cardinality) for k in t[1:])
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == F.zero_element
    if not a.is_zero():
        assert a * a.inverse() == F.one_element


@settings(max_examples=200, deadline=None)
@given(triples)
def test_frobenius_is_base_linear(t):
    F = FIELDS[t[0]]
    base = F.base
    a, b = F.from_index(t[1] % F.cardinality), F.from_index(t[2] % F.cardinality)
    c = base.from_index(t[3] % base.cardinality)
    lhs = frobenius(a + b.scale(c), 1, base)
    assert lhs == frobenius(a, 1, base) + frobenius(b, 1, base).scale(c)

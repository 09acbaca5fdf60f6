from math import gcd, lcm

import pytest

from normbasis.field_tower import coerce_down, make_field
from normbasis.ntheory import mult_order
from normbasis.poly import (
    Poly,
    epsilon_poly,
    format_poly,
    is_irreducible,
    orbit_min_poly,
    parse_poly,
    primitive_nth_root,
    q_classes,
    x_pow_minus_one,
)


def P(ctx, *ints):
    return Poly.from_ints(ctx, list(ints))


def test_gcd_is_monic_common_factor(F3):
    assert P(F3, -1, 0, 1).gcd(P(F3, -1, 1)) == P(F3, -1, 1)


def test_eval_and_square_over_f2(F2):
    assert P(F2, 1, 1, 1).eval(1) == F2.one_element
    assert P(F2, 1, 1) * P(F2, 1, 1) == P(F2, 1, 0, 1)


def test_division_identity(F3):
    f, g = P(F3, 2, 0, 1, 1, 2), P(F3, 1, 2, 1)
    q, r = divmod(f, g)
    assert q * g + r == f and r.degree < g.degree


@pytest.mark.parametrize(
    "coeffs, expected",
    [((1, 1, 1), True), ((1, 0, 1), False), ((1, 1, 0, 1), True), ((1, 0, 0, 1), False)],
)
def test_irreducibility_over_f2(F2, coeffs, expected):
    assert is_irreducible(P(F2, *coeffs)) is expected


def test_three_irreducible_quartics_over_f2(F2):
    # x^4+x+1, x^4+x^3+1, x^4+x^3+x^2+x+1
    quartics = [P(F2, a, b, c, d, 1) for a in (0, 1) for b in (0, 1) for c in (0, 1) for d in (0, 1)]
    assert sum(is_irreducible(f) for f in quartics) == 3


@pytest.mark.parametrize("q, n, order", [(2, 7, 3), (3, 11, 5), (5, 1, 1), (2, 15, 4)])
def test_mult_order(q, n, order):
    assert mult_order(q, n) == order


def test_root_of_unity_small_cases(F2, F3):
    ext, zeta = primitive_nth_root(3, F2)
    assert ext.cardinality == 4
    assert P(F2, 1, 1, 1).eval(zeta).is_zero()
    ext, zeta = primitive_nth_root(1, F3)
    assert ext is F3 and zeta == F3.one_element
    ext, zeta = primitive_nth_root(5, F2)
    assert ext.cardinality == 16
    assert zeta**5 == ext.one_element and zeta != ext.one_element


@pytest.mark.parametrize(
    "n, q, classes",
    [
        (3, 2, [[0], [1, 2]]),
        (8, 3, [[0], [1, 3], [2, 6], [4], [5, 7]]),
        (7, 2, [[0], [1, 2, 4], [3, 5, 6]]),
    ],
)
def test_class_examples(n, q, classes):
    assert q_classes(n, q).to_json()["classes"] == classes


def test_epsilon_polys(F2):
    part = q_classes(3, 2)
    assert epsilon_poly(part, 0, F2) == P(F2, 1)
    assert epsilon_poly(part, 1, F2) == P(F2, 0, 1, 1)
    part7 = q_classes(7, 2)
    assert epsilon_poly(part7, 2, F2) == P(F2, 0, 0, 0, 1, 0, 1, 1)


def test_orbit_polys_n3(F2):
    part = q_classes(3, 2)
    _, zeta = primitive_nth_root(3, F2)
    assert orbit_min_poly(part, 0, zeta, F2) == P(F2, 1, 1)
    assert orbit_min_poly(part, 1, zeta, F2) == P(F2, 1, 1, 1)


def _coprime_cases(bound=64):
    out = []
    for q in (2, 3, 4, 5, 7, 8, 9):
        for n in range(1, bound + 1):
            if gcd(q, n) == 1:
                out.append((q, n))
    return out


@pytest.mark.parametrize("q, n", _coprime_cases())
def test_class_partition_invariants(q, n):
    part = q_classes(n, q)
    members = [a for c in part.classes for a in c.members]
    assert sorted(members) == list(range(n))
    for c in part.classes:
        assert {a * q % n for a in c.members} == set(c.members)
        assert c.representative == min(c.members)
    assert part.classes[0].members == (0,)
    assert [c.representative for c in part.classes] == sorted(c.representative for c in part.classes)
    assert mult_order(q, n) == lcm(*part.sizes)


FACTOR_CASES = [(2, 3), (2, 7), (2, 9), (2, 15), (2, 21), (3, 8), (3, 13), (4, 5), (4, 9), (5, 12), (7, 10), (8, 7), (9, 8)]


@pytest.mark.parametrize("q, n", FACTOR_CASES)
def test_orbit_polys_factor_xn_minus_one(q, n):
    from normbasis.criteria import field_pair

    pair = field_pair(q, n)
    base, part, zeta = pair.base, pair.part, pair.zeta
    polys = [orbit_min_poly(part, i, zeta, base) for i in range(part.r)]
    prod = Poly(base, [base.one])
    for f, d in zip(polys, part.sizes):
        assert f.degree == d and is_irreducible(f)
        prod = prod * f
    assert prod == x_pow_minus_one(base, n)


@pytest.mark.parametrize("q, n", FACTOR_CASES)
def test_gauss_values_are_frobenius_fixed(q, n):
    from normbasis.criteria import field_pair

    pair = field_pair(q, n)
    base, part, zeta = pair.base, pair.part, pair.zeta
    for i in range(part.r):
        eps = epsilon_poly(part, i, base)
        for c in part.classes:
            coerce_down(eps.eval(zeta ** c.representative), base)


def test_poly_text_round_trip():
    F9 = make_field(3, 2, seed=7)
    f = Poly(F9, [F9([1, 2]), F9(0), F9([0, 1]), F9(1)])
    assert parse_poly(format_poly(f), F9) == f
    F5 = make_field(5)
    g = P(F5, 4, 0, 3, 1)
    assert format_poly(g) == "x^3 + 3*x^2 + 4"
    assert parse_poly("x^3 + 3*x^2 - 1", F5) == g

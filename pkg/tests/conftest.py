import itertools
from math import gcd

import pytest

from normbasis.field_tower import make_field, extend
from normbasis.criteria import field_pair

GRID_QS = (2, 3, 4, 5, 7, 8, 9)
GRID_BOUND = 65536


def coprime_grid(qs=GRID_QS, bound=GRID_BOUND):
    """All (q, n) with gcd(q, n) = 1 and q^n <= bound."""
    out = []
    for q in qs:
        for n in itertools.count(1):
            if q**n > bound:
                break
            if gcd(q, n) == 1:
                out.append((q, n))
    return out


def brute_span_size(alpha, base):
    """Size of the F_q-span of the conjugates of alpha, by listing every combination."""
    from normbasis.field_tower import frobenius

    n = alpha.ctx.degree_over(base)
    conj = [frobenius(alpha, i, base) for i in range(n)]
    seen = set()
    for coeffs in itertools.product(list(base.elements()), repeat=n):
        acc = alpha.ctx.zero_element
        for c, a in zip(coeffs, conj):
            acc = acc + a.scale(c)
        seen.add(acc.raw)
    return len(seen)


@pytest.fixture(scope="session")
def F2():
    return make_field(2)


@pytest.fixture(scope="session")
def F3():
    return make_field(3)


@pytest.fixture(scope="session")
def F8(F2):
    f = extend(F2, 3, seed=0)
    assert str(f.modulus) == "x^3 + x + 1"
    return f


@pytest.fixture(scope="session")
def pair_2_3():
    return field_pair(2, 3)

import dataclasses

import pytest

from normbasis.criteria import field_pair
from normbasis.errors import Singular
from normbasis.field_tower import make_field
from normbasis.idempotents import (
    MatrixFq,
    gauss_period_matrix,
    idempotents,
    matrix_inverse_fq,
    verify_idempotents,
)
from normbasis.ntheory import is_primitive_root
from normbasis.poly import Poly, primitive_nth_root, q_classes

from conftest import coprime_grid


def test_identity_inverse(F3):
    I = MatrixFq.identity(F3, 3)
    assert matrix_inverse_fq(I) == I


def test_singular_matrix_rejected(F3):
    with pytest.raises(Singular):
        matrix_inverse_fq(MatrixFq(F3, [[1, 2], [2, 1]]))


def test_f2_n3_matrix_is_self_inverse(F2):
    part = q_classes(3, 2)
    _, zeta = primitive_nth_root(3, F2)
    M = gauss_period_matrix(part, zeta, F2)
    assert M == [[1, 1], [0, 1]]
    assert matrix_inverse_fq(M) == M
    assert M @ M == MatrixFq.identity(F2, 2)


def test_f2_n7_first_row_and_column(F2):
    part = q_classes(7, 2)
    _, zeta = primitive_nth_root(7, F2)
    M = gauss_period_matrix(part, zeta, F2)
    assert M.to_list()[0] == [1, 1, 1]
    assert [row[0] for row in M.to_list()] == [1, 1, 1]


PRIMITIVE_CASES = [(q, n) for q, n in [(2, 3), (2, 5), (2, 11), (3, 5), (3, 7), (5, 3), (7, 5), (5, 7), (2, 13)] if is_primitive_root(q, n)]


@pytest.mark.parametrize("q, n", PRIMITIVE_CASES)
def test_two_class_matrix_closed_form(q, n):
    F = make_field(q)
    idem = idempotents(n, F)
    M = [[1, 1], [n - 1, -1]]
    assert idem.matrix == M
    ninv = pow(n, -1, q)
    assert idem.matrix_inv == [[ninv * v % q for v in row] for row in M]


@pytest.mark.parametrize("q, n", PRIMITIVE_CASES)
def test_two_class_idempotents_closed_form(q, n):
    F = make_field(q)
    idem = idempotents(n, F)
    ninv = F(pow(n, -1, q))
    e1 = Poly(F, [ninv] * n)
    assert idem.idempotents[0] == e1
    assert idem.idempotents[1] == Poly(F, [F.one]) - e1


def test_f5_n3_matrices():
    idem = idempotents(3, make_field(5))
    assert idem.matrix == [[1, 1], [2, 4]]
    assert idem.matrix_inv == [[2, 2], [4, 3]]


def test_q3_n4_set_passes():
    idem = idempotents(4, make_field(3))
    assert [list(c.members) for c in idem.part.classes] == [[0], [1, 3], [2]]
    assert verify_idempotents(idem).ok


def test_perturbed_set_fails_sum_check():
    F = make_field(2)
    idem = idempotents(7, F)
    es = list(idem.idempotents)
    es[0] = es[0] + Poly(F, [F.one])
    bad = dataclasses.replace(idem, idempotents=tuple(es))
    report = verify_idempotents(bad)
    assert not report.ok
    assert "sum_is_one" in report.failures


def test_idempotents_evaluate_to_kronecker_delta():
    pair = field_pair(3, 8)
    idem = pair.idem
    for i, e in enumerate(idem.idempotents):
        for j, c in enumerate(idem.part.classes):
            v = e.eval(idem.zeta ** c.representative)
            assert v == (v.ctx.one_element if i == j else v.ctx.zero_element)


@pytest.mark.parametrize("q, n", coprime_grid())
def test_identities_hold_on_grid(q, n):
    idem = field_pair(q, n).idem
    report = verify_idempotents(idem)
    assert report.ok, report.failures


@pytest.mark.parametrize("q, n", [(2, 7), (2, 9), (3, 8), (4, 5), (9, 4), (8, 5)])
def test_idempotents_do_not_depend_on_root(q, n):
    # the CRT idempotents are unique; a different root only permutes classes
    sets = [field_pair(q, n, zeta_seed=s).idem.idempotents for s in (0, 1, 2)]
    as_sets = [{str(e) for e in es} for es in sets]
    assert as_sets[0] == as_sets[1] == as_sets[2]


def test_json_shape():
    data = idempotents(3, make_field(5)).to_json()
    assert data["classes"] == [[0], [1, 2]]
    assert data["idempotents"] == [[2, 2, 2], [4, 3, 3]]
    assert data["schema_version"] == 1

import random

import numpy as np
import pytest

from normbasis.criteria import (
    NewPlan,
    PeriodClassPlan,
    TwoPrimePlan,
    applicable_criteria,
    conjugate_rank,
    evaluate,
    field_pair,
    nbg_classical,
    nbg_new,
    nbg_oracle,
    nbg_thm4,
    nbg_thm5,
    nbg_thm7,
    reduce_p_dividing_n,
    smallest_period_generator,
)
from normbasis.errors import NotApplicable, NotCoprime
from normbasis.field_tower import extend, frobenius, make_field, rel_trace
from normbasis.linearized import lin_eval
from normbasis.sweep import BatchEvaluator, sweep

from conftest import brute_span_size


# -- oracle ------------------------------------------------------------------------

def test_oracle_examples(F8):
    t = F8([0, 1, 0])
    assert not nbg_oracle(F8.zero_element)
    assert not nbg_oracle(F8.one_element)
    assert not nbg_oracle(t)
    assert nbg_oracle(t + F8.one_element)


@pytest.mark.parametrize("q, n", [(2, 3), (2, 4), (3, 2), (4, 2), (3, 3)])
def test_rank_oracle_matches_span_enumeration(q, n):
    pair = field_pair(q, n)
    for a in pair.ext.elements():
        assert nbg_oracle(a) == (brute_span_size(a, pair.base) == q**n)


def test_base_elements_never_generate():
    F = extend(make_field(3), 4)
    for c in make_field(3).elements():
        assert conjugate_rank(F.embed(c)) <= 1


# -- dispatcher ----------------------------------------------------------------------

@pytest.mark.parametrize(
    "q, n, ids",
    [
        (2, 3, ["oracle", "new", "classical", "thm4", "thm6"]),
        (2, 6, ["oracle", "reduce_thm8"]),
        (2, 15, ["oracle", "new", "classical", "thm7"]),
        (2, 8, ["oracle", "reduce_thm8", "corollary"]),
        (3, 11, ["oracle", "new", "classical", "thm5", "thm6"]),
        (2, 7, ["oracle", "new", "classical", "thm5", "thm6"]),
    ],
)
def test_applicable_criteria(q, n, ids):
    assert applicable_criteria(q, n) == ids


def test_hypothesis_failures_are_verdicts_not_errors():
    a = field_pair(2, 7).ext.from_index(5)
    assert nbg_thm4(a).applicable is False
    assert nbg_thm5(field_pair(2, 5).ext.from_index(5)).applicable is False
    assert nbg_thm7(field_pair(2, 21).ext.from_index(5)).applicable is False


def test_inapplicable_requested_criterion_is_reported():
    pair = field_pair(2, 5)
    v = evaluate(pair, pair.ext.from_index(3), ["thm5", "new"])
    assert v["thm5"].applicable is False and v["thm5"].is_nbg is None
    assert v["new"].applicable is True


# -- the idempotent criterion and the classical one -----------------------------------

def test_idempotent_criterion_small_examples(pair_2_3):
    ext = pair_2_3.ext
    a = ext([1, 1, 0])
    v = nbg_new(a)
    assert v.is_nbg
    E1, E2 = v.witnesses["E"]
    assert E1 == ext.one_element and not E2.is_zero()
    assert not nbg_new(ext.one_element).is_nbg
    assert not nbg_new(ext.zero_element).is_nbg


def test_one_is_never_a_generator():
    for q, n in [(2, 3), (3, 4), (5, 6), (4, 7)]:
        pair = field_pair(q, n)
        assert not nbg_new(pair.ext.one_element).is_nbg


def test_classical_needs_coprime_degree():
    F64 = extend(make_field(2), 6)
    with pytest.raises(NotCoprime):
        nbg_classical(F64.from_index(7))


@pytest.mark.parametrize("q, n", [(2, 3), (3, 4), (2, 5), (4, 3)])
@pytest.mark.parametrize("form", [1, 2, 3])
def test_classical_forms_match_oracle_exhaustively(q, n, form):
    pair = field_pair(q, n)
    plan = pair.plan("classical")
    for a in pair.ext.elements():
        assert plan.verdict(a, form=form).is_nbg == nbg_oracle(a)


@pytest.mark.parametrize("q, n", [(2, 7), (3, 8), (4, 5), (5, 4), (9, 4)])
def test_vanishing_patterns_coincide_per_index(q, n):
    pair = field_pair(q, n)
    E = pair.plan("new").qpolys
    L = pair.plan("classical").qpolys
    rng = random.Random(q * n)
    for _ in range(200):
        a = pair.ext.random_element(rng)
        assert [lin_eval(e, a).is_zero() for e in E] == [lin_eval(l, a).is_zero() for l in L]


def test_idempotent_projections_isolate_each_index():
    # alpha = sum over a chosen set of E_i(beta) vanishes exactly on the others
    pair = field_pair(2, 9)
    E = pair.plan("new").qpolys
    beta = next(b for b in pair.ext.elements() if nbg_oracle(b))
    for skip in range(len(E)):
        a = pair.ext.zero_element
        for i, e in enumerate(E):
            if i != skip:
                a = a + lin_eval(e, beta)
        zeros = [lin_eval(e, a).is_zero() for e in E]
        assert zeros == [i == skip for i in range(len(E))]


def test_explicit_idempotent_set_is_honoured(pair_2_3):
    from normbasis.idempotents import idempotents

    idem = idempotents(3, pair_2_3.base)
    for a in pair_2_3.ext.elements():
        assert nbg_new(a, idem=idem).is_nbg == nbg_oracle(a)


# -- closed forms, scalar path ------------------------------------------------------

@pytest.mark.parametrize("q, n, cid", [(2, 3, "thm4"), (2, 5, "thm4"), (3, 5, "thm4"), (5, 3, "thm4"), (2, 7, "thm5"), (2, 7, "thm6"), (8, 3, "thm6"), (3, 5, "thm6"), (2, 5, "thm6")])
def test_closed_forms_scalar_exhaustive(q, n, cid):
    pair = field_pair(q, n)
    plan = pair.plan(cid)
    for a in pair.ext.elements():
        assert plan.verdict(a).is_nbg == nbg_oracle(a), a


def test_prime_primitive_criterion_rejects_base_and_traceless(pair_2_3):
    ext = pair_2_3.ext
    for a in ext.elements():
        v = nbg_thm4(a)
        tr = rel_trace(a, 1)
        assert v.is_nbg == (not tr.is_zero() and frobenius(a, 1) != a)


def test_e_class_generator_choice_does_not_matter():
    pair = field_pair(3, 13)
    g0 = smallest_period_generator(3, 13)
    others = [g for g in range(2, 13) if g != g0 and pow(g, 4, 13) == 3 and len({pow(g, k, 13) for k in range(12)}) == 12]
    assert g0 == 2 and others == [11]
    plan_a, plan_b = pair.plan("thm6"), PeriodClassPlan(pair, pair.zeta, 11)
    rng = random.Random(9)
    for _ in range(60):
        a = pair.ext.random_element(rng)
        assert plan_a.verdict(a).is_nbg == plan_b.verdict(a).is_nbg


@pytest.mark.parametrize("q, n", [(2, 7), (3, 5), (2, 9), (4, 3), (2, 6), (3, 6)])
def test_verdicts_do_not_depend_on_root_choice(q, n):
    pairs = [field_pair(q, n, zeta_seed=s) for s in (0, 1, 2)]
    ext = pairs[0].ext
    for a in ext.elements():
        got = [{k: v.is_nbg for k, v in evaluate(p, p.ext(a.raw)).items()} for p in pairs]
        assert got[0] == got[1] == got[2]


# -- two-prime criterion ---------------------------------------------------------------

def test_two_prime_structure_on_f2_15():
    plan = field_pair(2, 15).plan("thm7")
    assert (plan.p1, plan.p2, plan.f, plan.m1, plan.m2) == (3, 5, 4, 1, 2)
    assert plan.g not in {1, 2, 4, 8}


def test_stated_two_prime_exclusions_disagree_with_oracle():
    pair = field_pair(2, 15)
    res = sweep(pair, ["oracle", "thm7"])
    assert res.disagreements == 4275
    assert res.verdicts_at_first["oracle"] != res.verdicts_at_first["thm7"]


def test_corrected_two_prime_exclusions_agree_with_oracle():
    pair = field_pair(2, 15)
    plan = TwoPrimePlan(pair, variant="corrected")
    res = sweep(pair, ["oracle", "thm7"], plans={"thm7": plan})
    assert res.unanimous
    assert res.counts["thm7"] == res.counts["oracle"]


def test_two_prime_unknown_variant_rejected():
    with pytest.raises(ValueError):
        TwoPrimePlan(field_pair(2, 15), variant="other")


def test_two_prime_odd_branch_corrected_on_constructed_elements():
    pair = field_pair(17, 15)
    plan = TwoPrimePlan(pair, variant="corrected")
    E = pair.plan("new").qpolys
    rng = random.Random(1)
    for k in range(24):
        b = pair.ext.random_element(rng)
        a = pair.ext.zero_element
        for i, e in enumerate(E):
            if k % 3 == 0 or rng.random() < 0.7:
                a = a + lin_eval(e, b)
        assert plan.verdict(a).is_nbg == nbg_oracle(a)


# -- p dividing n ---------------------------------------------------------------------

def test_reduction_requires_p_dividing_n():
    F81 = extend(make_field(3), 4)
    with pytest.raises(NotApplicable):
        reduce_p_dividing_n(F81.from_index(5))


@pytest.mark.parametrize("q, n, l", [(2, 6, 3), (2, 4, 1), (3, 6, 2), (2, 12, 3), (4, 6, 3)])
def test_reduction_transports_generator_property(q, n, l):
    pair = field_pair(q, n)
    rng = random.Random(n)
    elems = pair.ext.elements() if q**n <= 4096 else (pair.ext.random_element(rng) for _ in range(300))
    for a in elems:
        beta, got_l = reduce_p_dividing_n(a, pair.base)
        assert got_l == l
        assert beta.ctx.degree_over(pair.base) == l
        assert nbg_oracle(a) == nbg_oracle(beta, pair.base)


def test_reduction_matches_relative_trace():
    pair = field_pair(2, 6)
    plan = pair.plan("reduce_thm8")
    emb = plan.embedding
    for a in pair.ext.elements():
        assert emb.lift(plan.reduce(a)) == rel_trace(a, 3)


def test_prime_power_degree_needs_only_trace():
    pair = field_pair(2, 4)
    count = 0
    for a in pair.ext.elements():
        ok = nbg_oracle(a)
        assert ok == (not rel_trace(a, 1).is_zero())
        count += ok
    assert count == 8


# -- batch path agrees with scalar path ----------------------------------------------------

@pytest.mark.parametrize("q, n", [(2, 7), (3, 5), (2, 15), (4, 5), (2, 6), (3, 9), (9, 2), (5, 6), (8, 3)])
def test_batch_verdicts_match_scalar(q, n):
    pair = field_pair(q, n)
    ev = BatchEvaluator(pair)
    rng = np.random.default_rng(q * 1000 + n)
    X = rng.integers(0, pair.p, size=(120, ev.model.D))
    for cid in pair.applicable():
        batch = ev.verdicts(X, cid)
        plan = pair.plan(cid)
        scalar = [plan.verdict(ev.model.element(row)).is_nbg for row in X]
        assert batch.tolist() == scalar, cid


def test_verdict_json_is_plain_data(pair_2_3):
    v = evaluate(pair_2_3, pair_2_3.ext([1, 1, 0]))
    for cid, verdict in v.items():
        data = verdict.to_json()
        assert data["criterion"] == cid
        assert data["is_nbg"] is True

"""
The two-prime criterion, checked against the rank test
======================================================

For n = p1*p2 the criterion excludes elements whose traces satisfy certain
linear relations.  The exclusions as originally stated disagree with the rank
test; the form Tr(a) != p_i * Tr_(p_i)(a), read off the idempotents of the
classes of multiples of p1 and of p2, does not.

The class sums can be read with exponents over class members or literally;
elements built from idempotent projections, where exactly chosen E_i vanish,
separate the two readings.
"""

import random

from normbasis.criteria import TwoPrimePlan, field_pair, nbg_oracle
from normbasis.linearized import lin_eval
from normbasis.sweep import sweep

pair = field_pair(2, 15)
for variant in TwoPrimePlan.VARIANTS:
    plan = TwoPrimePlan(pair, variant=variant)
    res = sweep(pair, ["oracle", "thm7"], plans={"thm7": plan})
    print(f"F_(2^15), {variant:<9} exclusions: {res.disagreements:>5} of {res.size} disagree")

# where does the stated form go wrong? look at the first witness
res = sweep(pair, ["oracle", "thm7"])
a = pair.ext.from_index(res.first_disagreement)
w = pair.plan("thm7").verdict(a).witnesses
print("\nfirst witness index", res.first_disagreement, "oracle says", nbg_oracle(a))
for key in ("Tr", "Tr_p1", "Tr_p2", "core", "S_1", "S_g"):
    print(f"  {key:<6}", w[key].to_list())
# Tr equals 3*Tr_3 here (3 = 1 in F_2), so the idempotent of the multiples of 3
# kills a; the stated test only asks that a lie outside F_(2^3) and F_(2^5)


def constructed(pair, samples, seed):
    E = pair.plan("new").qpolys
    rng = random.Random(seed)
    for k in range(samples):
        b = pair.ext.random_element(rng)
        a = pair.ext.zero_element
        for e in E:
            if k % 3 == 0 or rng.random() < 0.7:
                a = a + lin_eval(e, b)
        yield a


print("\nodd characteristic, corrected exclusions")
for q, n in [(5, 21), (17, 15)]:
    pair = field_pair(q, n)
    plan = TwoPrimePlan(pair, variant="corrected")
    bad = {"class": 0, "literal": 0}
    for a in constructed(pair, 120, 3):
        truth = nbg_oracle(a)
        for reading in bad:
            bad[reading] += plan.verdict(a, reading=reading).is_nbg != truth
    print(f"  q={q:<2} n={n}: eps = ({plan.eps1}, {plan.eps2}), disagreements {bad}")

"""
Building F_q and F_(q^n)
========================

A two-level tower F_p -> F_q -> F_(q^n), Frobenius conjugates, traces,
and the rank test that decides whether an element generates a normal basis.
"""

from normbasis.criteria import conjugate_rank, nbg_oracle
from normbasis.field_tower import extend, frobenius, make_field, rel_trace

# F_4 over F_2, then a cubic extension on top of it
F4 = make_field(2, 2, seed=0)
F64 = extend(F4, 3, seed=1)
print("base     ", F4.describe())
print("extension", F64.describe())

# element number 37 in the fixed enumeration order
a = F64.from_index(37)
print("a        ", a.to_list())

# its conjugates over F_4 are a, a^4, a^16
conj = [frobenius(a, i, F4) for i in range(3)]
for i, c in enumerate(conj):
    print(f"a^(4^{i})  ", c.to_list())

# the trace lands in F_4 and is the sum of the conjugates
print("Tr(a)    ", rel_trace(a, 1, F4).to_list())

# a generates a normal basis when its conjugates have full rank over F_4
print("rank     ", conjugate_rank(a, F4), "of 3")
print("generator", nbg_oracle(a, F4))

# how many elements of F_64 generate a normal basis over F_4?
count = sum(nbg_oracle(b, F4) for b in F64.elements())
print("NBG count", count, "of", F64.cardinality)

"""
Idempotents from Gauss periods
==============================

The q-classes of Z_n index the irreducible factors of x^n - 1 over F_q.
Evaluating the class sums at a primitive n-th root of unity gives a matrix
over F_q whose inverse turns class sums into orthogonal idempotents.
"""

from normbasis.criteria import field_pair
from normbasis.idempotents import verify_idempotents
from normbasis.poly import format_poly, orbit_min_poly

pair = field_pair(2, 9)
part = pair.part
print("classes of Z_9 under x2:", [list(c.members) for c in part.classes])

# one irreducible factor per class
for i in range(part.r):
    print("  factor", i + 1, format_poly(orbit_min_poly(part, i, pair.zeta, pair.base)))

idem = pair.idem
print("\nGauss-period matrix")
for row in idem.matrix.to_list():
    print("  ", row)
print("inverse")
for row in idem.matrix_inv.to_list():
    print("  ", row)

print("\nidempotents")
for i, e in enumerate(idem.idempotents):
    print(f"  e_{i + 1}(x) =", format_poly(e))

# sum is 1, pairwise products vanish, each e_i is 1 mod its own factor and 0 mod the rest
report = verify_idempotents(idem)
print("\nchecks:", report.checks)

# a prime n with q primitive gives the familiar two-class pattern
small = field_pair(5, 3).idem
print("\nq=5, n=3:  M =", small.matrix.to_list(), " M^-1 =", small.matrix_inv.to_list())

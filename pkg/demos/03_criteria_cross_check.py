"""
Cross-checking every criterion
==============================

Each criterion is a list of F_q-linear maps that must not vanish, so a
whole field can be tested with a few integer matrix products.  Here every
applicable criterion is run on every element and compared with the rank
test.
"""

import time

from normbasis.census import expected_nbg_count
from normbasis.criteria import evaluate, field_pair
from normbasis.sweep import sweep

cases = [(2, 7), (2, 11), (3, 5), (4, 5), (3, 8), (2, 12), (3, 9), (3, 11)]

for q, n in cases:
    pair = field_pair(q, n)
    t0 = time.perf_counter()
    res = sweep(pair)
    dt = time.perf_counter() - t0
    status = "unanimous" if res.unanimous else f"{res.disagreements} disagreements"
    print(f"q={q:<2} n={n:<3} {res.size:>7} elements  {status:<12} {dt:5.2f}s")
    print("    counts", res.counts, " closed form", expected_nbg_count(q, n))

# the element-by-element view for one small field
pair = field_pair(2, 5)
ext = pair.ext
print("\nF_32 over F_2, first 8 elements")
for k in range(8):
    v = evaluate(pair, ext.from_index(k))
    print(" ", k, {cid: verdict.is_nbg for cid, verdict in v.items()})

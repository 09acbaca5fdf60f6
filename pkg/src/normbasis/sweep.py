"""Vectorized exhaustive sweeps over F_{q^n}.

F_{q^n} is an F_p-vector space of dimension D, and every criterion is a set
of F_q-linear maps that must not vanish.  Each map becomes a D x D matrix over
F_p (row-vector convention, ``y = x @ M``), so a whole block of elements is
tested with a single integer matrix product.  The oracle is a batched
Gaussian elimination on the conjugate matrices over F_q.

Element ``k`` of a sweep is ``ext.from_index(k)``: lexicographic order of
flat F_p coordinates, lowest coordinate fastest.
"""

import functools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .field_tower import FFElement, frobenius
from .linearized import _scale_in

DEFAULT_CHUNK = 8192
MAX_TABLE_Q = 1024


class FpModel:
    """F_{q^n} over F_q, realized as F_p^D with numpy matrices."""

    def __init__(self, ext, base):
        self.ext, self.base = ext, base
        self.p = ext.p
        self.D = ext.flat_degree
        self.m = base.flat_degree
        self.n = ext.degree_over(base)
        if self.D * (self.p - 1) ** 2 >= 2**62:
            raise ValueError(f"p = {self.p} is too large for int64 batch arithmetic")
        self._basis = [
            FFElement(ext, ext.raw_from_flat([1 if i == d else 0 for i in range(self.D)]))
            for d in range(self.D)
        ]
        self.frob = self.matrix_of(lambda a: frobenius(a, 1, base))
        powers = [np.eye(self.D, dtype=np.int64)]
        for _ in range(self.n - 1):
            powers.append(powers[-1] @ self.frob % self.p)
        self.frob_powers = powers
        self._scalars = {}
        self.fq = FqArith(base)

    def matrix_of(self, fn, target_dim=None):
        """Matrix of an F_p-linear map given on elements; rows are images of basis vectors."""
        rows = [fn(b).flat() for b in self._basis]
        return np.array(rows, dtype=np.int64).reshape(self.D, target_dim or len(rows[0]))

    def scalar_matrix(self, c_raw):
        if c_raw not in self._scalars:
            c = FFElement(self.base, c_raw)
            self._scalars[c_raw] = self.matrix_of(lambda a: _scale_in(a, c, self.base))
        return self._scalars[c_raw]

    def qpoly_matrix(self, L):
        """``x -> sum c_i x^{q^i}`` as ``sum_i Phi^i C_i``."""
        base = self.base
        acc = np.zeros((self.D, self.D), dtype=np.int64)
        for i, c in enumerate(L.raw_coeffs):
            if base.riszero(c):
                continue
            acc = (acc + self.frob_powers[i] @ self.scalar_matrix(c)) % self.p
        return acc

    def vectors(self, start, stop):
        """Flat coordinate rows of elements ``start .. stop-1``."""
        idx = np.arange(start, stop, dtype=np.int64)
        pw = self.p ** np.arange(self.D, dtype=np.int64)
        return (idx[:, None] // pw[None, :]) % self.p

    def element(self, row):
        return FFElement(self.ext, self.ext.raw_from_flat([int(d) for d in row]))

    def apply(self, X, M):
        return X @ M % self.p

    def nonzero(self, X, M):
        return (X @ M % self.p).any(axis=1)

    def conjugate_codes(self, X):
        """(N, n, n) array: F_q coordinates of each conjugate, coded as base indices."""
        N = X.shape[0]
        pw = self.p ** np.arange(self.m, dtype=np.int64)
        out = np.empty((N, self.n, self.n), dtype=np.int64)
        for i, P in enumerate(self.frob_powers):
            Y = X @ P % self.p
            out[:, i, :] = Y.reshape(N, self.n, self.m) @ pw
        return out

    def oracle(self, X):
        return self.fq.full_rank(self.conjugate_codes(X))


class FqArith:
    """Vectorized F_q arithmetic on base-index codes (plain residues when q is prime)."""

    def __init__(self, base):
        self.q = base.cardinality
        self.p = base.p
        self.prime = self.q == self.p
        if self.prime:
            self.inv_table = np.array([0] + [pow(a, self.p - 2, self.p) for a in range(1, self.p)], dtype=np.int64) if self.p <= 1 << 20 else None
            return
        if self.q > MAX_TABLE_Q:
            raise ValueError(f"q = {self.q} is too large for table arithmetic")
        elems = list(base.elements())
        code = {e.raw: k for k, e in enumerate(elems)}
        self.mul_table = np.array([[code[base.rmul(a.raw, b.raw)] for b in elems] for a in elems], dtype=np.int64)
        self.sub_table = np.array([[code[base.rsub(a.raw, b.raw)] for b in elems] for a in elems], dtype=np.int64)
        self.inv_table = np.array([0] + [code[base.rinv(a.raw)] for a in elems[1:]], dtype=np.int64)

    def mul(self, a, b):
        if self.prime:
            return a * b % self.p
        return self.mul_table[a, b]

    def sub(self, a, b):
        if self.prime:
            return (a - b) % self.p
        return self.sub_table[a, b]

    def inv(self, a):
        if self.prime and self.inv_table is None:
            return np.array([pow(int(x), self.p - 2, self.p) for x in a.ravel()], dtype=np.int64).reshape(a.shape)
        return self.inv_table[a]

    def full_rank(self, A):
        """Boolean mask: which of the (N, n, n) matrices are invertible over F_q."""
        A = A.copy()
        N, n, _ = A.shape
        ok = np.ones(N, dtype=bool)
        rows = np.arange(N)
        for c in range(n):
            nz = A[:, c:, c] != 0
            has = nz.any(axis=1)
            ok &= has
            piv = c + nz.argmax(axis=1)
            top = A[rows, c, c:].copy()
            A[rows, c, c:] = A[rows, piv, c:]
            A[rows, piv, c:] = top
            if c == n - 1:
                break
            inv = self.inv(A[:, c, c])
            prow = self.mul(inv[:, None], A[:, c, c:])
            below = A[:, c + 1 :, c:]
            fac = below[:, :, :1]
            A[:, c + 1 :, c:] = self.sub(below, self.mul(fac, prow[:, None, :]))
        return ok


# -- criterion matrices ------------------------------------------------------------

class BatchEvaluator:
    """Batch verdicts for every applicable criterion of a :class:`FieldPair`.

    ``plans`` maps criterion ids to plan objects that replace the pair's
    defaults, e.g. a two-prime plan built with another variant.
    """

    def __init__(self, pair, plans=None):
        self.pair = pair
        self.model = FpModel(pair.ext, pair.base)
        self.plans = dict(plans or {})
        self._mats = {}
        self._sub = None

    def plan(self, cid):
        return self.plans[cid] if cid in self.plans else self.pair.plan(cid)

    def condition_matrices(self, cid):
        if cid not in self._mats:
            if cid == "reduce_thm8":
                self._mats[cid] = self._reduction_matrices()
            else:
                plan = self.plan(cid)
                self._mats[cid] = [(label, self.model.qpoly_matrix(L)) for label, L in plan.conditions()]
        return self._mats[cid]

    def _reduction(self):
        if self._sub is None:
            plan = self.plan("reduce_thm8")
            sub_model = FpModel(plan.sub_pair.ext, plan.sub_pair.base)
            R = self.model.matrix_of(plan.reduce, target_dim=sub_model.D)
            self._sub = (plan, sub_model, R)
        return self._sub

    def _reduction_matrices(self):
        plan, sub_model, R = self._reduction()
        p = self.model.p
        return [(label, R @ sub_model.qpoly_matrix(L) % p) for label, L in plan.sub_plan.conditions()]

    def reduced_vectors(self, X):
        """Flat coordinates of ``Tr^n_l(alpha)`` in the standalone F_{q^l}."""
        _, sub_model, R = self._reduction()
        return X @ R % self.model.p

    def reduced_oracle(self, X):
        _, sub_model, _ = self._reduction()
        return sub_model.oracle(self.reduced_vectors(X))

    def zero_masks(self, X, cid):
        """(N, k) boolean array: which condition maps vanish on each element."""
        mats = self.condition_matrices(cid)
        return np.stack([~self.model.nonzero(X, M) for _, M in mats], axis=1)

    def verdicts(self, X, cid):
        if cid == "oracle":
            return self.model.oracle(X)
        return ~self.zero_masks(X, cid).any(axis=1)


# -- sweeps ----------------------------------------------------------------------------

@dataclass
class SweepResult:
    q: int
    n: int
    size: int
    criteria: list
    counts: dict
    disagreements: int = 0
    first_disagreement: object = None
    verdicts_at_first: dict = field(default_factory=dict)

    @property
    def unanimous(self):
        return self.disagreements == 0


def _chunks(total, chunk):
    return [(s, min(s + chunk, total)) for s in range(0, total, chunk)]


def sweep(pair, criteria=None, workers=1, chunk=DEFAULT_CHUNK, plans=None, evaluator=None):
    """Evaluate ``criteria`` on every element of F_{q^n}; counts plus first disagreement.

    Chunks may run on a thread pool; results are merged in index order, so
    the outcome does not depend on ``workers``.
    """
    ev = evaluator or BatchEvaluator(pair, plans)
    ids = list(criteria) if criteria is not None else pair.applicable()
    total = pair.ext.cardinality
    for cid in ids:
        if cid != "oracle":
            ev.condition_matrices(cid)
    if "reduce_thm8" in ids:
        ev._reduction()

    def work(span):
        X = ev.model.vectors(*span)
        v = np.stack([ev.verdicts(X, cid) for cid in ids], axis=1)
        counts = v.sum(axis=0)
        bad = ~(v.all(axis=1) | (~v).all(axis=1))
        first = int(np.argmax(bad)) + span[0] if bad.any() else None
        row = v[first - span[0]].tolist() if first is not None else None
        return counts, int(bad.sum()), first, row

    spans = _chunks(total, chunk)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, spans))
    else:
        parts = [work(s) for s in spans]

    res = SweepResult(pair.q, pair.n, total, ids, {cid: 0 for cid in ids})
    for counts, nbad, first, row in parts:
        for cid, c in zip(ids, counts):
            res.counts[cid] += int(c)
        res.disagreements += nbad
        if first is not None and res.first_disagreement is None:
            res.first_disagreement = first
            res.verdicts_at_first = dict(zip(ids, row))
    return res


def iter_blocks(pair, chunk=DEFAULT_CHUNK, evaluator=None):
    """Yield ``(start, X)`` blocks of flat coordinate rows covering F_{q^n}."""
    ev = evaluator or BatchEvaluator(pair)
    for s, e in _chunks(pair.ext.cardinality, chunk):
        yield s, ev.model.vectors(s, e)


@functools.lru_cache(maxsize=32)
def evaluator_for(q, n, seed=0, zeta_seed=0):
    from .criteria import field_pair

    return BatchEvaluator(field_pair(q, n, seed, zeta_seed))

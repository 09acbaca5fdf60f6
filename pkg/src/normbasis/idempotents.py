"""Orthogonal idempotents of F_q[x]/(x^n - 1) from the Gauss-period matrix.

With ``S_1, ..., S_r`` the q-classes of Z_n, ``eps_i(x) = sum_{a in S_i} x^a``
and ``alpha_j = zeta^{a_j}`` a root of the j-th orbit polynomial, the matrix
``M = (eps_i(alpha_j))`` has entries in F_q and is invertible, and

    (e_1(x), ..., e_r(x))^T = M^{-1} (eps_1(x), ..., eps_r(x))^T.
"""

from dataclasses import dataclass, field

from .errors import CtxMismatch, Singular
from .field_tower import FFElement, coerce_down
from .poly import (
    ClassPartition,
    Poly,
    epsilon_poly,
    orbit_min_poly,
    primitive_nth_root,
    q_classes,
    subfield_of_size,
    x_pow_minus_one,
)

SCHEMA_VERSION = 1


class MatrixFq:
    """Square matrix over a field context with raw entries, row-major."""

    __slots__ = ("ctx", "rows")

    def __init__(self, ctx, rows):
        conv = []
        for row in rows:
            out = []
            for v in row:
                if isinstance(v, FFElement):
                    if v.ctx is not ctx:
                        raise CtxMismatch(f"entry from {v.ctx}, expected {ctx}")
                    out.append(v.raw)
                else:
                    out.append(ctx(v).raw)
            conv.append(tuple(out))
        if any(len(r) != len(conv) for r in conv):
            raise ValueError("matrix must be square")
        self.ctx = ctx
        self.rows = tuple(conv)

    @classmethod
    def identity(cls, ctx, r):
        return cls(ctx, [[1 if i == j else 0 for j in range(r)] for i in range(r)])

    @property
    def r(self):
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return FFElement(self.ctx, self.rows[i][j])

    def __eq__(self, other):
        if isinstance(other, MatrixFq):
            return other.ctx is self.ctx and other.rows == self.rows
        if isinstance(other, (list, tuple)):
            try:
                return self == MatrixFq(self.ctx, other)
            except (ValueError, TypeError):
                return False
        return NotImplemented

    __hash__ = None

    def __matmul__(self, other):
        if other.ctx is not self.ctx or other.r != self.r:
            raise CtxMismatch("incompatible matrices")
        ctx, r = self.ctx, self.r
        out = []
        for i in range(r):
            row = []
            for j in range(r):
                acc = ctx.zero
                for k in range(r):
                    acc = ctx.radd(acc, ctx.rmul(self.rows[i][k], other.rows[k][j]))
                row.append(acc)
            out.append(row)
        return MatrixFq._from_raw(ctx, out)

    def scale(self, c):
        c = self.ctx(c).raw
        return MatrixFq._from_raw(self.ctx, [[self.ctx.rmul(c, v) for v in row] for row in self.rows])

    @classmethod
    def _from_raw(cls, ctx, rows):
        m = cls.__new__(cls)
        m.ctx = ctx
        m.rows = tuple(tuple(r) for r in rows)
        return m

    def to_list(self):
        return [[self.ctx.to_list(v) for v in row] for row in self.rows]

    def __repr__(self):
        return f"MatrixFq({self.to_list()} over {self.ctx.describe()})"


def matrix_inverse_fq(M):
    """Gauss-Jordan inverse over the matrix's field; raises :class:`Singular`."""
    ctx, r = M.ctx, M.r
    a = [list(row) + [ctx.one if i == j else ctx.zero for j in range(r)] for i, row in enumerate(M.rows)]
    for col in range(r):
        piv = next((i for i in range(col, r) if not ctx.riszero(a[i][col])), None)
        if piv is None:
            raise Singular(f"matrix is singular (no pivot in column {col})")
        a[col], a[piv] = a[piv], a[col]
        inv = ctx.rinv(a[col][col])
        a[col] = [ctx.rmul(inv, v) for v in a[col]]
        for i in range(r):
            if i != col and not ctx.riszero(a[i][col]):
                f = a[i][col]
                a[i] = [ctx.rsub(v, ctx.rmul(f, w)) for v, w in zip(a[i], a[col])]
    return MatrixFq._from_raw(ctx, [row[r:] for row in a])


def gauss_period_matrix(part, zeta, base=None):
    """``M[i][j] = eps_i(zeta^{a_j})`` coerced into F_q."""
    base = base if base is not None else subfield_of_size(zeta.ctx, part.q)
    n = part.n
    powers = [zeta.ctx.one_element]
    for _ in range(n - 1):
        powers.append(powers[-1] * zeta)
    rows = []
    for cls_i in part.classes:
        row = []
        for cls_j in part.classes:
            aj = cls_j.representative
            s = zeta.ctx.zero_element
            for a in cls_i.members:
                s = s + powers[a * aj % n]
            row.append(coerce_down(s, base))
        rows.append(row)
    return MatrixFq(base, rows)


@dataclass(frozen=True)
class IdempotentSet:
    part: ClassPartition
    base: object
    zeta: FFElement
    matrix: MatrixFq
    matrix_inv: MatrixFq
    idempotents: tuple
    min_polys: tuple = field(default=(), compare=False)

    @property
    def n(self):
        return self.part.n

    @property
    def q(self):
        return self.part.q

    def to_json(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "n": self.n,
            "q": self.q,
            "classes": [list(c.members) for c in self.part.classes],
            "M": self.matrix.to_list(),
            "M_inv": self.matrix_inv.to_list(),
            "idempotents": [_padded(e, self.n) for e in self.idempotents],
        }


def _padded(f, n):
    ctx = f.ctx
    out = [ctx.to_list(c) for c in f.raw_coeffs]
    out += [ctx.to_list(ctx.zero)] * (n - len(out))
    return out


def idempotents_from_root(part, zeta, base=None):
    """Build the idempotent set for a given partition and primitive root ``zeta``."""
    base = base if base is not None else subfield_of_size(zeta.ctx, part.q)
    M = gauss_period_matrix(part, zeta, base)
    Minv = matrix_inverse_fq(M)
    eps = [epsilon_poly(part, j, base) for j in range(part.r)]
    es = []
    for i in range(part.r):
        acc = Poly(base)
        for j in range(part.r):
            acc = acc + eps[j] * Minv[i, j]
        es.append(acc)
    mins = tuple(orbit_min_poly(part, i, zeta, base) for i in range(part.r))
    return IdempotentSet(part, base, zeta, M, Minv, tuple(es), mins)


def idempotents(n, base, seed=0):
    """Idempotents ``e_1..e_r`` of F_q[x]/(x^n - 1), ``q = |base|``; seed picks zeta."""
    q = base.cardinality
    part = q_classes(n, q)
    _, zeta = primitive_nth_root(n, base, seed)
    return idempotents_from_root(part, zeta, base)


@dataclass
class VerificationReport:
    checks: dict

    @property
    def ok(self):
        return all(self.checks.values())

    @property
    def failures(self):
        return [k for k, v in self.checks.items() if not v]


def verify_idempotents(idem):
    """Check the sum, orthogonality and CRT residue identities of an idempotent set."""
    base, n, r = idem.base, idem.n, idem.part.r
    xn1 = x_pow_minus_one(base, n)
    es = idem.idempotents
    checks = {}
    total = Poly(base)
    for e in es:
        total = total + e
    checks["sum_is_one"] = total % xn1 == Poly(base, [base.one])
    ortho = True
    for i in range(r):
        for j in range(i, r):
            prod = (es[i] * es[j]) % xn1
            want = es[i] % xn1 if i == j else Poly(base)
            if prod != want:
                ortho = False
    checks["orthogonal"] = ortho
    mins = idem.min_polys or tuple(orbit_min_poly(idem.part, i, idem.zeta, base) for i in range(r))
    residues = True
    for i in range(r):
        for j in range(r):
            want = Poly(base, [base.one]) if i == j else Poly(base)
            if es[i] % mins[j] != want:
                residues = False
    checks["crt_residues"] = residues
    checks["matrix_inverse"] = (idem.matrix_inv @ idem.matrix) == MatrixFq.identity(base, r)
    return VerificationReport(checks)

"""q-polynomials (linearized polynomials) over F_q reduced modulo x^{q^n} - x.

A :class:`LinearizedPoly` stores ``(c_0, ..., c_{n-1})`` and denotes
``sum c_i x^{q^i}``.  The map :func:`phi` sends ``sum a_i x^i`` in
F_q[x]/(x^n - 1) to ``sum a_i x^{q^i}``; it turns ordinary multiplication
into composition, which is how :func:`lin_compose` is computed.
"""

from dataclasses import dataclass

from .errors import CtxMismatch
from .field_tower import FFElement, frobenius
from .poly import Poly


def _raw(base, c):
    if isinstance(c, FFElement):
        if c.ctx is not base:
            raise CtxMismatch(f"coefficient from {c.ctx}, expected {base}")
        return c.raw
    return base(c).raw


class LinearizedPoly:
    __slots__ = ("base", "n", "raw_coeffs")

    def __init__(self, base, n, coeffs):
        coeffs = [_raw(base, c) for c in coeffs]
        if len(coeffs) > n:
            raise ValueError(f"expected at most {n} coefficients, got {len(coeffs)}")
        coeffs += [base.zero] * (n - len(coeffs))
        self.base = base
        self.n = n
        self.raw_coeffs = tuple(coeffs)

    @classmethod
    def from_terms(cls, base, n, terms):
        """Build ``sum c * x^{q^k}`` from ``{k: c}``; exponents are read mod n."""
        acc = [base.zero] * n
        for k, c in terms.items():
            acc[k % n] = base.radd(acc[k % n], _raw(base, c))
        return cls(base, n, acc)

    @classmethod
    def identity(cls, base, n):
        return cls.from_terms(base, n, {0: 1})

    @classmethod
    def q_power(cls, base, n, k):
        """``x^{q^k}`` (``k`` reduced mod n)."""
        return cls.from_terms(base, n, {k: 1})

    @classmethod
    def trace(cls, base, n, m=1):
        """Trace to the degree-m subfield: ``sum_{i < n/m} x^{q^{mi}}``."""
        return cls.from_terms(base, n, {m * i: 1 for i in range(n // m)})

    @property
    def coeffs(self):
        return tuple(FFElement(self.base, c) for c in self.raw_coeffs)

    def _check(self, other):
        if other.base is not self.base or other.n != self.n:
            raise CtxMismatch("q-polynomials over different (base, n)")

    def __add__(self, other):
        self._check(other)
        add = self.base.radd
        return LinearizedPoly(self.base, self.n, [add(a, b) for a, b in zip(self.raw_coeffs, other.raw_coeffs)])

    def __sub__(self, other):
        self._check(other)
        sub = self.base.rsub
        return LinearizedPoly(self.base, self.n, [sub(a, b) for a, b in zip(self.raw_coeffs, other.raw_coeffs)])

    def __neg__(self):
        return LinearizedPoly(self.base, self.n, [self.base.rneg(a) for a in self.raw_coeffs])

    def scale(self, c):
        c = _raw(self.base, c)
        return LinearizedPoly(self.base, self.n, [self.base.rmul(c, a) for a in self.raw_coeffs])

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, LinearizedPoly):
            return NotImplemented
        return other.base is self.base and other.n == self.n and other.raw_coeffs == self.raw_coeffs

    def __hash__(self):
        return hash((id(self.base), self.n, self.raw_coeffs))

    def is_zero(self):
        return all(self.base.riszero(c) for c in self.raw_coeffs)

    def preimage(self):
        """The polynomial ``f`` with ``phi(f) = self`` (degree < n)."""
        return Poly(self.base, self.raw_coeffs)

    def __call__(self, alpha):
        return lin_eval(self, alpha)

    def to_json(self):
        return {"n": self.n, "coeffs": [self.base.to_list(c) for c in self.raw_coeffs]}

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.raw_coeffs):
            if not self.base.riszero(c):
                mono = "x" if i == 0 else ("x^q" if i == 1 else f"x^(q^{i})")
                v = self.base.to_list(c)
                terms.append(mono if c == self.base.one else f"{v}*{mono}")
        return f"LinearizedPoly({' + '.join(terms) or '0'}; n={self.n})"


def phi(f, n):
    """Transport ``f`` (reduced mod x^n - 1) to the q-polynomial ``sum a_i x^{q^i}``."""
    base = f.ctx
    acc = [base.zero] * n
    for i, c in enumerate(f.raw_coeffs):
        acc[i % n] = base.radd(acc[i % n], c)
    return LinearizedPoly(base, n, acc)


def _scale_in(a, c, base):
    if a.ctx is base:
        return a * c
    return FFElement(a.ctx, a.ctx.rscale(c.raw, a.raw))


def lin_eval(L, alpha):
    """``sum c_i alpha^{q^i}`` using one Frobenius application per step."""
    base = L.base
    if alpha.ctx.degree_over(base) != L.n:
        raise CtxMismatch(f"element of {alpha.ctx} is not in an extension of degree {L.n} over {base}")
    coeffs = L.coeffs
    last = max((i for i, c in enumerate(coeffs) if c), default=-1)
    acc = alpha.ctx.zero_element
    cur = alpha
    for i in range(last + 1):
        c = coeffs[i]
        if c:
            acc = acc + _scale_in(cur, c, base)
        if i < last:
            cur = frobenius(cur, 1, base)
    return acc


def lin_compose(L, K):
    """``L(K(x))`` computed as ``phi(f * g mod x^n - 1)`` for ``L = phi(f)``, ``K = phi(g)``."""
    L._check(K)
    return phi(L.preimage() * K.preimage(), L.n)


@dataclass(frozen=True)
class MinimalQPoly:
    """Monic minimal q-polynomial of an element: ``x^{q^d} + sum_{i<d} c_i x^{q^i}``.

    Stored unreduced (``d + 1`` coefficients, ``d <= n``) because for a normal
    element it equals ``x^{q^n} - x``, which vanishes modulo ``x^{q^n} - x``.
    """

    base: object
    n: int
    raw_coeffs: tuple

    @property
    def degree(self):
        return len(self.raw_coeffs) - 1

    @property
    def coeffs(self):
        return tuple(FFElement(self.base, c) for c in self.raw_coeffs)

    def reduced(self):
        return LinearizedPoly.from_terms(self.base, self.n, dict(enumerate(self.coeffs)))

    def is_full(self):
        return self.degree == self.n


def _fq_coords(a, base):
    if a.ctx is base:
        return [a.raw]
    return list(a.raw)


def minimal_q_poly(alpha, base=None):
    """First F_q-linear dependency among ``alpha, alpha^q, alpha^{q^2}, ...``."""
    ctx = alpha.ctx
    base = base if base is not None else (ctx.base if ctx.base is not None else ctx)
    n = ctx.degree_over(base)
    B = base
    rows = []  # (pivot, normalized vector, combination over conjugate indices)
    cur = alpha
    for k in range(n + 1):
        vec = _fq_coords(cur, base)
        combo = [B.zero] * (n + 1)
        combo[k] = B.one
        for piv, rvec, rcombo in rows:
            f = vec[piv]
            if not B.riszero(f):
                vec = [B.rsub(v, B.rmul(f, w)) for v, w in zip(vec, rvec)]
                combo = [B.rsub(v, B.rmul(f, w)) for v, w in zip(combo, rcombo)]
        piv = next((i for i, v in enumerate(vec) if not B.riszero(v)), None)
        if piv is None:
            return MinimalQPoly(base, n, tuple(combo[: k + 1]))
        inv = B.rinv(vec[piv])
        rows.append((piv, [B.rmul(inv, v) for v in vec], [B.rmul(inv, v) for v in combo]))
        cur = frobenius(cur, 1, base)
    raise AssertionError("unreachable: n + 1 conjugates are always dependent")

"""Polynomials over a field context, q-cyclotomic classes, and roots of unity.

:class:`Poly` is a dense univariate polynomial stored low degree first with
trailing zeros trimmed (the zero polynomial has no coefficients).  The
factorization of ``x^n - 1`` over F_q is never computed by a generic
factoring algorithm: each irreducible factor is rebuilt from the orbit of a
primitive n-th root of unity under Frobenius (:func:`orbit_min_poly`).
"""

import random
import re
from dataclasses import dataclass
from math import gcd

from .errors import (
    CtxMismatch,
    DivisionByZero,
    IndexOutOfRange,
    NotCoprime,
    NotMonic,
    SearchExhausted,
)
from .field_tower import FFElement, coerce_down, extend
from .ntheory import mult_order, prime_divisors

__all__ = [
    "Poly",
    "CyclotomicClass",
    "ClassPartition",
    "is_irreducible",
    "mult_order",
    "primitive_nth_root",
    "q_classes",
    "epsilon_poly",
    "orbit_min_poly",
    "x_pow_minus_one",
    "format_poly",
    "parse_poly",
]


def _trim(ctx, coeffs):
    coeffs = list(coeffs)
    while coeffs and ctx.riszero(coeffs[-1]):
        coeffs.pop()
    return tuple(coeffs)


class Poly:
    """Dense polynomial over ``ctx`` with raw coefficients, low degree first."""

    __slots__ = ("ctx", "raw_coeffs")

    def __init__(self, ctx, coeffs=()):
        raws = []
        for c in coeffs:
            if isinstance(c, FFElement):
                if c.ctx is not ctx:
                    raise CtxMismatch(f"coefficient from {c.ctx}, expected {ctx}")
                raws.append(c.raw)
            elif isinstance(c, int) and ctx.base is not None:
                raws.append(ctx(c).raw)
            else:
                raws.append(c if ctx.base is not None else c % ctx.p)
        self.ctx = ctx
        self.raw_coeffs = _trim(ctx, raws)

    @classmethod
    def from_ints(cls, ctx, ints):
        return cls(ctx, [ctx(int(c)).raw for c in ints])

    @classmethod
    def monomial(cls, ctx, k, c=None):
        c = ctx.one if c is None else (c.raw if isinstance(c, FFElement) else ctx(c).raw)
        return cls(ctx, [ctx.zero] * k + [c])

    @property
    def coeffs(self):
        return tuple(FFElement(self.ctx, c) for c in self.raw_coeffs)

    @property
    def degree(self):
        return len(self.raw_coeffs) - 1

    def is_zero(self):
        return not self.raw_coeffs

    def is_monic(self):
        return bool(self.raw_coeffs) and self.raw_coeffs[-1] == self.ctx.one

    def __getitem__(self, k):
        if 0 <= k < len(self.raw_coeffs):
            return FFElement(self.ctx, self.raw_coeffs[k])
        return self.ctx.zero_element

    def _coerce(self, g):
        if isinstance(g, Poly):
            if g.ctx is not self.ctx:
                raise CtxMismatch(f"polynomials over {self.ctx} and {g.ctx}")
            return g
        if isinstance(g, (int, FFElement)):
            return Poly(self.ctx, [g])
        return None

    def __eq__(self, g):
        g = self._coerce(g)
        return NotImplemented if g is None else g.raw_coeffs == self.raw_coeffs

    def __hash__(self):
        return hash((id(self.ctx), self.raw_coeffs))

    def __add__(self, g):
        g = self._coerce(g)
        if g is None:
            return NotImplemented
        ctx = self.ctx
        a, b = self.raw_coeffs, g.raw_coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = ctx.radd(out[i], c)
        return Poly(ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ctx, [self.ctx.rneg(c) for c in self.raw_coeffs])

    def __sub__(self, g):
        g = self._coerce(g)
        return NotImplemented if g is None else self + (-g)

    def __rsub__(self, g):
        g = self._coerce(g)
        return NotImplemented if g is None else g + (-self)

    def __mul__(self, g):
        g = self._coerce(g)
        if g is None:
            return NotImplemented
        ctx = self.ctx
        a, b = self.raw_coeffs, g.raw_coeffs
        if not a or not b:
            return Poly(ctx)
        out = [ctx.zero] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ctx.riszero(ai):
                continue
            for j, bj in enumerate(b):
                out[i + j] = ctx.radd(out[i + j], ctx.rmul(ai, bj))
        return Poly(ctx, out)

    __rmul__ = __mul__

    def __divmod__(self, g):
        g = self._coerce(g)
        if g is None:
            return NotImplemented
        if g.is_zero():
            raise DivisionByZero("polynomial division by zero")
        ctx = self.ctx
        rem = list(self.raw_coeffs)
        db = g.degree
        lead_inv = ctx.rinv(g.raw_coeffs[-1])
        quot = [ctx.zero] * max(len(rem) - db, 0)
        for d in range(len(rem) - 1, db - 1, -1):
            c = rem[d]
            if ctx.riszero(c):
                continue
            c = ctx.rmul(c, lead_inv)
            quot[d - db] = c
            for j, gj in enumerate(g.raw_coeffs):
                rem[d - db + j] = ctx.rsub(rem[d - db + j], ctx.rmul(c, gj))
        return Poly(ctx, quot), Poly(ctx, rem[:db])

    def __floordiv__(self, g):
        return divmod(self, g)[0]

    def __mod__(self, g):
        return divmod(self, g)[1]

    def __pow__(self, e):
        result = Poly(self.ctx, [self.ctx.one])
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def pow_mod(self, e, mod):
        result = Poly(self.ctx, [self.ctx.one]) % mod
        base = self % mod
        while e:
            if e & 1:
                result = (result * base) % mod
            e >>= 1
            if e:
                base = (base * base) % mod
        return result

    def monic(self):
        if self.is_zero():
            return self
        inv = self.ctx.rinv(self.raw_coeffs[-1])
        return Poly(self.ctx, [self.ctx.rmul(inv, c) for c in self.raw_coeffs])

    def gcd(self, g):
        """Monic greatest common divisor (zero if both are zero)."""
        a, b = self, self._coerce(g)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def eval(self, x):
        """Evaluate at ``x``, an element of ``ctx`` or of an extension of it."""
        if isinstance(x, int):
            x = self.ctx(x)
        if x.ctx is not self.ctx:
            coeffs = [x.ctx.embed(c) for c in self.coeffs]
        else:
            coeffs = self.coeffs
        acc = x.ctx.zero_element
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc

    __call__ = eval

    def to_list(self):
        return [self.ctx.to_list(c) for c in self.raw_coeffs]

    def __repr__(self):
        return f"Poly({format_poly(self)} over {self.ctx.describe()})"

    def __str__(self):
        return format_poly(self)


def x_pow_minus_one(ctx, n):
    """The polynomial ``x^n - 1`` over ``ctx``."""
    return Poly.monomial(ctx, n) - 1


# -- text form ------------------------------------------------------------------------

def _format_coeff(ctx, raw):
    v = ctx.to_list(raw)
    if isinstance(v, list):
        return "[" + ",".join(_format_nested(x) for x in v) + "]"
    return str(v)


def _format_nested(v):
    if isinstance(v, list):
        return "[" + ",".join(_format_nested(x) for x in v) + "]"
    return str(v)


def format_poly(f, var="x"):
    """Text form ``c_k*x^k + ... + c_0``; extension coefficients print as lists."""
    ctx = f.ctx
    if f.is_zero():
        return "0"
    terms = []
    for k in range(f.degree, -1, -1):
        c = f.raw_coeffs[k]
        if ctx.riszero(c):
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if c == ctx.one and k > 0:
            terms.append(mono)
        elif k == 0:
            terms.append(_format_coeff(ctx, c))
        else:
            terms.append(f"{_format_coeff(ctx, c)}*{mono}")
    return " + ".join(terms)


_TERM = re.compile(
    r"""^(?:(?P<coef>-?\d+|\[[\d,\s\[\]-]*\])\s*\*?\s*)?
         (?:(?P<var>[a-z])(?:\^(?P<exp>\d+))?)?$""",
    re.VERBOSE,
)


def _split_terms(text):
    terms, depth, cur = [], 0, ""
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch in "+-" and depth == 0 and cur.strip():
            terms.append(cur)
            cur = "-" if ch == "-" else ""
            continue
        cur += ch
    if cur.strip():
        terms.append(cur)
    return [t.replace(" ", "") for t in terms]


def parse_poly(text, ctx):
    """Inverse of :func:`format_poly`.

    Grammar: terms ``c*x^k``, ``c*x``, ``x^k``, ``x`` or ``c`` joined by ``+``
    or ``-``; ``c`` is an integer or, over an extension, a bracketed list of
    base coordinates such as ``[1,0,2]``.
    """
    import json

    text = text.strip()
    if text in ("", "0"):
        return Poly(ctx)
    out = {}
    for term in _split_terms(text):
        sign = 1
        if term.startswith("-"):
            sign, term = -1, term[1:]
        m = _TERM.match(term)
        if not m or not term:
            raise ValueError(f"cannot parse term {term!r}")
        coef = m.group("coef")
        if m.group("var") is None and coef is None:
            raise ValueError(f"cannot parse term {term!r}")
        exp = 0 if m.group("var") is None else int(m.group("exp") or 1)
        c = ctx(json.loads(coef)) if coef is not None else ctx.one_element
        if sign < 0:
            c = -c
        out[exp] = out.get(exp, ctx.zero_element) + c
    deg = max(out)
    return Poly(ctx, [out.get(k, ctx.zero_element) for k in range(deg + 1)])


# -- irreducibility -------------------------------------------------------------------

def is_irreducible(f):
    """Rabin's test: ``x^{Q^d} = x (mod f)`` and ``gcd(x^{Q^{d/l}} - x, f) = 1``."""
    if not f.is_monic():
        raise NotMonic(f"{f} is not monic")
    d = f.degree
    if d < 1:
        return False
    if d == 1:
        return True
    ctx = f.ctx
    Q = ctx.cardinality
    x = Poly.monomial(ctx, 1)
    # Frobenius powers x^{Q^i} mod f for i = 1..d
    powers = [x % f]
    for _ in range(d):
        powers.append(powers[-1].pow_mod(Q, f))
    if powers[d] != x % f:
        return False
    for ell in prime_divisors(d):
        h = powers[d // ell] - x
        if h.gcd(f).degree > 0:
            return False
    return True


# -- q-cyclotomic classes -----------------------------------------------------------

@dataclass(frozen=True)
class CyclotomicClass:
    representative: int
    members: tuple

    @property
    def size(self):
        return len(self.members)


@dataclass(frozen=True)
class ClassPartition:
    """Partition of Z_n into orbits under multiplication by q."""

    n: int
    q: int
    classes: tuple
    class_of: tuple

    @property
    def r(self):
        return len(self.classes)

    @property
    def sizes(self):
        return tuple(c.size for c in self.classes)

    def to_json(self):
        return {"n": self.n, "q": self.q, "classes": [list(c.members) for c in self.classes]}


def q_classes(n, q):
    """Cyclotomic classes of Z_n under ``a -> a*q``, ordered by smallest member."""
    if n < 1:
        raise ValueError("n must be positive")
    if gcd(n, q) != 1:
        raise NotCoprime(f"gcd({n}, {q}) != 1")
    class_of = [None] * n
    classes = []
    for a in range(n):
        if class_of[a] is not None:
            continue
        orbit = [a]
        b = a * q % n
        while b != a:
            orbit.append(b)
            b = b * q % n
        idx = len(classes)
        for b in orbit:
            class_of[b] = idx
        classes.append(CyclotomicClass(a, tuple(sorted(orbit))))
    return ClassPartition(n, q, tuple(classes), tuple(class_of))


def epsilon_poly(part, i, ctx):
    """``eps_i(x) = sum of x^a over the class S_i`` as a polynomial over ``ctx``."""
    if not 0 <= i < part.r:
        raise IndexOutOfRange(f"class index {i} out of range 0..{part.r - 1}")
    coeffs = [ctx.zero] * part.n
    for a in part.classes[i].members:
        coeffs[a] = ctx.one
    return Poly(ctx, coeffs)


# -- roots of unity -------------------------------------------------------------------

def primitive_nth_root(n, base, seed=0, max_tries=256):
    """Return ``(ext, zeta)`` with ``zeta`` of multiplicative order exactly ``n``.

    ``ext`` is F_{q^s} over ``base`` with ``s = ord_n(q)``; for ``s = 1`` it is
    ``base`` itself.  The choice of ``zeta`` is seed-deterministic.
    """
    q = base.cardinality
    s = mult_order(q, n)
    if n == 1:
        return base, base.one_element
    ext = extend(base, s, seed=seed)
    rng = random.Random(f"zeta:{seed}")
    cofactor = (ext.cardinality - 1) // n
    ells = prime_divisors(n)
    for _ in range(max_tries):
        a = ext.random_element(rng, nonzero=True)
        z = a**cofactor
        if all(z ** (n // ell) != 1 for ell in ells):
            return ext, z
    raise SearchExhausted(f"no primitive {n}-th root found in {max_tries} tries")


def subfield_of_size(ctx, q):
    """The context of cardinality ``q`` in the tower of ``ctx``."""
    for c in ctx.tower():
        if c.cardinality == q:
            return c
    raise CtxMismatch(f"no field of size {q} in the tower of {ctx}")


def orbit_min_poly(part, i, zeta, base=None):
    """``p_i(x) = prod over a in S_i of (x - zeta^a)``, realized over F_q."""
    if not 0 <= i < part.r:
        raise IndexOutOfRange(f"class index {i} out of range 0..{part.r - 1}")
    ext = zeta.ctx
    base = base if base is not None else subfield_of_size(ext, part.q)
    prod = Poly(ext, [ext.one])
    for a in part.classes[i].members:
        prod = prod * Poly(ext, [-(zeta**a), ext.one_element])
    return Poly(base, [coerce_down(c, base) for c in prod.coeffs])

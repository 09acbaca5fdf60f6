"""Exact arithmetic in F_p, F_q = F_{p^m} and one further extension F_{q^k}.

A field is described by an immutable :class:`FieldCtx`.  Prime fields store
their elements as residues ``0 <= r < p``; an extension of a base context
stores elements as tuples of base-field "raw" values, i.e. coordinates in the
power basis ``1, t, ..., t^{k-1}`` of ``base[t]/(modulus)``.  Towers are at
most two levels deep above the prime field.

Elements are wrapped in :class:`FFElement`, which overloads the arithmetic
operators and refuses to mix elements of different contexts.
"""

import random
import re
import threading

from .errors import (
    CtxMismatch,
    DivisionByZero,
    NotADivisor,
    NotInSubfield,
    NotPrime,
    SearchExhausted,
    TowerTooDeep,
)
from .ntheory import is_prime

MAX_PRIME = 2**31
MAX_CARDINALITY = 2**128
MAX_DEPTH = 2


class FieldCtx:
    """Common interface of prime fields and extension fields.

    Subclasses implement the ``r*`` methods, which act on raw values.
    """

    p: int
    base: "FieldCtx | None"
    degree: int
    cardinality: int
    depth: int

    def __init__(self):
        self._frob = None
        self._frob_lock = threading.Lock()

    # -- construction of elements -------------------------------------------------
    def element(self, raw):
        return FFElement(self, raw)

    def __call__(self, value=0):
        """Build an element from an int, a coordinate list, or a base element."""
        if isinstance(value, FFElement):
            if value.ctx is self:
                return value
            return self.embed(value)
        return FFElement(self, self._raw_from(value))

    @property
    def zero_element(self):
        return FFElement(self, self.zero)

    @property
    def one_element(self):
        return FFElement(self, self.one)

    @property
    def prime_field(self):
        ctx = self
        while ctx.base is not None:
            ctx = ctx.base
        return ctx

    @property
    def flat_degree(self):
        """Dimension of this field as a vector space over F_p."""
        return self.degree * (self.base.flat_degree if self.base is not None else 1)

    def tower(self):
        """Contexts from this one down to the prime field."""
        out = [self]
        while out[-1].base is not None:
            out.append(out[-1].base)
        return out

    def embed(self, b):
        """Canonical image of an element of a subfield in the tower."""
        if not isinstance(b, FFElement):
            return self(b)
        if b.ctx is self:
            return b
        if self.base is None:
            raise CtxMismatch(f"{b.ctx} is not a subfield of {self}")
        inner = self.base.embed(b)
        return FFElement(self, self._raw_from_base(inner.raw))

    # -- enumeration ----------------------------------------------------------------
    def from_index(self, k):
        """Element with lexicographic index ``k`` (lowest flat coordinate fastest)."""
        if not 0 <= k < self.cardinality:
            raise IndexError(k)
        digits = []
        for _ in range(self.flat_degree):
            k, d = divmod(k, self.p)
            digits.append(d)
        return FFElement(self, self.raw_from_flat(digits))

    def index(self, a):
        k = 0
        for d in reversed(self.flat(a.raw)):
            k = k * self.p + d
        return k

    def elements(self):
        for k in range(self.cardinality):
            yield self.from_index(k)

    def random_element(self, rng, nonzero=False):
        while True:
            a = self.from_index(rng.randrange(self.cardinality))
            if not (nonzero and a.is_zero()):
                return a

    # -- Frobenius ----------------------------------------------------------------
    @property
    def frobenius_matrix(self):
        """Rows ``(t^j)^{|base|}`` as raw values; built once, thread-safely."""
        if self._frob is None:
            with self._frob_lock:
                if self._frob is None:
                    self._frob = self._build_frobenius()
        return self._frob

    def degree_over(self, sub):
        """Degree ``[self : sub]``; ``sub`` must lie in this context's tower."""
        d = 1
        ctx = self
        while ctx is not sub:
            if ctx.base is None:
                raise CtxMismatch(f"{sub} is not in the tower of {self}")
            d *= ctx.degree
            ctx = ctx.base
        return d

    def rpow(self, a, e):
        if e < 0:
            return self.rpow(self.rinv(a), -e)
        result = self.one
        while e:
            if e & 1:
                result = self.rmul(result, a)
            e >>= 1
            if e:
                a = self.rmul(a, a)
        return result

    def __repr__(self):
        return self.describe()


class PrimeField(FieldCtx):
    def __init__(self, p):
        super().__init__()
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if p >= MAX_PRIME:
            raise ValueError(f"p = {p} exceeds the supported bound 2^31")
        self.p = p
        self.base = None
        self.modulus = None
        self.degree = 1
        self.cardinality = p
        self.depth = 0
        self.zero = 0
        self.one = 1

    def describe(self):
        return f"GF({self.p})"

    def _raw_from(self, value):
        if isinstance(value, (list, tuple)):
            if len(value) != 1:
                raise ValueError("prime field element takes one coordinate")
            value = value[0]
        return int(value) % self.p

    def _build_frobenius(self):
        return ((1,),)

    def radd(self, a, b):
        return (a + b) % self.p

    def rsub(self, a, b):
        return (a - b) % self.p

    def rneg(self, a):
        return -a % self.p

    def rmul(self, a, b):
        return a * b % self.p

    def rscale(self, c, a):
        return c * a % self.p

    def rinv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def rpow(self, a, e):
        if e < 0:
            return pow(self.rinv(a), -e, self.p)
        return pow(a, e, self.p)

    def riszero(self, a):
        return a == 0

    def rfrob(self, a):
        return a

    def flat(self, a):
        return (a,)

    def raw_from_flat(self, digits):
        (d,) = digits
        return d % self.p

    def to_list(self, a):
        return a


class ExtensionField(FieldCtx):
    """``base[t]/(modulus)`` for a monic irreducible ``modulus`` of degree k."""

    def __init__(self, base, modulus_raw, seed=None):
        super().__init__()
        if base.depth >= MAX_DEPTH:
            raise TowerTooDeep(f"cannot extend {base}: tower depth is capped at {MAX_DEPTH}")
        k = len(modulus_raw) - 1
        if k < 1 or modulus_raw[-1] != base.one:
            raise ValueError("modulus must be monic of degree >= 1")
        self.p = base.p
        self.base = base
        self.degree = k
        self.cardinality = base.cardinality**k
        if self.cardinality > MAX_CARDINALITY:
            raise ValueError("field cardinality exceeds 2^128")
        self.depth = base.depth + 1
        self.seed = seed
        self._mod = tuple(modulus_raw)
        self.zero = tuple(base.zero for _ in range(k))
        self.one = (base.one,) + self.zero[1:]
        self._prime_base = base.base is None
        self._reduction = self._reduction_rows()

    @property
    def modulus(self):
        from .poly import Poly

        return Poly(self.base, self._mod)

    def describe(self):
        from .poly import format_poly

        var = "t" if self.depth == 1 else "u"
        return f"{self.base.describe()}[{var}]/({format_poly(self.modulus, var=var)})"

    # x^d mod f for d = k .. 2k-2, as raw coordinate rows
    def _reduction_rows(self):
        B, k = self.base, self.degree
        tail = [B.rneg(c) for c in self._mod[:k]]  # t^k = -(f_0 + ... + f_{k-1} t^{k-1})
        rows = []
        cur = tail
        for _ in range(max(k - 1, 0)):
            rows.append(tuple(cur))
            # multiply by t and reduce
            top = cur[-1]
            shifted = [B.zero] + cur[:-1]
            cur = [B.radd(s, B.rmul(top, t)) for s, t in zip(shifted, tail)]
        return tuple(rows)

    def _raw_from(self, value):
        B = self.base
        if isinstance(value, (list, tuple)):
            if len(value) > self.degree:
                raise ValueError(f"expected at most {self.degree} coordinates")
            coords = [B(v).raw if not isinstance(v, FFElement) else self._base_raw(v) for v in value]
            coords += [B.zero] * (self.degree - len(coords))
            return tuple(coords)
        return self._raw_from_base(B(int(value)).raw)

    def _base_raw(self, v):
        if v.ctx is not self.base:
            raise CtxMismatch(f"coordinate from {v.ctx}, expected {self.base}")
        return v.raw

    def _raw_from_base(self, b):
        return (b,) + self.zero[1:]

    def _build_frobenius(self):
        B = self.base
        t = (B.zero, B.one) + self.zero[2:] if self.degree > 1 else (B.one,)
        tq = self.rpow(t, B.cardinality)
        rows = [self.one]
        for _ in range(1, self.degree):
            rows.append(self.rmul(rows[-1], tq))
        return tuple(rows)

    def radd(self, a, b):
        if self._prime_base:
            p = self.p
            return tuple((x + y) % p for x, y in zip(a, b))
        add = self.base.radd
        return tuple(add(x, y) for x, y in zip(a, b))

    def rsub(self, a, b):
        if self._prime_base:
            p = self.p
            return tuple((x - y) % p for x, y in zip(a, b))
        sub = self.base.rsub
        return tuple(sub(x, y) for x, y in zip(a, b))

    def rneg(self, a):
        if self._prime_base:
            p = self.p
            return tuple(-x % p for x in a)
        neg = self.base.rneg
        return tuple(neg(x) for x in a)

    def rscale(self, c, a):
        """Multiply ``a`` by the base-field raw scalar ``c``."""
        if self._prime_base:
            p = self.p
            return tuple(c * x % p for x in a)
        mul = self.base.rmul
        return tuple(mul(c, x) for x in a)

    def rmul(self, a, b):
        k = self.degree
        if self._prime_base:
            p = self.p
            prod = [0] * (2 * k - 1)
            for i, ai in enumerate(a):
                if ai:
                    for j, bj in enumerate(b):
                        prod[i + j] += ai * bj
            res = prod[:k]
            for d, row in enumerate(self._reduction):
                c = prod[k + d] % p
                if c:
                    for j in range(k):
                        res[j] += c * row[j]
            return tuple(x % p for x in res)
        B = self.base
        add, mul, zero = B.radd, B.rmul, B.zero
        prod = [zero] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai == zero:
                continue
            for j, bj in enumerate(b):
                if bj != zero:
                    prod[i + j] = add(prod[i + j], mul(ai, bj))
        res = prod[:k]
        for d, row in enumerate(self._reduction):
            c = prod[k + d]
            if c != zero:
                for j in range(k):
                    res[j] = add(res[j], mul(c, row[j]))
        return tuple(res)

    def rinv(self, a):
        if a == self.zero:
            raise DivisionByZero("inverse of zero")
        return self.rpow(a, self.cardinality - 2)

    def riszero(self, a):
        return a == self.zero

    def rfrob(self, a):
        """``a^{|base|}`` by applying the cached base-linear Frobenius matrix."""
        rows = self.frobenius_matrix
        k = self.degree
        if self._prime_base:
            p = self.p
            res = [0] * k
            for c, row in zip(a, rows):
                if c:
                    for j in range(k):
                        res[j] += c * row[j]
            return tuple(x % p for x in res)
        B = self.base
        add, mul, zero = B.radd, B.rmul, B.zero
        res = [zero] * k
        for c, row in zip(a, rows):
            if c != zero:
                for j in range(k):
                    res[j] = add(res[j], mul(c, row[j]))
        return tuple(res)

    def flat(self, a):
        if self._prime_base:
            return tuple(a)
        out = []
        for c in a:
            out.extend(self.base.flat(c))
        return tuple(out)

    def raw_from_flat(self, digits):
        if self._prime_base:
            return tuple(int(d) % self.p for d in digits)
        w = self.base.flat_degree
        return tuple(self.base.raw_from_flat(digits[i * w:(i + 1) * w]) for i in range(self.degree))

    def to_list(self, a):
        return [self.base.to_list(c) for c in a]


class FFElement:
    """A field element: its context plus the raw coordinate value."""

    __slots__ = ("ctx", "raw")

    def __init__(self, ctx, raw):
        self.ctx = ctx
        self.raw = raw

    def _other(self, b):
        if isinstance(b, FFElement):
            if b.ctx is not self.ctx:
                raise CtxMismatch(f"operands live in {self.ctx} and {b.ctx}")
            return b.raw
        if isinstance(b, int):
            return self.ctx(b).raw
        return None

    def __add__(self, b):
        r = self._other(b)
        return NotImplemented if r is None else FFElement(self.ctx, self.ctx.radd(self.raw, r))

    __radd__ = __add__

    def __sub__(self, b):
        r = self._other(b)
        return NotImplemented if r is None else FFElement(self.ctx, self.ctx.rsub(self.raw, r))

    def __rsub__(self, b):
        r = self._other(b)
        return NotImplemented if r is None else FFElement(self.ctx, self.ctx.rsub(r, self.raw))

    def __neg__(self):
        return FFElement(self.ctx, self.ctx.rneg(self.raw))

    def __mul__(self, b):
        r = self._other(b)
        return NotImplemented if r is None else FFElement(self.ctx, self.ctx.rmul(self.raw, r))

    __rmul__ = __mul__

    def __truediv__(self, b):
        r = self._other(b)
        if r is None:
            return NotImplemented
        return FFElement(self.ctx, self.ctx.rmul(self.raw, self.ctx.rinv(r)))

    def __rtruediv__(self, b):
        r = self._other(b)
        if r is None:
            return NotImplemented
        return FFElement(self.ctx, self.ctx.rmul(r, self.ctx.rinv(self.raw)))

    def __pow__(self, e):
        return FFElement(self.ctx, self.ctx.rpow(self.raw, e))

    def inverse(self):
        return FFElement(self.ctx, self.ctx.rinv(self.raw))

    def scale(self, c):
        """Multiply by an element ``c`` of the base field (no embedding needed)."""
        if self.ctx.base is None:
            return self * c
        if c.ctx is not self.ctx.base:
            raise CtxMismatch(f"scalar from {c.ctx}, expected {self.ctx.base}")
        return FFElement(self.ctx, self.ctx.rscale(c.raw, self.raw))

    def __eq__(self, b):
        if isinstance(b, FFElement):
            return b.ctx is self.ctx and b.raw == self.raw
        if isinstance(b, int):
            return self.raw == self.ctx(b).raw
        return NotImplemented

    def __hash__(self):
        return hash((id(self.ctx), self.raw))

    def __bool__(self):
        return not self.ctx.riszero(self.raw)

    def is_zero(self):
        return self.ctx.riszero(self.raw)

    @property
    def coords(self):
        """Coordinates over the immediate base (residues for a prime field)."""
        if self.ctx.base is None:
            return (self.raw,)
        return tuple(FFElement(self.ctx.base, c) for c in self.raw)

    def flat(self):
        return self.ctx.flat(self.raw)

    def to_list(self):
        return self.ctx.to_list(self.raw)

    def frobenius(self, i=1, over=None):
        return frobenius(self, i, over)

    def __repr__(self):
        return f"{self.ctx.describe()}({self.to_list()})"


# -- construction -------------------------------------------------------------------

def make_field(p, m=1, seed=0):
    """Build F_{p^m}; for ``m > 1`` the modulus is a seeded random irreducible."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    prime = _prime_field(p)
    if m < 1:
        raise ValueError("m must be >= 1")
    return extend(prime, m, seed)


_PRIME_CACHE = {}
_PRIME_LOCK = threading.Lock()


def _prime_field(p):
    # prime fields are shared so that independently built towers agree on F_p
    with _PRIME_LOCK:
        if p not in _PRIME_CACHE:
            _PRIME_CACHE[p] = PrimeField(p)
        return _PRIME_CACHE[p]


def extend(base, k, seed=0, modulus=None, max_tries=None):
    """Build F_{|base|^k} over ``base``.

    ``modulus`` may be given explicitly (a monic irreducible ``Poly`` over
    ``base`` of degree ``k``); otherwise one is drawn from ``random.Random(seed)``.
    ``k == 1`` without an explicit modulus returns ``base`` itself.
    """
    from .poly import Poly, is_irreducible

    if k < 1:
        raise ValueError("extension degree must be >= 1")
    if base.depth >= MAX_DEPTH:
        raise TowerTooDeep(f"cannot extend {base}: tower depth is capped at {MAX_DEPTH}")
    if modulus is not None:
        if modulus.ctx is not base or modulus.degree != k:
            raise ValueError("modulus must be a degree-k polynomial over base")
        if not is_irreducible(modulus):
            raise ValueError(f"modulus {modulus} is reducible")
        return ExtensionField(base, modulus.raw_coeffs, seed=seed)
    if k == 1:
        return base
    rng = random.Random(seed)
    tries = max_tries if max_tries is not None else 64 * k + 64
    for _ in range(tries):
        low = [base.random_element(rng).raw for _ in range(k)]
        if base.riszero(low[0]):
            continue
        f = Poly(base, low + [base.one])
        if is_irreducible(f):
            return ExtensionField(base, f.raw_coeffs, seed=seed)
    raise SearchExhausted(f"no irreducible of degree {k} over {base} in {tries} tries")


def parse_field_spec(text):
    """Parse ``"p=<int>,m=<int>[,seed=<int>]"`` into a dict of ints."""
    fields = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        m = re.fullmatch(r"(p|m|seed)\s*=\s*(-?\d+)", part)
        if not m:
            raise ValueError(f"bad field spec component {part!r}")
        fields[m.group(1)] = int(m.group(2))
    if "p" not in fields:
        raise ValueError("field spec needs p=<int>")
    fields.setdefault("m", 1)
    fields.setdefault("seed", 0)
    return fields


def field_from_spec(text):
    spec = parse_field_spec(text)
    return make_field(spec["p"], spec["m"], spec["seed"])


# -- Frobenius, traces, subfields -----------------------------------------------------

def _default_over(ctx):
    return ctx.base if ctx.base is not None else ctx


def frobenius(a, i=1, over=None):
    """``a^{Q^i}`` where ``Q = |over|`` (default: the immediate base of ``a``)."""
    ctx = a.ctx
    over = _default_over(ctx) if over is None else over
    d = ctx.degree_over(over)
    i %= d
    if i == 0 or ctx is over:
        return a
    if ctx.base is over:
        raw = a.raw
        for _ in range(i):
            raw = ctx.rfrob(raw)
        return FFElement(ctx, raw)
    return a ** (over.cardinality**i)


def rel_trace(a, m, over=None):
    """Trace of ``a`` from its field down to the degree-``m`` subfield over ``over``."""
    ctx = a.ctx
    over = _default_over(ctx) if over is None else over
    n = ctx.degree_over(over)
    if m < 1 or n % m:
        raise NotADivisor(f"{m} does not divide {n}")
    acc = a
    cur = a
    for _ in range(n // m - 1):
        cur = frobenius(cur, m, over)
        acc = acc + cur
    return acc


def subfield_member(a, m, over=None):
    """True iff ``a`` lies in the degree-``m`` subfield (over ``over``)."""
    ctx = a.ctx
    over = _default_over(ctx) if over is None else over
    n = ctx.degree_over(over)
    if m < 1 or n % m:
        raise NotADivisor(f"{m} does not divide {n}")
    return frobenius(a, m, over) == a


def coerce_down(a, target):
    """Realize a Frobenius-fixed element of ``target``'s extension inside ``target``."""
    if a.ctx is target:
        return a
    if a.ctx.base is not target:
        raise CtxMismatch(f"{target} is not the base of {a.ctx}")
    zero = target.zero
    if any(c != zero for c in a.raw[1:]):
        raise NotInSubfield(f"{a} does not lie in {target}")
    return FFElement(target, a.raw[0])


def is_generator(a):
    """True iff ``a`` generates the multiplicative group of its field."""
    from .ntheory import prime_divisors

    if a.is_zero():
        return False
    order = a.ctx.cardinality - 1
    return all(a ** (order // ell) != 1 for ell in prime_divisors(order))

"""Decision procedures for normal basis generators (NBGs) of F_{q^n}/F_q.

Every procedure answers the same question: do ``alpha, alpha^q, ...,
alpha^{q^{n-1}}`` form an F_q-basis of F_{q^n}?

* ``oracle`` - rank of the n x n matrix of conjugate coordinates.
* ``new`` - ``E_i(alpha) != 0`` for every idempotent q-polynomial ``E_i``.
* ``classical`` - ``L_i(alpha) != 0`` with ``L_i = phi((x^n - 1)/p_i(x))``.
* ``thm4`` .. ``thm7`` - closed forms for prime n (q primitive, order
  (n-1)/2, general order f) and for n = p1*p2.
* ``reduce_thm8`` / ``corollary`` - the case p | n, via the trace to the
  largest subfield of degree prime to p.

Each closed-form plan exposes two routes: :meth:`verdict` evaluates the
stated inequalities directly on one element (with named witnesses), and
:meth:`conditions` rewrites every inequality ``lhs != rhs`` as a q-polynomial
``lhs - rhs`` that must not vanish, for the vectorized sweeps.
"""

import functools
from dataclasses import dataclass, field
from math import gcd
from typing import Optional

from .errors import EpsilonCollision, NoGenerator, NotApplicable, NotCoprime
from .field_tower import (
    FFElement,
    coerce_down,
    extend,
    frobenius,
    make_field,
    rel_trace,
    subfield_member,
)
from .idempotents import idempotents_from_root
from .linearized import LinearizedPoly, lin_eval, minimal_q_poly, phi
from .ntheory import is_primitive_root, is_prime, legendre, mult_order, prime_power, factorize
from .poly import Poly, orbit_min_poly, primitive_nth_root, q_classes, x_pow_minus_one

SCHEMA_VERSION = 1

CRITERIA_ORDER = (
    "oracle",
    "new",
    "classical",
    "thm4",
    "thm5",
    "thm6",
    "thm7",
    "reduce_thm8",
    "corollary",
)


@dataclass
class CriterionVerdict:
    criterion: str
    applicable: bool
    is_nbg: Optional[bool] = None
    witnesses: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "criterion": self.criterion,
            "applicable": self.applicable,
            "is_nbg": self.is_nbg,
            "witnesses": {k: _jsonable(v) for k, v in self.witnesses.items()},
        }


def _jsonable(v):
    if isinstance(v, FFElement):
        return v.to_list()
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return v


def inapplicable(criterion, reason):
    return CriterionVerdict(criterion, False, None, {"reason": reason})


# -- hypotheses ------------------------------------------------------------------------

def _char(q):
    return prime_power(q)[0]


def thm4_applies(q, n):
    return is_prime(n) and n != _char(q) and mult_order(q, n) == n - 1


def thm5_applies(q, n):
    return is_prime(n) and n > 2 and n != _char(q) and mult_order(q, n) == (n - 1) // 2


def thm6_applies(q, n):
    return is_prime(n) and n != _char(q)


def thm7_split(q, n):
    """Return ``(p1, p2)`` if n = p1*p2 meets the two-prime hypotheses, else None."""
    f = factorize(n)
    if len(f) != 2 or any(e != 1 for e in f.values()):
        return None
    p1, p2 = sorted(f)
    p = _char(q)
    if p1 < 3 or p in (p1, p2):
        return None
    if mult_order(q, p1) != p1 - 1 or mult_order(q, p2) != p2 - 1:
        return None
    if gcd(p1 - 1, p2 - 1) != 2:
        return None
    return p1, p2


def is_power_of(n, p):
    while n > 1 and n % p == 0:
        n //= p
    return n == 1


def applicable_criteria(q, n):
    """Criterion ids whose hypotheses hold for F_{q^n}/F_q, in a fixed order."""
    p = _char(q)
    out = ["oracle"]
    if gcd(q, n) == 1:
        out += ["new", "classical"]
        if thm4_applies(q, n):
            out.append("thm4")
        if thm5_applies(q, n):
            out.append("thm5")
        if thm6_applies(q, n):
            out.append("thm6")
        if thm7_split(q, n):
            out.append("thm7")
    else:
        out.append("reduce_thm8")
        if is_power_of(n, p):
            out.append("corollary")
    return out


# -- the oracle -----------------------------------------------------------------------

def _default_base(alpha, base):
    if base is not None:
        return base
    return alpha.ctx.base if alpha.ctx.base is not None else alpha.ctx


def fq_coords(a, base):
    """Raw F_q coordinates of an element of F_{q^n} (a 1-vector when n = 1)."""
    return [a.raw] if a.ctx is base else list(a.raw)


def conjugate_rank(alpha, base=None):
    """F_q-rank of ``{alpha^{q^i}}``, by exact Gaussian elimination."""
    base = _default_base(alpha, base)
    n = alpha.ctx.degree_over(base)
    B = base
    rows = []
    cur = alpha
    for _ in range(n):
        rows.append(fq_coords(cur, base))
        cur = frobenius(cur, 1, base)
    rank = 0
    for col in range(n):
        piv = next((i for i in range(rank, n) if not B.riszero(rows[i][col])), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = B.rinv(rows[rank][col])
        prow = [B.rmul(inv, v) for v in rows[rank]]
        rows[rank] = prow
        for i in range(rank + 1, n):
            f = rows[i][col]
            if not B.riszero(f):
                rows[i] = [B.rsub(v, B.rmul(f, w)) for v, w in zip(rows[i], prow)]
        rank += 1
    return rank


def nbg_oracle(alpha, base=None):
    """True iff the Frobenius conjugates of ``alpha`` are F_q-linearly independent."""
    base = _default_base(alpha, base)
    return conjugate_rank(alpha, base) == alpha.ctx.degree_over(base)


# -- setting: F_q, F_{q^n}, and a primitive n-th root of unity ----------------------

class FieldPair:
    """The extension F_{q^n}/F_q together with the derived objects criteria need.

    ``seed`` fixes the moduli of F_q and F_{q^n}; ``zeta_seed`` fixes the
    primitive n-th root of unity (and the modulus of the field holding it).
    Everything is computed lazily and cached.
    """

    def __init__(self, base, n, ext=None, seed=0, zeta_seed=0):
        self.base = base
        self.n = n
        self.q = base.cardinality
        self.p = base.p
        self.seed = seed
        self.zeta_seed = zeta_seed
        self.ext = ext if ext is not None else extend(base, n, seed=seed)
        self.coprime = gcd(self.q, n) == 1

    def __repr__(self):
        return f"FieldPair(q={self.q}, n={self.n}, ext={self.ext.describe()})"

    def _need_coprime(self):
        if not self.coprime:
            raise NotCoprime(f"gcd(q={self.q}, n={self.n}) != 1")

    @functools.cached_property
    def part(self):
        self._need_coprime()
        return q_classes(self.n, self.q)

    @functools.cached_property
    def zeta(self):
        self._need_coprime()
        return primitive_nth_root(self.n, self.base, self.zeta_seed)[1]

    @functools.cached_property
    def idem(self):
        return idempotents_from_root(self.part, self.zeta, self.base)

    def plan(self, criterion):
        return _plan_for(self, criterion)

    def element(self, value):
        return self.ext(value)

    def elements(self):
        return self.ext.elements()

    def applicable(self):
        return applicable_criteria(self.q, self.n)


def field_pair(q, n, seed=0, zeta_seed=0):
    """F_{q^n}/F_q with F_q = F_{p^m} built from ``seed``."""
    p, m = prime_power(q)
    base = make_field(p, m, seed)
    return FieldPair(base, n, seed=seed, zeta_seed=zeta_seed)


# -- plans ----------------------------------------------------------------------------

class _Plan:
    criterion = "?"

    def __init__(self, pair):
        self.pair = pair
        self.base = pair.base
        self.n = pair.n

    def conditions(self):
        raise NotImplementedError

    def verdict(self, alpha):
        raise NotImplementedError

    # helpers
    def _int(self, k):
        return self.base(k)

    def _tr(self, alpha, m=1):
        return rel_trace(alpha, m, self.base)

    def _pow_q(self, alpha, k):
        return frobenius(alpha, k % self.n, self.base)

    def _embed(self, c, alpha):
        return c if alpha.ctx is self.base else alpha.ctx.embed(c)

    def _qpoly(self, terms):
        return LinearizedPoly.from_terms(self.base, self.n, terms)

    def _check_alpha(self, alpha):
        if alpha.ctx.degree_over(self.base) != self.n:
            raise ValueError(f"element is not in F_(q^{self.n})")


class NewPlan(_Plan):
    """``E_i(alpha) != 0`` for all i, with ``E_i = phi(e_i)``."""

    criterion = "new"

    def __init__(self, pair, idem=None):
        super().__init__(pair)
        self.idem = idem if idem is not None else pair.idem
        self.qpolys = [phi(e, self.n) for e in self.idem.idempotents]

    def conditions(self):
        return [(f"E_{i + 1}", E) for i, E in enumerate(self.qpolys)]

    def verdict(self, alpha):
        vals = [lin_eval(E, alpha) for E in self.qpolys]
        return CriterionVerdict(self.criterion, True, all(not v.is_zero() for v in vals), {"E": vals})


class ClassicalPlan(_Plan):
    """``L_i(alpha) != 0`` for all i, ``L_i = phi((x^n - 1) / p_i)``."""

    criterion = "classical"

    def __init__(self, pair, zeta=None, part=None):
        super().__init__(pair)
        self.part = part if part is not None else pair.part
        zeta = zeta if zeta is not None else pair.zeta
        xn1 = x_pow_minus_one(self.base, self.n)
        self.min_polys = [orbit_min_poly(self.part, i, zeta, self.base) for i in range(self.part.r)]
        self.cofactors = []
        for pi in self.min_polys:
            li, rem = divmod(xn1, pi)
            if not rem.is_zero():
                raise ArithmeticError(f"{pi} does not divide x^n - 1")
            self.cofactors.append(li)
        self.qpolys = [phi(li, self.n) for li in self.cofactors]

    def conditions(self):
        return [(f"L_{i + 1}", L) for i, L in enumerate(self.qpolys)]

    def verdict(self, alpha, form=3):
        if form == 1:
            M = minimal_q_poly(alpha, self.base)
            return CriterionVerdict(self.criterion, True, M.is_full(), {"min_q_degree": M.degree, "form": 1})
        if form == 2:
            return self._verdict_all_divisors(alpha)
        vals = [lin_eval(L, alpha) for L in self.qpolys]
        return CriterionVerdict(self.criterion, True, all(not v.is_zero() for v in vals), {"L": vals})

    def _verdict_all_divisors(self, alpha, max_r=14):
        # every proper divisor m(x) of x^n - 1 is a product over a proper subset of the p_i
        r = len(self.min_polys)
        if r > max_r:
            raise ValueError(f"form 2 enumerates 2^r divisors; r = {r} is too large")
        one = Poly(self.base, [self.base.one])
        ok = True
        for mask in range((1 << r) - 1):
            m = one
            for i in range(r):
                if mask >> i & 1:
                    m = m * self.min_polys[i]
            if lin_eval(phi(m, self.n), alpha).is_zero():
                ok = False
                break
        return CriterionVerdict(self.criterion, True, ok, {"form": 2})


class PrimitivePrimePlan(_Plan):
    """n prime, q primitive mod n: NBG iff alpha not in F_q and Tr(alpha) != 0."""

    criterion = "thm4"

    def conditions(self):
        return [
            ("alpha^q - alpha", self._qpoly({1: 1, 0: -1})),
            ("Tr", LinearizedPoly.trace(self.base, self.n)),
        ]

    def verdict(self, alpha):
        in_base = subfield_member(alpha, 1, self.base)
        tr = self._tr(alpha)
        return CriterionVerdict(
            self.criterion, True, (not in_base) and not tr.is_zero(), {"Tr": tr, "in_Fq": in_base}
        )


class QuadraticResiduePlan(_Plan):
    """n an odd prime and ord_n(q) = (n-1)/2: quadratic-residue split."""

    criterion = "thm5"

    def __init__(self, pair, zeta=None):
        super().__init__(pair)
        n, base = self.n, self.base
        zeta = zeta if zeta is not None else pair.zeta
        self.l = (n - 1) // 2
        self.residues = [r for r in range(1, n) if legendre(r, n) == 1]
        self.nonresidues = [r for r in range(1, n) if legendre(r, n) == -1]
        self.nstar = legendre(-1, n) * n
        self.C = coerce_down(_power_sum(zeta, self.residues), base)
        self.B = coerce_down(_power_sum(zeta, self.nonresidues), base)
        self.odd = base.p != 2
        if self.odd:
            # B - C is a square root of n*; the criterion is symmetric in its sign
            self.sqrt_nstar = self.B - self.C
        else:
            if n % 8 in (1, 7):
                self.shifts = (base(0), base(1))
            else:
                self.shifts = _roots_of_x2_x_1(base)

    def witness_constants(self):
        return {"B": self.B, "C": self.C, "l": self.l, "n*": self.nstar}

    def conditions(self):
        n, base = self.n, self.base
        T = LinearizedPoly.trace(base, n)
        X = LinearizedPoly.identity(base, n)
        out = [("Tr", T)]
        if self.odd:
            G = self._qpoly({r: legendre(r, n) for r in range(1, n)})
            lhs = (n * X - T).scale(self.sqrt_nstar)
            out.append(("sqrt(n*)(n alpha - Tr) - n G", lhs - G.scale(base(n))))
            out.append(("sqrt(n*)(n alpha - Tr) + n G", lhs + G.scale(base(n))))
        else:
            A = self._qpoly({r: 1 for r in self.residues})
            for k, w in enumerate(self.shifts):
                out.append((f"A - (l Tr + w_{k}(Tr + alpha))", A - T.scale(base(self.l)) - (T + X).scale(w)))
        return out

    def verdict(self, alpha):
        self._check_alpha(alpha)
        n, base = self.n, self.base
        tr = self._tr(alpha)
        conj = {r: self._pow_q(alpha, r) for r in range(1, n)}
        wit = {"Tr": tr, **self.witness_constants()}
        ok = not tr.is_zero()
        if self.odd:
            G = alpha.ctx.zero_element
            for r in range(1, n):
                G = G + conj[r] * legendre(r, n)
            s = self._embed(self.sqrt_nstar, alpha)
            lhs = s * (alpha * n - tr)
            wit["G"] = G
            ok = ok and lhs != G * n and lhs != -(G * n)
        else:
            A = alpha.ctx.zero_element
            for r in self.residues:
                A = A + conj[r]
            wit["A"] = A
            lt = tr * self.l
            for w in self.shifts:
                ok = ok and A != lt + self._embed(w, alpha) * (tr + alpha)
        return CriterionVerdict(self.criterion, True, ok, wit)


class PeriodClassPlan(_Plan):
    """n prime with ord_n(q) = f, n - 1 = e f: Gauss periods of the e classes."""

    criterion = "thm6"

    def __init__(self, pair, zeta=None, g=None):
        super().__init__(pair)
        n, base, q = self.n, self.base, pair.q
        zeta = zeta if zeta is not None else pair.zeta
        self.f = mult_order(q, n)
        self.e = (n - 1) // self.f
        self.g = g if g is not None else smallest_period_generator(q, n)
        if not (is_primitive_root(self.g, n) and pow(self.g, self.e, n) == q % n):
            raise ValueError(f"g = {self.g} is not a generator with g^e = q mod {n}")
        e, f, g = self.e, self.f, self.g
        self.classes = [sorted({pow(g, i + e * j, n) for j in range(f)}) for i in range(e)]
        self.eps = [coerce_down(_power_sum(zeta, C), base) for C in self.classes]

    def conditions(self):
        base, e, n = self.base, self.e, self.n
        out = [("Tr", LinearizedPoly.trace(base, n))]
        sums = [self._qpoly({a: 1 for a in C}) for C in self.classes]
        for j in range(e):
            acc = LinearizedPoly.identity(base, n).scale(base(self.f))
            for i in range(e):
                acc = acc + sums[i].scale(self.eps[(i + j) % e])
            out.append((f"sum_i eps_(i+{j}) S_i + f alpha", acc))
        return out

    def verdict(self, alpha):
        self._check_alpha(alpha)
        e = self.e
        tr = self._tr(alpha)
        S = []
        for C in self.classes:
            s = alpha.ctx.zero_element
            for a in C:
                s = s + self._pow_q(alpha, a)
            S.append(s)
        ok = not tr.is_zero()
        lhs_all = []
        for j in range(e):
            lhs = alpha.ctx.zero_element
            for i in range(e):
                lhs = lhs + self._embed(self.eps[(i + j) % e], alpha) * S[i]
            lhs_all.append(lhs)
            ok = ok and lhs != -(alpha * self.f)
        wit = {"Tr": tr, "eps": self.eps, "S": S, "lhs": lhs_all, "g": self.g, "e": e, "f": self.f}
        return CriterionVerdict(self.criterion, True, ok, wit)


class TwoPrimePlan(_Plan):
    """n = p1 p2 with q primitive modulo both primes and gcd(p1-1, p2-1) = 2."""

    criterion = "thm7"
    VARIANTS = ("stated", "corrected")

    def __init__(self, pair, zeta=None, g=None, variant="stated"):
        super().__init__(pair)
        if variant not in self.VARIANTS:
            raise ValueError(f"variant must be one of {self.VARIANTS}")
        # "stated": the exclusions as originally stated, Tr != p1 Tr_p2, p2 Tr_p1 for odd q
        # and alpha outside F_{q^{p_i}} for even q.
        # "corrected": Tr != p_i Tr_{p_i} for either parity; these are the
        # idempotents of the two classes of multiples of p1 and of p2.
        self.variant = variant
        n, base, q = self.n, self.base, pair.q
        split = thm7_split(q, n)
        if split is None:
            raise NotApplicable(f"hypotheses of the two-prime criterion fail for q={q}, n={n}")
        zeta = zeta if zeta is not None else pair.zeta
        self.p1, self.p2 = split
        self.f = (self.p1 - 1) * (self.p2 - 1) // 2
        self.m1, self.m2 = (self.p1 - 1) // 2, (self.p2 - 1) // 2
        subgroup = {pow(q, r, n) for r in range(self.f)}
        self.g = g if g is not None else next(
            c for c in range(2, n) if gcd(c, n) == 1 and c not in subgroup
        )
        if gcd(self.g, n) != 1 or self.g % n in subgroup:
            raise ValueError(f"g = {self.g} must be a unit outside <q> mod {n}")
        self.class1 = [pow(q, r, n) for r in range(self.f)]
        self.classg = [self.g * pow(q, r, n) % n for r in range(self.f)]
        self.units = [r for r in range(1, n) if gcd(r, n) == 1]
        self.eps1 = coerce_down(_power_sum(zeta, self.class1), base)
        self.eps2 = coerce_down(_power_sum(zeta, self.classg), base)
        self.odd = base.p != 2
        if self.odd:
            if self.eps1 == self.eps2:
                raise EpsilonCollision(f"eps_1 = eps_2 = {self.eps1}")
            self.K = base(n) / (base(2) * (self.eps1 - self.eps2))

    def conditions(self):
        base, n = self.base, self.n
        p1, p2, m1, m2 = self.p1, self.p2, self.m1, self.m2
        T = LinearizedPoly.trace(base, n)
        T1 = LinearizedPoly.trace(base, n, p1)
        T2 = LinearizedPoly.trace(base, n, p2)
        X = LinearizedPoly.identity(base, n)
        S1 = self._qpoly({a: 1 for a in self.class1})
        Sg = self._qpoly({a: 1 for a in self.classg})
        if self.odd:
            U = self._qpoly({r: 1 for r in self.units})
            half = base(1) / base(2)
            lhs = X.scale(base(2 * m1 * m2)) + U.scale(half) - (T1 - X).scale(base(m1)) - (T2 - X).scale(base(m2))
            rhs = (S1 - Sg).scale(self.K)
            return [
                ("Tr", T),
                *self._trace_exclusions(T, T1, T2),
                ("lhs - K(S_1 - S_g)", lhs - rhs),
                ("lhs + K(S_1 - S_g)", lhs + rhs),
            ]
        core = (T1 + X).scale(base(m1)) + (T2 + X).scale(base(m2))
        if self.variant == "stated":
            sub = [
                ("alpha^(q^p1) - alpha", self._qpoly({p1: 1, 0: -1})),
                ("alpha^(q^p2) - alpha", self._qpoly({p2: 1, 0: -1})),
            ]
        else:
            sub = self._trace_exclusions(T, T1, T2)
        return [
            ("Tr", T),
            *sub,
            ("core - S_1", core - S1),
            ("core - S_g", core - Sg),
        ]

    def _trace_pairs(self, tr1, tr2):
        """``(label, coefficient, trace)`` for each excluded value ``coefficient * trace``."""
        p1, p2 = self.p1, self.p2
        if self.variant == "corrected":
            return [("p1 Tr_p1", p1, tr1), ("p2 Tr_p2", p2, tr2)]
        return [("p1 Tr_p2", p1, tr2), ("p2 Tr_p1", p2, tr1)]

    def _trace_exclusions(self, T, T1, T2):
        return [(f"Tr - {lab}", T - tk.scale(self.base(c))) for lab, c, tk in self._trace_pairs(T1, T2)]

    def _traces_ok(self, tr, tr1, tr2):
        return all(tr != tk * c for _, c, tk in self._trace_pairs(tr1, tr2))

    def _sum_q(self, alpha, exps):
        s = alpha.ctx.zero_element
        for a in exps:
            s = s + self._pow_q(alpha, a)
        return s

    def verdict(self, alpha, reading="class"):
        """``reading`` selects how the odd-q sums are read: over class members
        (``alpha^{q^a}``, a in the class) or literally (``alpha^{q^r}`` and
        ``alpha^{g q^r}`` for r < f)."""
        self._check_alpha(alpha)
        base, n = self.base, self.n
        p1, p2, m1, m2 = self.p1, self.p2, self.m1, self.m2
        tr = self._tr(alpha)
        tr1 = self._tr(alpha, p1)
        tr2 = self._tr(alpha, p2)
        S1 = self._sum_q(alpha, self.class1)
        Sg = self._sum_q(alpha, self.classg)
        wit = {
            "Tr": tr, "Tr_p1": tr1, "Tr_p2": tr2, "S_1": S1, "S_g": Sg,
            "eps_1": self.eps1, "eps_2": self.eps2, "g": self.g, "f": self.f,
            "m_1": m1, "m_2": m2, "reading": reading, "variant": self.variant,
        }
        if self.odd:
            lit1 = self._sum_q(alpha, range(self.f))
            litg = alpha.ctx.zero_element
            for r in range(self.f):
                litg = litg + self._pow_q(alpha, r) ** self.g
            wit["S_1_literal"], wit["S_g_literal"] = lit1, litg
            U = self._sum_q(alpha, self.units)
            half = self._embed(base(1) / base(2), alpha)
            lhs = alpha * (2 * m1 * m2) + half * U - (tr1 - alpha) * m1 - (tr2 - alpha) * m2
            diff = (S1 - Sg) if reading == "class" else (lit1 - litg)
            rhs = self._embed(self.K, alpha) * diff
            ok = (
                not tr.is_zero()
                and self._traces_ok(tr, tr1, tr2)
                and lhs != rhs
                and lhs != -rhs
            )
            wit["lhs"], wit["rhs"] = lhs, rhs
        else:
            core = (tr1 + alpha) * m1 + (tr2 + alpha) * m2
            if self.variant == "stated":
                sub_ok = not subfield_member(alpha, p1, base) and not subfield_member(alpha, p2, base)
            else:
                sub_ok = self._traces_ok(tr, tr1, tr2)
            ok = not tr.is_zero() and sub_ok and core != S1 and core != Sg
            wit["core"] = core
        return CriterionVerdict(self.criterion, True, ok, wit)


class PrimePowerPlan(_Plan):
    """n a power of p: NBG iff Tr(alpha) != 0."""

    criterion = "corollary"

    def conditions(self):
        return [("Tr", LinearizedPoly.trace(self.base, self.n))]

    def verdict(self, alpha):
        tr = self._tr(alpha)
        return CriterionVerdict(self.criterion, True, not tr.is_zero(), {"Tr": tr})


class OraclePlan(_Plan):
    criterion = "oracle"

    def verdict(self, alpha):
        rank = conjugate_rank(alpha, self.base)
        return CriterionVerdict(self.criterion, True, rank == self.n, {"rank": rank})


class ReducePlan(_Plan):
    """p | n: test ``Tr^n_l(alpha)`` in F_{q^l} with the idempotent criterion."""

    criterion = "reduce_thm8"

    def __init__(self, pair):
        super().__init__(pair)
        if pair.n % pair.p:
            raise NotApplicable(f"p = {pair.p} does not divide n = {pair.n}")
        self.embedding = subfield_embedding(pair.ext, pair.base, coprime_part(pair.n, pair.p))
        self.l = self.embedding.l
        self.sub_pair = FieldPair(pair.base, self.l, ext=self.embedding.sub, zeta_seed=pair.zeta_seed)
        self.sub_plan = NewPlan(self.sub_pair)

    def reduce(self, alpha):
        return self.embedding.reduce(alpha)

    def verdict(self, alpha):
        beta = self.reduce(alpha)
        inner = self.sub_plan.verdict(beta)
        return CriterionVerdict(self.criterion, True, inner.is_nbg, {"l": self.l, "beta": beta, "E": inner.witnesses["E"]})


_PLANS = {
    "oracle": OraclePlan,
    "new": NewPlan,
    "classical": ClassicalPlan,
    "thm4": PrimitivePrimePlan,
    "thm5": QuadraticResiduePlan,
    "thm6": PeriodClassPlan,
    "thm7": TwoPrimePlan,
    "reduce_thm8": ReducePlan,
    "corollary": PrimePowerPlan,
}


def _plan_for(pair, criterion):
    cache = pair.__dict__.setdefault("_plans", {})
    if criterion not in cache:
        if criterion not in _PLANS:
            raise ValueError(f"unknown criterion {criterion!r}")
        if criterion not in applicable_criteria(pair.q, pair.n):
            raise NotApplicable(f"{criterion} does not apply to q={pair.q}, n={pair.n}")
        cache[criterion] = _PLANS[criterion](pair)
    return cache[criterion]


def evaluate(pair, alpha, criteria=None):
    """Verdicts of the requested criteria (default: all applicable) for ``alpha``.

    Requested criteria whose hypotheses fail come back with ``applicable=False``.
    """
    wanted = list(criteria) if criteria is not None else pair.applicable()
    usable = set(pair.applicable())
    out = {}
    for cid in wanted:
        if cid not in usable:
            out[cid] = inapplicable(cid, f"hypotheses fail for q={pair.q}, n={pair.n}")
        else:
            out[cid] = pair.plan(cid).verdict(alpha)
    return out


# -- helpers ---------------------------------------------------------------------------

def _power_sum(zeta, exps):
    s = zeta.ctx.zero_element
    for a in exps:
        s = s + zeta**a
    return s


def _roots_of_x2_x_1(base):
    roots = [w for w in base.elements() if (w * w + w + 1).is_zero()]
    if len(roots) != 2:
        raise ValueError(f"x^2 + x + 1 does not split over {base}")
    return tuple(roots)


def smallest_period_generator(q, n):
    """Smallest g generating (Z/nZ)* with g^e = q mod n, e = (n-1)/ord_n(q)."""
    e = (n - 1) // mult_order(q, n)
    for g in range(1, n):
        if is_primitive_root(g, n) and pow(g, e, n) == q % n:
            return g
    raise NoGenerator(f"no generator g of (Z/{n})* with g^{e} = {q}")


def coprime_part(n, p):
    while n % p == 0:
        n //= p
    return n


# -- subfield realization for the p | n reduction -----------------------------------

class SubfieldEmbedding:
    """F_{q^l} realized as its own context, embedded in F_{q^n} via ``t -> gamma``.

    ``gamma`` generates the degree-l subfield of F_{q^n}; the new context uses
    the minimal polynomial of ``gamma`` over F_q as its modulus.
    """

    def __init__(self, ext, base, l, seed=0):
        import random

        self.ext, self.base, self.l = ext, base, l
        self.n = ext.degree_over(base)
        if self.n % l:
            raise ValueError(f"{l} does not divide {self.n}")
        if l == 1:
            self.sub = base
            self.gamma = ext.embed(base.one_element) if ext is not base else base.one_element
            return
        rng = random.Random(f"subfield:{seed}")
        ells = [d for d in factorize(l)]
        for _ in range(1000):
            a = ext.random_element(rng)
            gamma = rel_trace(a, l, base)
            if all(not subfield_member(gamma, l // ell, base) for ell in ells):
                break
        else:
            raise RuntimeError("no generator of the subfield found")
        self.gamma = gamma
        conj = [frobenius(gamma, i, base) for i in range(l)]
        prod = Poly(ext, [ext.one])
        for c in conj:
            prod = prod * Poly(ext, [-c, ext.one_element])
        modulus = Poly(base, [coerce_down(c, base) for c in prod.coeffs])
        self.sub = extend(base, l, modulus=modulus)
        # F_q-coordinates of gamma^j, j < l, used to solve for coordinates
        powers = [ext.one_element]
        for _ in range(l - 1):
            powers.append(powers[-1] * gamma)
        self._solver = _LinearSolver(base, [fq_coords(pw, base) for pw in powers])

    def lift(self, b):
        """Image of ``b`` in F_{q^l} under the embedding into F_{q^n}."""
        if self.l == 1:
            return b if self.ext is self.base else self.ext.embed(b)
        acc = self.ext.zero_element
        pw = self.ext.one_element
        for c in b.coords:
            acc = acc + pw.scale(c)
            pw = pw * self.gamma
        return acc

    def restrict(self, a):
        """Inverse of :meth:`lift` on the degree-l subfield of F_{q^n}."""
        if self.l == 1:
            return coerce_down(a, self.base)
        coeffs = self._solver.solve(fq_coords(a, self.base))
        return FFElement(self.sub, tuple(coeffs))

    def reduce(self, alpha):
        return self.restrict(rel_trace(alpha, self.l, self.base))


class _LinearSolver:
    """Solve ``sum_j c_j v_j = w`` over a field for fixed independent vectors ``v_j``."""

    def __init__(self, ctx, vectors):
        self.ctx = ctx
        k = len(vectors)
        dim = len(vectors[0])
        # rows of the augmented system: column j is vector j
        B = ctx
        rows = [[vectors[j][i] for j in range(k)] + [B.one if t == i else B.zero for t in range(dim)] for i in range(dim)]
        pivots = []
        r = 0
        for col in range(k):
            piv = next((i for i in range(r, dim) if not B.riszero(rows[i][col])), None)
            if piv is None:
                raise ValueError("vectors are dependent")
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = B.rinv(rows[r][col])
            rows[r] = [B.rmul(inv, v) for v in rows[r]]
            for i in range(dim):
                if i != r and not B.riszero(rows[i][col]):
                    f = rows[i][col]
                    rows[i] = [B.rsub(v, B.rmul(f, w)) for v, w in zip(rows[i], rows[r])]
            pivots.append(col)
            r += 1
        self.k = k
        self.transform = [row[k:] for row in rows[:k]]
        self.check = [row[k:] for row in rows[k:]]

    def solve(self, w):
        B = self.ctx

        def dot(row):
            acc = B.zero
            for a, b in zip(row, w):
                acc = B.radd(acc, B.rmul(a, b))
            return acc

        if any(not B.riszero(dot(row)) for row in self.check):
            raise ValueError("vector is not in the span")
        return [dot(row) for row in self.transform]


@functools.lru_cache(maxsize=None)
def subfield_embedding(ext, base, l):
    return SubfieldEmbedding(ext, base, l)


def reduce_p_dividing_n(alpha, base=None):
    """Return ``(beta, l)``: ``beta = Tr^n_l(alpha)`` realized in its own F_{q^l}."""
    base = _default_base(alpha, base)
    n = alpha.ctx.degree_over(base)
    p = base.p
    if n % p:
        raise NotApplicable(f"p = {p} does not divide n = {n}")
    l = coprime_part(n, p)
    emb = subfield_embedding(alpha.ctx, base, l)
    return emb.reduce(alpha), l


# -- entry points by criterion id -----------------------------------------------------------

def _pair_for(alpha, base, zeta=None):
    base = _default_base(alpha, base)
    n = alpha.ctx.degree_over(base)
    return _cached_pair(alpha.ctx, base, n, zeta)


@functools.lru_cache(maxsize=64)
def _cached_pair(ext, base, n, zeta):
    pair = FieldPair(base, n, ext=ext)
    if zeta is not None:
        pair.__dict__["zeta"] = zeta
    return pair


def nbg_new(alpha, idem=None, base=None):
    pair = _pair_for(alpha, base if base is not None else (idem.base if idem else None))
    pair._need_coprime()
    return NewPlan(pair, idem).verdict(alpha) if idem is not None else pair.plan("new").verdict(alpha)


def nbg_classical(alpha, part=None, zeta=None, base=None, form=3):
    pair = _pair_for(alpha, base, zeta)
    pair._need_coprime()
    return ClassicalPlan(pair, zeta, part).verdict(alpha, form=form)


def _closed_form(cid, applies, cls, alpha, zeta, base, **kw):
    pair = _pair_for(alpha, base, zeta)
    if not applies(pair.q, pair.n):
        return inapplicable(cid, f"hypotheses fail for q={pair.q}, n={pair.n}")
    if kw.get("g") is None:
        return pair.plan(cid).verdict(alpha)
    return cls(pair, zeta, **kw).verdict(alpha)


def nbg_thm4(alpha, base=None):
    pair = _pair_for(alpha, base)
    if not thm4_applies(pair.q, pair.n):
        return inapplicable("thm4", f"hypotheses fail for q={pair.q}, n={pair.n}")
    return pair.plan("thm4").verdict(alpha)


def nbg_thm5(alpha, zeta=None, base=None):
    return _closed_form("thm5", thm5_applies, QuadraticResiduePlan, alpha, zeta, base)


def nbg_thm6(alpha, zeta=None, g=None, base=None):
    return _closed_form("thm6", thm6_applies, PeriodClassPlan, alpha, zeta, base, g=g)


def nbg_thm7(alpha, zeta=None, g=None, base=None, reading="class", variant="stated"):
    pair = _pair_for(alpha, base, zeta)
    if thm7_split(pair.q, pair.n) is None:
        return inapplicable("thm7", f"hypotheses fail for q={pair.q}, n={pair.n}")
    if g is None and variant == "stated":
        plan = pair.plan("thm7")
    else:
        plan = TwoPrimePlan(pair, zeta, g=g, variant=variant)
    return plan.verdict(alpha, reading=reading)

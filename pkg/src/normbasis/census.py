"""Enumeration, random search and density tables of normal basis generators."""

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod

import numpy as np

from .criteria import TwoPrimePlan, applicable_criteria, coprime_part, evaluate, field_pair, nbg_oracle
from .errors import BoundExceeded, Disagreement, NotApplicable, SearchExhausted
from .ntheory import prime_power
from .poly import q_classes
from .sweep import BatchEvaluator, sweep

SCHEMA_VERSION = 1
DEFAULT_BOUND = 2**20
LIST_BOUND = 2**12


def expected_nbg_count(q, n):
    """Closed-form NBG count: prod (q^{d_i} - 1) over q-classes of Z_l, times q^{n-l}.

    Here n = p^t l with gcd(l, p) = 1; for coprime (q, n), l = n.
    """
    l = coprime_part(n, prime_power(q)[0])
    return prod(q**d - 1 for d in q_classes(l, q).sizes) * q ** (n - l)


def _check_bound(q, n, bound):
    if q**n > bound:
        raise BoundExceeded(f"q^n = {q}^{n} exceeds the enumeration bound {bound}")


@dataclass
class Enumeration:
    count: int
    elements: list = None


def enumerate_nbg(q, n, criterion="oracle", seed=0, zeta_seed=0, bound=DEFAULT_BOUND, workers=1, pair=None):
    """Count (and for small fields list) the elements accepted by ``criterion``."""
    _check_bound(q, n, bound)
    pair = pair or field_pair(q, n, seed, zeta_seed)
    if criterion not in applicable_criteria(q, n):
        raise NotApplicable(f"{criterion} does not apply to q={q}, n={n}")
    ev = BatchEvaluator(pair)
    res = sweep(pair, [criterion], workers=workers, evaluator=ev)
    elements = None
    if q**n <= LIST_BOUND:
        X = ev.model.vectors(0, q**n)
        hits = np.flatnonzero(ev.verdicts(X, criterion))
        elements = [pair.ext.from_index(int(k)) for k in hits]
    return Enumeration(res.counts[criterion], elements)


def cheapest_criterion(q, n):
    ids = applicable_criteria(q, n)
    for cid in ("corollary", "thm4", "new", "reduce_thm8"):
        if cid in ids:
            return cid
    return "oracle"


def random_nbg(q, n, seed=0, max_tries=None, field_seed=0, zeta_seed=0, pair=None):
    """Rejection-sample an NBG with the cheapest applicable criterion, then confirm by rank."""
    pair = pair or field_pair(q, n, field_seed, zeta_seed)
    tries = max_tries if max_tries is not None else 64 * n
    rng = random.Random(seed)
    cid = cheapest_criterion(q, n)
    plan = pair.plan(cid) if cid != "oracle" else None
    for _ in range(tries):
        a = pair.ext.random_element(rng, nonzero=True)
        ok = plan.verdict(a).is_nbg if plan is not None else nbg_oracle(a, pair.base)
        if ok:
            if not nbg_oracle(a, pair.base):
                raise Disagreement(f"{cid} accepted a non-generator", a.to_list(), {cid: True, "oracle": False}, q, n)
            return a
    raise SearchExhausted(f"no NBG of F_{q}^{n} found in {tries} tries")


@dataclass
class CensusRow:
    q: int
    n: int
    coprime: bool
    r: int
    nbg_count: int
    field_size: int
    density: Fraction
    criteria_used: list
    expected_count: int
    base_modulus: str = ""
    ext_modulus: str = ""
    elapsed: float = field(default=0.0, compare=False)

    def to_json(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "q": self.q,
            "n": self.n,
            "coprime": self.coprime,
            "r": self.r,
            "nbg_count": self.nbg_count,
            "field_size": self.field_size,
            "density": [self.density.numerator, self.density.denominator],
            "criteria_used": list(self.criteria_used),
            "expected_count": self.expected_count,
            "base_modulus": self.base_modulus,
            "ext_modulus": self.ext_modulus,
        }


def resolve_policy(policy, q, n):
    """``"all"`` (every applicable criterion), ``"oracle"``, or an explicit list (filtered)."""
    ids = applicable_criteria(q, n)
    if policy == "all":
        return ids
    if policy == "oracle":
        return ["oracle"]
    wanted = [policy] if isinstance(policy, str) else list(policy)
    out = ["oracle"] + [c for c in ids if c in wanted and c != "oracle"]
    return out


def census_row(q, n, policy="all", seed=0, zeta_seed=0, bound=DEFAULT_BOUND, workers=1, thm7_variant="stated"):
    _check_bound(q, n, bound)
    t0 = time.perf_counter()
    pair = field_pair(q, n, seed, zeta_seed)
    ids = resolve_policy(policy, q, n)
    plans = {}
    if "thm7" in ids and thm7_variant != "stated":
        plans["thm7"] = TwoPrimePlan(pair, variant=thm7_variant)
    ev = BatchEvaluator(pair, plans)
    res = sweep(pair, ids, workers=workers, evaluator=ev)
    if not res.unanimous:
        alpha = pair.ext.from_index(res.first_disagreement)
        scalar = {cid: v.to_json() for cid, v in evaluate(pair, alpha, ids).items()}
        if "thm7" in plans:
            scalar["thm7"] = plans["thm7"].verdict(alpha).to_json()
        raise Disagreement(
            f"criteria disagree on {res.disagreements} of {res.size} elements of F_{q}^{n}",
            alpha.to_list(),
            scalar,
            q,
            n,
        )
    count = res.counts["oracle"]
    l = coprime_part(n, pair.p)
    return CensusRow(
        q=q,
        n=n,
        coprime=gcd(q, n) == 1,
        r=q_classes(l, q).r,
        nbg_count=count,
        field_size=q**n,
        density=Fraction(count, q**n),
        criteria_used=ids,
        expected_count=expected_nbg_count(q, n),
        base_modulus=pair.base.describe(),
        ext_modulus=pair.ext.describe(),
        elapsed=time.perf_counter() - t0,
    )


def census(qs, ns, policy="all", seed=0, zeta_seed=0, bound=DEFAULT_BOUND, workers=1, thm7_variant="stated"):
    """One row per ``(q, n)``; aborts with :class:`Disagreement` if criteria ever differ."""
    return [
        census_row(q, n, policy, seed, zeta_seed, bound, workers, thm7_variant)
        for q in qs
        for n in ns
    ]


TABLE_COLUMNS = ("q", "n", "coprime", "r", "nbg_count", "field_size", "density", "criteria_used")


def format_table(rows):
    """Aligned plain-text table of census rows."""
    cells = [list(TABLE_COLUMNS)]
    for row in rows:
        d = row.density
        cells.append(
            [
                str(row.q),
                str(row.n),
                "yes" if row.coprime else "no",
                str(row.r),
                str(row.nbg_count),
                str(row.field_size),
                f"{d.numerator}/{d.denominator}",
                ",".join(row.criteria_used),
            ]
        )
    widths = [max(len(r[i]) for r in cells) for i in range(len(TABLE_COLUMNS))]
    lines = []
    for r in cells:
        lines.append("  ".join(c.rjust(w) if i < 7 else c for i, (c, w) in enumerate(zip(r, widths))).rstrip())
    return "\n".join(lines) + "\n"

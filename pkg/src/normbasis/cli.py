"""Command-line interface: ``normbasis <command> [options]``.

Exit status: 0 on success, 1 on a usage or input error, 2 when criteria
disagree or an internal invariant fails (the witness goes to stderr as JSON).
"""

import argparse
import json
import os
import sys
import time

from . import __version__
from .census import census, format_table, random_nbg
from .criteria import (
    CRITERIA_ORDER,
    TwoPrimePlan,
    applicable_criteria,
    evaluate,
    field_pair,
)
from .errors import Disagreement, NoGenerator, NormalBasisError, SearchExhausted, Singular
from .idempotents import verify_idempotents
from .ntheory import prime_power
from .poly import format_poly, orbit_min_poly, q_classes
from .sweep import sweep

SCHEMA_VERSION = 1
SEED_ENV = "NORMBASIS_SEED"

GRAMMAR = """\
fields:    --q Q (a prime power) or --p P [--m M]; or --field "p=P,m=M[,seed=S]"
degree:    --n N            (census: --n 1..6 or --n 1,3,5)
elements:  --elem 1,0,1     flat F_p coordinates, lowest power first
           --elem '[[1,0],[0,1]]'   JSON list of F_q coordinates (each a list when m > 1)
seeds:     --seed S (field moduli), --zeta-seed Z (root of unity); default from $NORMBASIS_SEED or 0
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- argument helpers ---------------------------------------------------------------

def _int_list(text):
    """Parse ``"1..6"``, ``"1,3,5"`` or a mix such as ``"1..3,7"``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _resolve_q(args):
    """Return ``(p, m, seed)`` from --field, --q or --p/--m."""
    seed = args.seed
    if getattr(args, "field", None):
        from .field_tower import parse_field_spec

        spec = parse_field_spec(args.field)
        return spec["p"], spec["m"], spec["seed"] if "seed=" in args.field else seed
    if getattr(args, "q", None):
        try:
            p, m = prime_power(args.q)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        return p, m, seed
    if getattr(args, "p", None):
        return args.p, args.m or 1, seed
    raise UsageError("a base field is required: --q, --p/--m or --field")


def _pair(args):
    p, m, seed = _resolve_q(args)
    if args.n is None:
        raise UsageError("--n is required")
    if args.n < 1:
        raise UsageError("--n must be positive")
    return field_pair(p**m, args.n, seed=seed, zeta_seed=args.zeta_seed), seed


def _header(pair, seed, zeta_seed):
    return {
        "q": pair.q,
        "n": pair.n,
        "seed": seed,
        "zeta_seed": zeta_seed,
        "base_field": pair.base.describe(),
        "extension": pair.ext.describe(),
    }


def _parse_element(pair, text):
    ext = pair.ext
    text = text.strip()
    try:
        if text.startswith("["):
            return ext(json.loads(text))
        digits = [int(x) for x in text.split(",") if x.strip()]
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad element {text!r}: {exc}") from None
    if len(digits) > ext.flat_degree:
        raise UsageError(f"element has {len(digits)} coordinates, field has {ext.flat_degree}")
    digits += [0] * (ext.flat_degree - len(digits))
    if any(not 0 <= d < pair.p for d in digits):
        raise UsageError(f"coordinates must lie in 0..{pair.p - 1}")
    return ext.element(ext.raw_from_flat(digits))


def _emit(args, payload, text):
    if args.format == "json":
        print(json.dumps(payload, sort_keys=False))
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# -- commands -------------------------------------------------------------------------

def cmd_classes(args):
    p, m, _ = _resolve_q(args)
    q = p**m
    part = q_classes(args.n, q)
    payload = {"schema_version": SCHEMA_VERSION, "header": {"q": q, "n": args.n}, **part.to_json()}
    lines = [f"# q-classes of Z_{args.n} under multiplication by {q}"]
    lines += [f"S_{i + 1} = {{{', '.join(map(str, c.members))}}}" for i, c in enumerate(part.classes)]
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_idempotents(args):
    pair, seed = _pair(args)
    idem = pair.idem
    report = verify_idempotents(idem)
    if not report.ok:
        _dump_failure({"error": "IdempotentCheckFailed", "failures": report.failures, "q": pair.q, "n": pair.n})
        return 2
    payload = {
        **idem.to_json(),
        "header": _header(pair, seed, args.zeta_seed),
        "zeta_field": idem.zeta.ctx.describe(),
        "zeta": idem.zeta.to_list(),
        "checks": report.checks,
    }
    lines = [f"# {pair.ext.describe()} over {pair.base.describe()}"]
    lines.append(f"M     = {idem.matrix.to_list()}")
    lines.append(f"M^-1  = {idem.matrix_inv.to_list()}")
    for i, e in enumerate(idem.idempotents):
        lines.append(f"e_{i + 1}(x) = {format_poly(e)}")
    lines.append("checks: " + ", ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in report.checks.items()))
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_factor(args):
    pair, seed = _pair(args)
    part, zeta = pair.part, pair.zeta
    factors = [orbit_min_poly(part, i, zeta, pair.base) for i in range(part.r)]
    payload = {
        "schema_version": SCHEMA_VERSION,
        "header": _header(pair, seed, args.zeta_seed),
        "classes": [list(c.members) for c in part.classes],
        "factors": [[f.ctx.to_list(c) for c in f.raw_coeffs] for f in factors],
        "factors_text": [format_poly(f) for f in factors],
    }
    lines = [f"# x^{pair.n} - 1 over {pair.base.describe()}"]
    lines += [f"p_{i + 1}(x) = {format_poly(f)}" for i, f in enumerate(factors)]
    _emit(args, payload, "\n".join(lines))
    return 0


def _thm7_override(pair, args, ids):
    if "thm7" in ids and args.thm7_variant != "stated":
        return {"thm7": TwoPrimePlan(pair, variant=args.thm7_variant)}
    return {}


def cmd_test(args):
    pair, seed = _pair(args)
    alpha = _parse_element(pair, args.elem)
    ids = applicable_criteria(pair.q, pair.n)
    if args.criterion:
        wanted = [args.criterion]
    elif args.all:
        wanted = list(ids)
    else:
        wanted = ["new"] if "new" in ids else ["reduce_thm8"]
    verdicts = evaluate(pair, alpha, wanted)
    for cid, plan in _thm7_override(pair, args, wanted).items():
        verdicts[cid] = plan.verdict(alpha)
    applicable = {k: v.is_nbg for k, v in verdicts.items() if v.applicable}
    unanimous = len(set(applicable.values())) <= 1
    payload = {
        "schema_version": SCHEMA_VERSION,
        "header": _header(pair, seed, args.zeta_seed),
        "element": alpha.to_list(),
        "applicable_criteria": ids,
        "verdicts": [v.to_json() for v in verdicts.values()],
        "unanimous": unanimous,
    }
    lines = [f"# {pair.ext.describe()} over {pair.base.describe()}", f"element: {alpha.to_list()}"]
    for cid, v in verdicts.items():
        state = "n/a" if not v.applicable else ("NBG" if v.is_nbg else "not NBG")
        lines.append(f"{cid:12s} {state}")
    _emit(args, payload, "\n".join(lines))
    if not unanimous:
        _dump_failure(Disagreement("criteria disagree", alpha.to_list(), applicable, pair.q, pair.n).to_json())
        return 2
    return 0


def cmd_search(args):
    pair, seed = _pair(args)
    alpha = random_nbg(pair.q, pair.n, seed=args.search_seed, max_tries=args.max_tries, pair=pair)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "header": _header(pair, seed, args.zeta_seed),
        "search_seed": args.search_seed,
        "element": alpha.to_list(),
        "flat": list(alpha.flat()),
    }
    text = f"# {pair.ext.describe()} over {pair.base.describe()}\nNBG: {alpha.to_list()}"
    _emit(args, payload, text)
    return 0


def cmd_census(args):
    qs = _int_list(args.q_list)
    ns = _int_list(args.n_list)
    policy = args.policy if args.policy in ("all", "oracle") else args.policy.split(",")
    t0 = time.perf_counter()
    rows = census(
        qs, ns, policy=policy, seed=args.seed, zeta_seed=args.zeta_seed,
        bound=args.bound, workers=args.workers, thm7_variant=args.thm7_variant,
    )
    if args.format == "json":
        for row in rows:
            print(json.dumps(row.to_json()))
    else:
        sys.stdout.write(format_table(rows))
    if args.timing:
        print(f"elapsed {time.perf_counter() - t0:.3f}s", file=sys.stderr)
    return 0


def cmd_verify(args):
    pair, seed = _pair(args)
    ids = applicable_criteria(pair.q, pair.n)
    if pair.q**pair.n > args.bound:
        raise UsageError(f"q^n = {pair.q ** pair.n} exceeds --bound {args.bound}")
    checks = {}
    if pair.coprime:
        checks.update(verify_idempotents(pair.idem).checks)
    res = sweep(pair, ids, workers=args.workers, plans=_thm7_override(pair, args, ids))
    from .census import expected_nbg_count

    expected = expected_nbg_count(pair.q, pair.n)
    checks["unanimous"] = res.unanimous
    checks["count_formula"] = res.counts["oracle"] == expected
    payload = {
        "schema_version": SCHEMA_VERSION,
        "header": _header(pair, seed, args.zeta_seed),
        "criteria": ids,
        "field_size": res.size,
        "counts": res.counts,
        "expected_count": expected,
        "disagreements": res.disagreements,
        "checks": checks,
        "ok": all(checks.values()),
    }
    lines = [f"# {pair.ext.describe()} over {pair.base.describe()}", f"elements: {res.size}"]
    lines += [f"{cid:12s} {res.counts[cid]}" for cid in ids]
    lines += [f"{k}: {'ok' if v else 'FAIL'}" for k, v in checks.items()]
    _emit(args, payload, "\n".join(lines))
    if not res.unanimous:
        alpha = pair.ext.from_index(res.first_disagreement)
        _dump_failure(Disagreement(
            f"{res.disagreements} disagreements", alpha.to_list(), res.verdicts_at_first, pair.q, pair.n
        ).to_json())
        return 2
    if not payload["ok"]:
        _dump_failure({"error": "InvariantFailed", "checks": checks, "q": pair.q, "n": pair.n})
        return 2
    return 0


def _dump_failure(obj):
    print(json.dumps(obj), file=sys.stderr)


# -- parser -----------------------------------------------------------------------------

def _default_seed():
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"${SEED_ENV} must be an integer, got {raw!r}") from None


def build_parser():
    seed = _default_seed()
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=seed, help="seed for the field moduli")
    common.add_argument("--zeta-seed", type=int, default=seed, help="seed for the root of unity")

    fieldopts = _Parser(add_help=False)
    fieldopts.add_argument("--q", type=int)
    fieldopts.add_argument("--p", type=int)
    fieldopts.add_argument("--m", type=int)
    fieldopts.add_argument("--field", help='"p=<int>,m=<int>[,seed=<int>]"')
    fieldopts.add_argument("--n", type=int)

    thm7 = _Parser(add_help=False)
    thm7.add_argument("--thm7-variant", choices=TwoPrimePlan.VARIANTS, default="stated")

    parser = _Parser(
        prog="normbasis",
        description="Normal basis generator criteria over finite fields.",
        epilog=GRAMMAR,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("classes", parents=[common, fieldopts], help="q-classes of Z_n")
    p.set_defaults(func=cmd_classes)
    p = sub.add_parser("idempotents", parents=[common, fieldopts], help="Gauss-period matrix and idempotents")
    p.set_defaults(func=cmd_idempotents)
    p = sub.add_parser("factor", parents=[common, fieldopts], help="x^n - 1 from root orbits")
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("test", parents=[common, fieldopts, thm7], help="verdicts for one element")
    p.add_argument("--elem", required=True)
    p.add_argument("--all", action="store_true", help="run every applicable criterion")
    p.add_argument("--criterion", choices=CRITERIA_ORDER)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("search", parents=[common, fieldopts], help="random NBG")
    p.add_argument("--search-seed", type=int, default=seed)
    p.add_argument("--max-tries", type=int)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("census", parents=[common, thm7], help="NBG counts over a grid")
    p.add_argument("--q", dest="q_list", required=True, help="e.g. 2 or 2,3,4")
    p.add_argument("--n", dest="n_list", required=True, help="e.g. 1..6")
    p.add_argument("--policy", default="all", help="all, oracle, or a comma list of criterion ids")
    p.add_argument("--bound", type=int, default=2**20)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="print elapsed time to stderr")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("verify", parents=[common, fieldopts, thm7], help="exhaustive cross-validation")
    p.add_argument("--bound", type=int, default=2**20)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv=None):
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            raise UsageError("a command is required")
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}\n\n{GRAMMAR}", file=sys.stderr)
        return 1
    except Disagreement as exc:
        _dump_failure(exc.to_json())
        return 2
    except (Singular, NoGenerator, SearchExhausted) as exc:
        _dump_failure({"error": type(exc).__name__, "message": str(exc)})
        return 2
    except NormalBasisError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command-line front end: ``cyclefrac <command> ...``.

Exit status is 0 on success, 1 when a verification fails and 2 for usage
errors (bad arguments, unknown identity, malformed permutation, size cap).
"""
from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Callable, Sequence

from . import families, permstat, verifier
from .families import LAMBDA, CapExceededError, Family
from .polyring import Polynomial, VarId, parse_polynomial, parse_var

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _poly_json(p) -> dict:
    p = Polynomial.coerce(p)
    return {
        "text": str(p),
        "terms": [{"monomial": str(m), "coefficient": str(c)} for m, c in p.sorted_terms()],
    }


def _parse_settings(items: Sequence[str]) -> Callable[[VarId], Polynomial] | None:
    """``--set`` values as a substitution; ``all=V`` covers every variable but lambda."""
    if not items:
        return None
    explicit: dict[VarId, Polynomial] = {}
    default: Polynomial | None = None
    for item in items:
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--set expects var=value, got {item!r}")
        try:
            image = parse_polynomial(value)
        except ValueError as exc:
            raise UsageError(f"bad value in --set {item!r}: {exc}") from None
        if name.strip() == "all":
            default = image
            continue
        try:
            v = parse_var(name)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if v == LAMBDA:
            raise UsageError("set lambda with --lambda, not --set")
        explicit[v] = image

    def mapping(v: VarId) -> Polynomial:
        if v in explicit:
            return explicit[v]
        if default is not None and v != LAMBDA:
            return default
        raise KeyError(v)

    return mapping


def _parse_lambda(text: str):
    if text == "symbolic":
        return None
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"--lambda must be an integer or 'symbolic', got {text!r}") from None


def _family_kind(text: str) -> str:
    if text not in families.KINDS:
        raise UsageError(f"unknown family {text!r}; expected one of {', '.join(families.KINDS)}")
    return text


def _scheme(text: str) -> str:
    if text not in families.SCHEMES:
        raise UsageError(f"unknown scheme {text!r}; available: {', '.join(families.SCHEMES)}")
    return text


# ---------------------------------------------------------------------------
# Commands


def cmd_stats(args) -> int:
    try:
        p = permstat.Permutation.parse(args.perm)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    row = {"word": str(p), "cycles": p.cycle_notation()}
    row.update(permstat.profile(p).as_dict())
    row["lemma_1_1"] = permstat.check_lemma_1_1(p)
    row["inv_formula"] = permstat.check_inv_formula(p)
    if args.json:
        print(_dump(row))
    elif args.tsv:
        print("\t".join(row))
        print("\t".join(str(v).lower() if isinstance(v, bool) else str(v) for v in row.values()))
    else:
        width = max(map(len, row))
        for k, v in row.items():
            print(f"{k:<{width}}  {str(v).lower() if isinstance(v, bool) else v}")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    fam = Family(_family_kind(args.family), args.n)
    if args.count:
        print(families.family_count(fam, args.max_n))
        return EXIT_OK
    for p in families.enumerate_family(fam, args.max_n):
        print(p)
    return EXIT_OK


def cmd_poly(args) -> int:
    fam = Family(_family_kind(args.family), args.n)
    poly = families.generating_polynomial(fam, _scheme(args.scheme), lam=_parse_lambda(args.lam),
                                          max_n=args.max_n)
    subst = _parse_settings(args.set)
    if subst is not None:
        poly = poly.substitute(subst, keep_unmapped=True)
    if args.json:
        print(_dump({"family": str(fam), "scheme": args.scheme, "lambda": args.lam,
                     **_poly_json(poly)}))
    else:
        print(poly)
    return EXIT_OK


def cmd_series(args) -> int:
    series = families.series_of_family(
        _family_kind(args.family), _scheme(args.scheme), args.order,
        lam=_parse_lambda(args.lam), substitution=_parse_settings(args.set), max_n=args.max_n,
    )
    if args.json:
        print(_dump({"family": args.family, "scheme": args.scheme, "lambda": args.lam,
                     "order": args.order,
                     "coefficients": [str(c) for c in series.coeffs]}))
    else:
        print(series.to_text())
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.all:
        ids = list(verifier.IDENTITIES)
    elif args.id:
        ids = args.id
    else:
        raise UsageError("verify needs --id ID or --all")
    for i in ids:
        if i not in verifier.IDENTITIES:
            raise UsageError(str(verifier.UnknownIdentityError(i)))
    reports = []
    for i in ids:
        case = verifier.IDENTITIES[i]
        mode = "predicate" if case.kind == "predicate" else (args.mode or case.default_mode)
        if mode == "predicate" and case.kind != "predicate":
            raise UsageError(f"mode predicate does not apply to {i}")
        reports.append(verifier.verify(i, args.order, mode, args.seed, args.trials,
                                       max_n=args.max_n))
    if not args.timing:
        for r in reports:
            r.millis = 0
    if args.json:
        print(_dump([r.to_json() for r in sorted(reports, key=lambda r: r.id)]))
    else:
        for r in reports:
            print(r.summary())
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def cmd_list_identities(args) -> int:
    rows = []
    for case in verifier.IDENTITIES.values():
        rows.append({
            "id": case.id,
            "title": case.title,
            "family": case.family,
            "scheme": case.scheme,
            "lambda": case.lam,
            "default_mode": case.default_mode,
            "symbolic_order": case.symbolic_order if case.kind == "series" else None,
            "modular_order": case.modular_order if case.kind == "series" else None,
            "predicate_size": case.predicate_size if case.kind == "predicate" else None,
        })
    if args.json:
        print(_dump(rows))
    else:
        for r in rows:
            print(f"{r['id']:<18} {r['title']}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclefrac",
        description="Permutation statistics, generating polynomials and continued-fraction checks.",
    )
    parser.add_argument("--max-n", type=int, default=None,
                        help="override the family size caps (also CYCLEFRAC_MAX_N)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="statistics of one permutation")
    p.add_argument("perm", help='one-line word, e.g. "9,3,7,4,6,11,2,8,10,1,5"')
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--tsv", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("enumerate", help="list the members of a family")
    p.add_argument("--family", required=True, choices=families.KINDS)
    p.add_argument("--n", type=int, required=True, help="permutation length")
    p.add_argument("--count", action="store_true", help="print only the number of members")
    p.set_defaults(func=cmd_enumerate)

    def add_scheme_args(p, *, lambda_default: str) -> None:
        p.add_argument("--family", required=True, choices=families.KINDS)
        p.add_argument("--scheme", required=True)
        p.add_argument("--lambda", dest="lam", default=lambda_default,
                       help="integer value for lambda, or 'symbolic'")
        p.add_argument("--set", action="append", default=[], metavar="VAR=VALUE",
                       help="substitute a variable; all=VALUE covers every variable but lambda")
        p.add_argument("--json", action="store_true")

    p = sub.add_parser("poly", help="generating polynomial of one family member size")
    add_scheme_args(p, lambda_default="symbolic")
    p.add_argument("--n", type=int, required=True, help="permutation length")
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("series", help="generating series through a given order")
    add_scheme_args(p, lambda_default="symbolic")
    p.add_argument("--order", type=int, required=True)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("verify", help="check registered identities")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--id", action="append", help="identity id (repeatable)")
    g.add_argument("--all", action="store_true")
    p.add_argument("--order", type=int, default=None,
                   help="largest t-power (series) or permutation length (predicates)")
    p.add_argument("--mode", choices=("symbolic", "modular", "predicate"), default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--timing", action="store_true", help="report wall time per identity")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("list-identities", help="show the identity registry")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_list_identities)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, CapExceededError) as exc:
        print(f"cyclefrac: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"cyclefrac: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

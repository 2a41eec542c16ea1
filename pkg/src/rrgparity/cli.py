"""Command-line front end: ``count``, ``expand``, ``verify`` and ``bijection``.

Exit status is 0 when nothing failed, 1 when a check failed and 2 for usage
errors (bad family id, parameters outside a statement's hypotheses, budgets).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

from . import __version__
from .bijection import VARIANTS as BIJECTION_VARIANTS
from .bijection import BijectionError, check_bijection
from .families import FAMILIES, FamilyError, FamilySpec, count, enumeration_budget, family_series
from .identities import DomainError, registry, run_case, select, verify_grid
from .qkernel import MULTISUM_VARIANTS, MultisumSpec, kernel_at_x_one, multisum, qbar_doubled
from .series import Pochhammer, ProductSpec, SeriesError, SeriesQ, expand_product

SERIES_BUDGET = 200

NAMED_PRODUCTS = {
    "euler": ProductSpec((Pochhammer(1, 1),)),
    "partitions": ProductSpec((Pochhammer(1, 1, inverse=True),)),
    "distinct": ProductSpec((Pochhammer(1, 1, sign=-1),)),
    "odd": ProductSpec((Pochhammer(1, 2, inverse=True),)),
    "overpartitions": ProductSpec((Pochhammer(1, 1, sign=-1), Pochhammer(1, 1, inverse=True))),
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    fmt: str
    out: str | None
    jobs: int = 1
    allow_large: bool = False


# -- output -----------------------------------------------------------------


def _render(rows: list[dict], columns: list[str], fmt: str, payload=None) -> str:
    if fmt == "json":
        return json.dumps(payload if payload is not None else rows, indent=2, sort_keys=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow(r)
        return buf.getvalue()
    widths = {c: max([len(c)] + [len(str(r.get(c, ""))) for r in rows]) for c in columns}
    lines = ["  ".join(c.ljust(widths[c]) for c in columns)]
    for r in rows:
        lines.append("  ".join(str(r.get(c, "")).ljust(widths[c]) for c in columns).rstrip())
    return "\n".join(lines) + "\n"


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _budget_n(n: int, cfg: RunConfig, what: str, limit: int) -> None:
    if n < 0:
        raise UsageError(f"{what} must be non-negative")
    if n > limit and not cfg.allow_large:
        raise UsageError(f"{what}={n} exceeds the budget {limit}; pass --allow-large to override")


def _family_spec(args) -> FamilySpec:
    if args.family is None:
        raise UsageError(f"--family is required; valid ids: {', '.join(FAMILIES)}")
    if args.family in ("Abar", "Bbar"):
        i = args.i if args.i is not None else args.a
        return FamilySpec(args.family, args.k, i=i)
    return FamilySpec(args.family, args.k, args.a, args.i)


# -- commands ---------------------------------------------------------------


def cmd_count(args, cfg: RunConfig) -> int:
    spec = _family_spec(args)
    if args.method == "enumerate":
        _budget_n(args.n_max, cfg, "--n-max", enumeration_budget())
        counts = [count(spec, n, allow_large=True) for n in range(args.n_max + 1)]
    else:
        _budget_n(args.n_max, cfg, "--n-max", SERIES_BUDGET)
        counts = list(family_series(spec, args.n_max).coeffs)
    rows = [{"n": n, "count": c} for n, c in enumerate(counts)]
    payload = {"family": spec.label, "method": args.method, "rows": rows}
    _emit(_render(rows, ["n", "count"], cfg.fmt, payload), cfg)
    return 0


def cmd_expand(args, cfg: RunConfig) -> int:
    N = args.N
    _budget_n(N, cfg, "--N", SERIES_BUDGET)
    side = args.side
    if side == "product":
        if args.spec is None:
            raise UsageError(f"--spec is required for --side product; choose from {', '.join(NAMED_PRODUCTS)}")
        if args.spec not in NAMED_PRODUCTS:
            raise UsageError(f"unknown product {args.spec!r}; choose from {', '.join(NAMED_PRODUCTS)}")
        f = expand_product(NAMED_PRODUCTS[args.spec], N)
        label = args.spec
    elif side == "multisum":
        f = multisum(MultisumSpec(args.k, args.a, args.variant), N)
        label = f"multisum {args.variant} k={args.k} a={args.a}"
    elif side == "kernel":
        I = args.i if args.i is not None else args.a
        if args.k is None or I is None:
            raise UsageError("--side kernel needs doubled indices --k K and --i I")
        if args.x_one:
            f = kernel_at_x_one(args.k, I, N)
        else:
            f = qbar_doubled((args.k, I), N)
        label = f"DQ_{{{args.k},{I}}}" + (" at x=1" if args.x_one else "")
    else:
        f = family_series(_family_spec(args), N)
        label = _family_spec(args).label
    data = f.to_json()
    if cfg.fmt == "json":
        _emit(json.dumps({"side": side, "label": label, **data}, indent=2) + "\n", cfg)
    elif isinstance(f, SeriesQ):
        rows = [{"n": n, "coeff": c} for n, c in enumerate(data["coeffs"])]
        _emit(_render(rows, ["n", "coeff"], cfg.fmt), cfg)
    else:
        rows = [{"n": n, "m": m, "coeff": c} for m, n, c in f.items()]
        rows.sort(key=lambda r: (r["n"], r["m"]))
        _emit(_render(rows, ["n", "m", "coeff"], cfg.fmt), cfg)
    return 0


def _case_params(case, args) -> dict:
    """Map --k/--a/--i onto a case's parameter names (K, I for doubled kernel indices)."""
    vals = {"k": args.k, "a": args.a, "i": args.i if args.i is not None else args.a,
            "K": args.k, "I": args.i if args.i is not None else args.a}
    return {name: vals[name] for name in case.params}


def cmd_verify(args, cfg: RunConfig) -> int:
    if not args.all and not args.id:
        raise UsageError("pass --id ID (repeatable) or --all")
    filters = None if args.all else args.id
    cases = select(filters, include_as_printed=args.as_printed)
    if not cases:
        raise UsageError(f"no identity matches {args.id}; see `rrgparity list`")
    _budget_n(args.N, cfg, "--N", SERIES_BUDGET)
    N_xq = args.N_xq if args.N_xq is not None else min(args.N, 20)
    if args.k is None:
        reports = verify_grid(filters, args.k_max, args.N, N_xq, args.x_bound, cfg.jobs,
                              include_as_printed=args.as_printed)
    else:
        # one parameter tuple: validate every case before computing anything
        checked = []
        for case in cases:
            try:
                checked.append((case, case.check_params(_case_params(case, args))))
            except DomainError as exc:
                raise UsageError(str(exc)) from exc
        reports = [run_case(case, p, args.N if case.variables == "q" else N_xq, args.x_bound) for case, p in checked]
        reports.sort(key=lambda r: r.sort_key())
    failed = [r for r in reports if not r.passed]
    if cfg.fmt == "table":
        text = "".join(r.row() + "\n" for r in reports)
        text += f"{len(reports) - len(failed)} passed, {len(failed)} failed\n"
    else:
        rows = []
        for r in reports:
            w = r.witness or {}
            rows.append({
                "id": r.id,
                "params": ";".join(f"{k}={v}" for k, v in r.params.items()),
                "N": r.N,
                "verdict": r.verdict,
                "m": w.get("m", ""),
                "n": w.get("n", ""),
                "left": w.get("left", ""),
                "right": w.get("right", ""),
                "error": r.error or "",
            })
        payload = {"passed": not failed, "reports": [r.to_json() for r in reports]}
        text = _render(rows, ["id", "params", "N", "verdict", "m", "n", "left", "right", "error"], cfg.fmt, payload)
    _emit(text, cfg)
    return 1 if failed else 0


def cmd_list(args, cfg: RunConfig) -> int:
    rows = [{"id": c.id, "variables": c.variables, "params": ",".join(c.params), "title": c.title}
            for c in registry()]
    _emit(_render(rows, ["id", "variables", "params", "title"], cfg.fmt), cfg)
    return 0


def cmd_bijection(args, cfg: RunConfig) -> int:
    if args.k is None or args.a is None:
        raise UsageError("bijection needs --k and --a")
    _budget_n(args.n_max, cfg, "--n-max", enumeration_budget())
    rep = check_bijection(args.k, args.a, args.n_max, args.variant, allow_large=True)
    if cfg.fmt == "table":
        text = _render(rep.rows, ["n", "source", "pairs", "ok"], "table")
        for w in rep.witnesses:
            text += f"FAIL {w['check']} n={w['n']}: {w['detail']}\n"
        text += ("PASS" if rep.passed else "FAIL") + f" bijection {args.variant}_{{{2 * args.k},{2 * args.a}}}"
        text += f" n<={args.n_max}\n"
    else:
        text = _render(rep.rows, ["n", "source", "pairs", "ok"], cfg.fmt, rep.to_json())
    _emit(text, cfg)
    return 0 if rep.passed else 1


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json", "csv"), default=None,
                        help="output format (default: table on a terminal, json otherwise)")
    common.add_argument("--out", help="write output to this file")
    common.add_argument("--jobs", type=int, default=1, help="worker threads")
    common.add_argument("--allow-large", action="store_true", help="lift the N / n-max budgets")
    common.add_argument("--k", type=int)
    common.add_argument("--a", type=int)
    common.add_argument("--i", type=int)

    p = argparse.ArgumentParser(prog="rrgparity", description="Exact checks of parity-restricted overpartition identities.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", parents=[common], help="count family members by weight")
    c.add_argument("--family", help=f"one of {', '.join(FAMILIES)}")
    c.add_argument("--n-max", type=int, default=10)
    c.add_argument("--method", choices=("transfer", "enumerate"), default="transfer")

    e = sub.add_parser("expand", parents=[common], help="expand a product, multisum, kernel or family series")
    e.add_argument("--side", choices=("product", "multisum", "kernel", "family"), required=True)
    e.add_argument("--spec", help=f"named product: {', '.join(NAMED_PRODUCTS)}")
    e.add_argument("--variant", choices=MULTISUM_VARIANTS, default="andrews_gordon")
    e.add_argument("--family")
    e.add_argument("--x-one", action="store_true", help="kernel at x = 1 (q^2 -> q)")
    e.add_argument("--N", type=int, default=10)

    v = sub.add_parser("verify", parents=[common], help="verify registered identities")
    v.add_argument("--id", action="append", help="case id or theorem id; repeatable; trailing * is a prefix match")
    v.add_argument("--all", action="store_true")
    v.add_argument("--as-printed", action="store_true", help="include the cases that check misprinted forms")
    v.add_argument("--k-max", type=int, default=3)
    v.add_argument("--N", type=int, default=20)
    v.add_argument("--N-xq", type=int, default=None, help="q-order for two-variable cases (default min(N, 20))")
    v.add_argument("--x-bound", type=int, default=None, help="highest x-degree compared")

    sub.add_parser("list", parents=[common], help="list registered identities")

    b = sub.add_parser("bijection", parents=[common], help="exhaustively check the splitting map")
    b.add_argument("--n-max", type=int, default=12)
    b.add_argument("--variant", choices=BIJECTION_VARIANTS, default="U")
    return p


COMMANDS = {"count": cmd_count, "expand": cmd_expand, "verify": cmd_verify, "list": cmd_list,
            "bijection": cmd_bijection}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = args.format or ("table" if sys.stdout.isatty() else "json")
    if args.jobs < 1:
        parser.error("--jobs must be >= 1")
    cfg = RunConfig(args.command, fmt, args.out, args.jobs, args.allow_large)
    try:
        return COMMANDS[args.command](args, cfg)
    except (UsageError, FamilyError, DomainError, SeriesError, BijectionError) as exc:
        print(f"rrgparity {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

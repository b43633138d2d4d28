"""Command line entry point: ``qpwalk classify | series | group``."""

from __future__ import annotations

import argparse
import json
import sys

from .classify import Options, classify, classify_all, emit_report, summary
from .funcfield import CrossOracleError
from .group import DEFAULT_GROUP_BOUND, DEFAULT_SAMPLES, group_order
from .series import check_functional_equation, count_walks
from .walkcat import lookup

EXIT_CROSS_ORACLE = 2


def _write(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _cmd_classify(args) -> int:
    opts = Options(orbit_bound=args.orbit_bound, group_bound=args.group_bound,
                   series_order=args.series_order, seed=args.seed, workers=args.workers)
    if args.all:
        reports = classify_all(opts)
    else:
        reports = [classify(lookup(w), opts) for w in args.walk]
    _write(emit_report(reports, args.format), args.out)
    if args.all:
        counts = summary(reports)
        print(" ".join(f"{k}={v}" for k, v in counts.items()), file=sys.stderr)
    return 0


def _cmd_series(args) -> int:
    D = lookup(args.walk)
    table = count_walks(D, args.order)
    residual = check_functional_equation(D, args.order)
    doc = {
        "walk": D.name,
        "grid": D.grid,
        "order": args.order,
        "total_walks": [table.total(k) for k in range(args.order + 1)],
        "excursions": [table.q(0, 0, k) for k in range(args.order + 1)],
        "functional_equation_residual_terms": len(residual),
    }
    _write(json.dumps(doc, indent=2), args.out)
    return 0 if not residual else EXIT_CROSS_ORACLE


def _cmd_group(args) -> int:
    D = lookup(args.walk)
    g = group_order(D, args.bound, args.samples, args.seed)
    _write(json.dumps({"walk": D.name, "grid": D.grid, "group": str(g)}, indent=2), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qpwalk", description="Classify quarter-plane walks with small steps.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="run the decision pipeline")
    which = c.add_mutually_exclusive_group(required=True)
    which.add_argument("--walk", action="append", help="catalog label or grid such as 011/101/010 (repeatable)")
    which.add_argument("--all", action="store_true", help="classify the whole catalog")
    c.add_argument("--orbit-bound", type=int, default=64)
    c.add_argument("--group-bound", type=int, default=DEFAULT_GROUP_BOUND)
    c.add_argument("--series-order", type=int, default=12)
    c.add_argument("--seed", type=int, default=7)
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--format", choices=("json", "tsv", "md"), default="json")
    c.add_argument("--out")
    c.set_defaults(func=_cmd_classify)

    s = sub.add_parser("series", help="count walks and check the kernel functional equation")
    s.add_argument("--walk", required=True)
    s.add_argument("--order", type=int, default=12)
    s.add_argument("--out")
    s.set_defaults(func=_cmd_series)

    g = sub.add_parser("group", help="test finiteness of the group of the walk")
    g.add_argument("--walk", required=True)
    g.add_argument("--bound", type=int, default=DEFAULT_GROUP_BOUND)
    g.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    g.add_argument("--seed", type=int, default=7)
    g.add_argument("--out")
    g.set_defaults(func=_cmd_group)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CrossOracleError as exc:
        print(f"cross-oracle disagreement: {exc}", file=sys.stderr)
        return EXIT_CROSS_ORACLE
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

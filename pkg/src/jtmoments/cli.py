"""Command-line front end.

    jtmoments --model m1.json --algorithm ln --stats

Exit codes: 0 success, 1 malformed invocation, 2 model or validation error,
3 brute-force enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .engine import Stats
from .errors import EnumerationCapExceeded, JTMomentsError
from .moments import STRATEGIES, conditional_expectation, moment_brute_force
from .modelfile import dumps_report, load_model

ALGORITHMS = ("ln", "maua", "all-vertices", "brute-force")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="jtmoments",
                     description="First-order moments on junction trees.")
    parser.add_argument("--model", required=True, help="path to a JSON model file")
    parser.add_argument("--algorithm", choices=ALGORITHMS)
    parser.add_argument("--root", type=int, default=0, help="root node index (default 0)")
    parser.add_argument("--query", help="comma-separated variable names; report E[h | query]")
    parser.add_argument("--stats", action="store_true", help="include message-passing counters")
    parser.add_argument("--validate-only", action="store_true", help="parse and validate, compute nothing")
    return parser


def _stats_dict(st: Stats) -> dict:
    return {"messages": st.messages_computed, "peak_live": st.peak_live, "combine_ops": st.combine_ops}


def _report(args, model) -> dict:
    names = model.names
    tree = model.junction_tree
    if args.validate_only:
        report = {
            "valid": True,
            "nodes": [[names[v] for v in n] for n in tree.nodes],
            "edges": [list(e) for e in tree.edges],
        }
        if args.stats:
            report["stats"] = _stats_dict(Stats())
        return report

    if not 0 <= args.root < len(tree.nodes):
        raise JTMomentsError(f"--root {args.root} out of range: tree has {len(tree.nodes)} nodes")
    if args.algorithm == "brute-force":
        result = moment_brute_force(model)
    else:
        result = STRATEGIES[args.algorithm](model, root=args.root)
    report = {"algorithm": args.algorithm, "Z": result.Z, "m": result.m}
    if result.marginals is not None:
        report["per_node_marginals"] = [
            {"node": [names[v] for v in t.scope], "values": t.flat.tolist()} for t in result.marginals]
    if args.query is not None:
        wanted = [n.strip() for n in args.query.split(",") if n.strip()]
        index = {n: i for i, n in enumerate(names)}
        unknown = [n for n in wanted if n not in index]
        if unknown:
            raise JTMomentsError(f"--query names unknown variable {unknown[0]!r}")
        table = conditional_expectation(model, [index[n] for n in wanted])
        report["conditional"] = {"scope": [names[v] for v in table.scope], "values": table.flat.tolist()}
    if args.stats:
        report["stats"] = _stats_dict(result.stats)
    return report


def main(argv: Optional[List[str]] = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
        if args.algorithm is None and not args.validate_only:
            raise UsageError("--algorithm is required unless --validate-only is given")
    except UsageError as exc:
        print(parser.format_usage(), end="", file=sys.stderr)
        print(f"jtmoments: error: {exc}", file=sys.stderr)
        return 1
    try:
        model = load_model(args.model)
        report = _report(args, model)
    except EnumerationCapExceeded as exc:
        print(f"jtmoments: {exc}", file=sys.stderr)
        return 3
    except (JTMomentsError, OSError) as exc:
        print(f"jtmoments: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(dumps_report(report) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())

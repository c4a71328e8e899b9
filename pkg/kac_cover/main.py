#!/usr/bin/env python3
"""
Command-line front door for Kac polynomials, covering-quiver verification,
tree-module counts and the finite-field oracle.

Results are printed to stdout; with ``--machine`` every record is a single
tab-separated line. Exit codes: 0 success, 1 verification failure,
2 input error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

# Ensure the repo root is on the path when running this script directly
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from kac_cover.covering import DEFAULT_NODE_CAP, enumerate_compatible, verify_main_theorem
from kac_cover.errors import DomainError, KacCoverError, QuiverInputError, ResourceLimitError
from kac_cover.kac import kac_growth_sequence, kac_polynomial
from kac_cover.kac_cache import KacCache, cached_kac
from kac_cover.oracle import count_abs_indec, enumerate_cover_thin_trees, oracle_sweep, render_sweep
from kac_cover.qseries import evaluate
from kac_cover.quiver import classify_root, tits_form
from kac_cover.quiver_file import load_quiver, parse_dim
from kac_cover.trees import (
    CoverThinParams,
    cover_thin_bound_table,
    cover_thin_count,
    growth_table,
    spanning_tree_count,
    thin_kac_at_one_check,
    tree_module_count_if_exceptional,
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3

logger = logging.getLogger("kac_cover")


class CommandResult:
    """Buffered output lines plus the exit code of one command."""

    def __init__(self) -> None:
        self.lines: list[str] = []
        self.exit_code = EXIT_OK

    def emit(self, line: str) -> None:
        self.lines.append(line)


def _quiver_and_dim(args):
    quiver = load_quiver(args.quiver)
    return quiver, parse_dim(args.dim, quiver)


def _store(args) -> Optional[KacCache]:
    return KacCache(args.cache) if args.cache else None


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_kac(args, out: CommandResult) -> None:
    if args.multiples is not None:
        cmd_kac_growth(args, out)
        return
    quiver, alpha = _quiver_and_dim(args)
    result = cached_kac(_store(args), quiver, alpha)
    if args.machine:
        out.emit(f"{result.rendering}\t{result.value_at_one}")
    else:
        out.emit(result.rendering)
        out.emit(f"a(1)={result.value_at_one}")


def cmd_kac_growth(args, out: CommandResult) -> None:
    quiver, alpha = _quiver_and_dim(args)
    table = kac_growth_sequence(quiver, alpha, args.multiples)
    if not args.machine:
        out.emit("n\tdim\ta(1)\tln(a(1))/n")
    for row in table.itertuples(index=False):
        out.emit(f"{row.n}\t{row.dim}\t{row.a_at_one}\t{row.log_growth:.6f}")


def cmd_root(args, out: CommandResult) -> None:
    quiver, alpha = _quiver_and_dim(args)
    root_type = classify_root(quiver, alpha)
    value = tits_form(quiver, alpha)
    if args.machine:
        out.emit(f"{root_type.value}\t{value}")
    else:
        out.emit(f"{root_type.value} (tits form {value})")


def cmd_cover_enumerate(args, out: CommandResult) -> None:
    quiver, alpha = _quiver_and_dim(args)
    classes = enumerate_compatible(quiver, alpha, node_cap=args.node_cap, roots_only=not args.all_classes)
    for cls in classes:
        if args.machine:
            out.emit(f"{cls.serialization}\t{cls.n_vertices}\t{cls.n_arrows}")
        else:
            out.emit(f"β={cls.serialization} support={cls.n_vertices}v/{cls.n_arrows}a")
    if not args.machine:
        out.emit(f"classes={len(classes)}")


def cmd_cover_verify(args, out: CommandResult) -> None:
    quiver, alpha = _quiver_and_dim(args)
    report = verify_main_theorem(
        quiver,
        alpha,
        node_cap=args.node_cap,
        threads=args.threads,
        roots_only=not args.all_classes,
        store=_store(args),
    )
    for line in report.render_lines(machine=args.machine):
        out.emit(line)
    if not report.ok:
        out.exit_code = EXIT_FAILED


def cmd_trees_spanning(args, out: CommandResult) -> None:
    out.emit(str(spanning_tree_count(load_quiver(args.quiver))))


def cmd_trees_thin_check(args, out: CommandResult) -> None:
    check = thin_kac_at_one_check(load_quiver(args.quiver))
    if args.machine:
        out.emit(f"{check.kac_value}\t{check.spanning_trees}\t{'OK' if check.ok else 'FAIL'}")
    else:
        out.emit(check.render())
    if not check.ok:
        out.exit_code = EXIT_FAILED


def cmd_trees_coverthin(args, out: CommandResult) -> None:
    out.emit(str(cover_thin_count(CoverThinParams(args.m, args.d, args.e))))


def cmd_trees_growth(args, out: CommandResult) -> None:
    k = _fraction(args.k)
    table = growth_table(args.m, k, range(1, args.dmax + 1))
    if not args.machine:
        out.emit("d\tct\tln(ct)/d\tbound")
    for row in table.itertuples(index=False):
        out.emit(f"{row.d}\t{row.ct}\t{row.log_ct_over_d:.6f}\t{row.bound:.6f}")
    if args.plot_dir:
        from kac_cover.growth_plotting import plot_growth_profile

        path = plot_growth_profile(table, args.m, k, plots_dir=args.plot_dir)
        logger.info("growth plot saved to %s", path)


def cmd_trees_exceptional(args, out: CommandResult) -> None:
    quiver, alpha = _quiver_and_dim(args)
    result = tree_module_count_if_exceptional(quiver, alpha, node_cap=args.node_cap)
    if result.applicable:
        out.emit(f"count\t{result.count}" if args.machine else f"count={result.count}")
    elif args.machine:
        out.emit(f"not_applicable\t{result.witness.serialization}\t{result.witness_polynomial}")
    else:
        out.emit(f"not_applicable witness={result.witness.serialization} polynomial={result.witness_polynomial}")


def cmd_trees_bound_table(args, out: CommandResult) -> None:
    dims = [_pair(text) for text in args.dims]
    table = cover_thin_bound_table(args.m, dims)
    if not args.machine:
        out.emit("m\td\te\tct\ta(1)\ta(1)>=ct")
    for row in table.itertuples(index=False):
        out.emit(f"{row.m}\t{row.d}\t{row.e}\t{row.ct}\t{row.a_at_one}\t{row.bound_holds}")


def cmd_oracle_brute(args, out: CommandResult) -> None:
    quiver, alpha = _quiver_and_dim(args)
    count = count_abs_indec(quiver, alpha, args.p)
    engine = evaluate(kac_polynomial(quiver, alpha), args.p)
    if args.machine:
        out.emit(f"{count}\t{engine}")
    else:
        out.emit(f"abs_indec={count} engine={engine} {'OK' if count == engine else 'FAIL'}")
    if count != engine:
        out.exit_code = EXIT_FAILED


def cmd_oracle_trees(args, out: CommandResult) -> None:
    out.emit(str(enumerate_cover_thin_trees(args.m, args.d, args.e)))


def cmd_oracle_sweep(args, out: CommandResult) -> None:
    report = oracle_sweep(
        max_total_dim=args.max_total_dim,
        primes=args.primes,
        progress=not args.machine,
    )
    for line in render_sweep(report):
        out.emit(line)
    if (report["status"] == "FAIL").any():
        out.exit_code = EXIT_FAILED


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"not a rational number: {text!r}") from None


def _pair(text: str) -> tuple[int, int]:
    try:
        d, e = (int(part) for part in text.split(","))
    except ValueError:
        raise QuiverInputError(f"expected 'd,e', got {text!r}") from None
    return d, e


def _add_global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument(
        "--cache",
        type=str,
        default=default(None),
        help="Append-only Kac polynomial cache file. Default: off",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=default(1),
        help="Worker processes for per-class Kac computations. Default: 1",
    )
    parser.add_argument(
        "--node-cap",
        type=int,
        default=default(DEFAULT_NODE_CAP),
        help=f"Search-node limit for the covering enumeration. Default: {DEFAULT_NODE_CAP}",
    )
    parser.add_argument(
        "--machine",
        action="store_true",
        default=default(False),
        help="Tab-separated output only",
    )
    parser.add_argument(
        "--verbose",
        action="store_true",
        default=default(False),
        help="Log progress to stderr",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kac-cover",
        description="Kac polynomials, covering quivers and tree-module counts",
    )
    _add_global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_global_flags(common, suppress=True)

    def quiver_args(sub: argparse.ArgumentParser, with_dim: bool = True) -> None:
        sub.add_argument(
            "--quiver",
            required=True,
            help="Quiver file or builtin (kronecker:m, loops:g, cycle:n, path:n, star:k)",
        )
        if with_dim:
            sub.add_argument("--dim", required=True, help="Dimension vector a,b,... in vertex declaration order")

    commands = parser.add_subparsers(dest="command", required=True)

    kac = commands.add_parser("kac", parents=[common], help="Kac polynomial and its value at 1")
    quiver_args(kac)
    kac.add_argument(
        "--multiples",
        type=int,
        default=None,
        help="Instead tabulate a(1) at n*dim for n = 1..N. Default: off",
    )
    kac.set_defaults(handler=cmd_kac)

    root = commands.add_parser("root", parents=[common], help="Root type and Tits form")
    quiver_args(root)
    root.set_defaults(handler=cmd_root)

    cover = commands.add_parser("cover", help="Covering quiver classes")
    cover_sub = cover.add_subparsers(dest="cover_command", required=True)
    for name, handler, text in (
        ("enumerate", cmd_cover_enumerate, "List compatible classes"),
        ("verify", cmd_cover_verify, "Check a(1) against the sum over classes"),
    ):
        sub = cover_sub.add_parser(name, parents=[common], help=text)
        quiver_args(sub)
        sub.add_argument(
            "--all-classes",
            action="store_true",
            help="Keep classes that are not roots of their support (they contribute 0)",
        )
        sub.set_defaults(handler=handler)

    trees = commands.add_parser("trees", help="Tree-module counts")
    trees_sub = trees.add_subparsers(dest="trees_command", required=True)
    spanning = trees_sub.add_parser("spanning", parents=[common], help="Matrix-Tree spanning tree count")
    quiver_args(spanning, with_dim=False)
    spanning.set_defaults(handler=cmd_trees_spanning)
    thin = trees_sub.add_parser("thin-check", parents=[common], help="a(1) at all-ones against spanning trees")
    quiver_args(thin, with_dim=False)
    thin.set_defaults(handler=cmd_trees_thin_check)
    coverthin = trees_sub.add_parser("coverthin", parents=[common], help="Cover-thin tree modules of K(m)")
    for flag in ("--m", "--d", "--e"):
        coverthin.add_argument(flag, type=int, required=True)
    coverthin.set_defaults(handler=cmd_trees_coverthin)
    growth_cmd = trees_sub.add_parser("growth", parents=[common], help="ln(ct)/d against its limit")
    growth_cmd.add_argument("--m", type=int, required=True)
    growth_cmd.add_argument("--k", type=str, default="1", help="Slope e/d, integer or fraction. Default: 1")
    growth_cmd.add_argument("--dmax", type=int, required=True)
    growth_cmd.add_argument("--plot-dir", type=str, default=None, help="Also save a PNG here. Default: off")
    growth_cmd.set_defaults(handler=cmd_trees_growth)
    exceptional = trees_sub.add_parser(
        "exceptional", parents=[common], help="Tree-module count when every class has Kac polynomial 1"
    )
    quiver_args(exceptional)
    exceptional.set_defaults(handler=cmd_trees_exceptional)
    bound = trees_sub.add_parser("bound-table", parents=[common], help="ct against a(1) for K(m)")
    bound.add_argument("--m", type=int, required=True)
    bound.add_argument("--dims", nargs="+", required=True, metavar="D,E")
    bound.set_defaults(handler=cmd_trees_bound_table)

    oracle = commands.add_parser("oracle", help="Brute-force checks")
    oracle_sub = oracle.add_subparsers(dest="oracle_command", required=True)
    brute = oracle_sub.add_parser("brute", parents=[common], help="Count absolutely indecomposables over F_p")
    quiver_args(brute)
    brute.add_argument("--p", type=int, required=True)
    brute.set_defaults(handler=cmd_oracle_brute)
    coloured = oracle_sub.add_parser("trees", parents=[common], help="Coloured bipartite tree count")
    for flag in ("--m", "--d", "--e"):
        coloured.add_argument(flag, type=int, required=True)
    coloured.set_defaults(handler=cmd_oracle_trees)
    sweep = oracle_sub.add_parser("sweep", parents=[common], help="Oracle against engine on small quivers")
    sweep.add_argument("--max-total-dim", type=int, default=3, help="Largest total dimension. Default: 3")
    sweep.add_argument("--primes", type=int, nargs="*", default=[2, 3], help="Primes. Default: 2 3")
    sweep.set_defaults(handler=cmd_oracle_sweep)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main execution function."""
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )

    out = CommandResult()
    try:
        args.handler(args, out)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (QuiverInputError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except KacCoverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED

    for line in out.lines:
        print(line)
    return out.exit_code


if __name__ == "__main__":
    sys.exit(main())

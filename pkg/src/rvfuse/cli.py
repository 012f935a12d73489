"""Command-line entry point.

    rvfuse analyze  --input loop.asm --out md
    rvfuse nearmiss --input run.trace
    rvfuse compare  --counts counts.csv --baseline x86-64
    rvfuse cdf      --input run.trace --top 100

Exit status: 0 on success, 1 when the input cannot be read or is invalid,
2 for bad command-line flags.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .decoder import disassemble, reg_name
from .fusion import FusionConfig, fusion_stats, near_misses, select_fusions
from .metrics import (IsaCountTable, TableError, build_report, cdf, dynamic_count,
                      isa_geomeans, normalize)
from .render import (FORMATS, render_analyze, render_cdf, render_compare,
                     render_nearmiss)
from .trace import TraceError, load, segment_blocks


class InputError(Exception):
    pass


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _idioms(text: str) -> str:
    try:
        FusionConfig.from_names(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("path", nargs="?", help="input trace (same as --input)")
    common.add_argument("--input", help="input trace file")
    common.add_argument("--format", choices=("trace", "asm"),
                        help="input format (default: asm for .asm/.s files, else trace)")
    common.add_argument("--out", choices=FORMATS, help="output format")
    common.add_argument("--idioms", type=_idioms, default="default",
                        help="comma list of idioms, or all|none|default")
    common.add_argument("--multi-writeback", action="store_true",
                        help="also select idioms that write two registers")
    common.add_argument("--top", type=_positive_int, default=100,
                        help="number of hottest instructions in the CDF")
    common.add_argument("--counts", help="CSV of per-ISA dynamic counts")
    common.add_argument("--baseline", default="x86-64",
                        help="ISA the counts are normalized to")

    parser = argparse.ArgumentParser(
        prog="rvfuse", description="RV64GC macro-op fusion and instruction-count analysis")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="counts, bytes and fusion summary")
    sub.add_parser("nearmiss", parents=[common], help="fusions blocked by register allocation")
    sub.add_parser("compare", parents=[common], help="normalize per-ISA counts, geomeans")
    sub.add_parser("cdf", parents=[common], help="cumulative dynamic-count fractions")
    return parser


def _read_items(args):
    path = args.input or args.path
    if path is None:
        raise InputError("no input trace given")
    try:
        items = load(path, args.format)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    if not items:
        raise InputError("empty trace")
    return items


def _read_table(path):
    try:
        return IsaCountTable.from_csv(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None


def _config(args) -> FusionConfig:
    return FusionConfig.from_names(args.idioms, args.multi_writeback)


def cmd_analyze(args) -> str:
    items = _read_items(args)
    blocks = segment_blocks(items)
    stats = fusion_stats(blocks, _config(args))
    table = _read_table(args.counts) if args.counts else None
    report = build_report(items, stats, table, args.baseline, args.top)
    return render_analyze(report, args.out or "json",
                          table.benchmarks if table else (), table.isas if table else ())


def nearmiss_records(items, config: FusionConfig):
    """Near-miss records in pc order plus the non-overlapping recoverable weight."""
    blocks = segment_blocks(items)
    total = dynamic_count(items)
    records = []
    recoverable = 0
    for bi, block in enumerate(blocks):
        selected = select_fusions(block, config, bi)
        last_end = -1
        for nm in near_misses(block, config, bi, selected):
            first, second = block.items[nm.start], block.items[nm.start + 1]
            records.append({
                "pc": f"{first.pc:x}",
                "idiom": nm.kind.value,
                "blocking_register": reg_name(nm.blocking_register),
                "suggested_rename": reg_name(nm.suggested_rename),
                "weight": nm.weight,
                "reduction_pct": 100.0 * nm.weight / total,
                "first": disassemble(first.instr, first.pc),
                "second": disassemble(second.instr, second.pc),
            })
            # overlapping suggestions cannot both be applied
            if nm.start > last_end:
                recoverable += nm.weight
                last_end = nm.start + 1
    return records, recoverable, 100.0 * recoverable / total


def cmd_nearmiss(args) -> str:
    items = _read_items(args)
    records, weight, pct = nearmiss_records(items, _config(args))
    return render_nearmiss(records, weight, pct, args.out or "csv")


def cmd_compare(args) -> str:
    if not args.counts:
        raise InputError("compare needs --counts")
    table = _read_table(args.counts)
    ratios = normalize(table, args.baseline)
    geomeans = isa_geomeans(ratios, table.isas)
    return render_compare(ratios, geomeans, table.benchmarks, table.isas,
                          args.baseline, args.out or "csv")


def cmd_cdf(args) -> str:
    items = _read_items(args)
    points = list(enumerate(cdf(items, args.top), 1))
    return render_cdf(points, args.out or "csv")


COMMANDS = {"analyze": cmd_analyze, "nearmiss": cmd_nearmiss,
            "compare": cmd_compare, "cdf": cmd_cdf}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        output = COMMANDS[args.command](args)
    except (InputError, TraceError, TableError, ValueError) as exc:
        print(f"rvfuse: error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(output)
    return 0


if __name__ == "__main__":
    sys.exit(main())

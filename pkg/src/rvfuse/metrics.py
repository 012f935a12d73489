"""Dynamic counts, bytes, CDFs and cross-ISA normalization."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .fusion import FusionMatch, FusionStats
from .trace import WeightedInstruction


def dynamic_count(items: Iterable[WeightedInstruction]) -> int:
    return sum(w.count for w in items)


def dynamic_bytes(items: Iterable[WeightedInstruction]) -> int:
    return sum(w.count * w.instr.encoded_length for w in items)


def effective_count(total: int, matches: Iterable[FusionMatch]) -> int:
    """Instructions left after every fused group collapses to one macro-op."""
    eff = total - sum(m.weight * (m.arity - 1) for m in matches)
    if eff < 0:
        raise ValueError("negative effective count: matches overlap or exceed the trace")
    return eff


def cdf(items: Sequence[WeightedInstruction], top_n: int) -> list[float]:
    """Cumulative fraction of the dynamic count covered by the top_n hottest pcs.

    Ties are broken by ascending pc.  When fewer than ``top_n`` instructions
    exist the sequence is padded with its final value.
    """
    if top_n < 1:
        raise ValueError("top_n must be at least 1")
    total = dynamic_count(items)
    if total == 0:
        return []
    ranked = sorted(items, key=lambda w: (-w.count, w.pc))
    out: list[float] = []
    running = 0
    for w in ranked[:top_n]:
        running += w.count
        out.append(running / total)
    out.extend([out[-1]] * (top_n - len(out)))
    return out


# --- cross-ISA tables ------------------------------------------------------

class TableError(ValueError):
    pass


@dataclass
class IsaCountTable:
    """Per-benchmark dynamic counts, one row per (benchmark, isa).

    Counts are kept as exact fractions parsed from their decimal text, so
    ratios are independent of any common scale factor.
    """

    counts: dict = field(default_factory=dict)   # (benchmark, isa) -> Fraction
    benchmarks: list = field(default_factory=list)
    isas: list = field(default_factory=list)

    def add(self, benchmark: str, isa: str, count) -> None:
        count = Fraction(count)
        if count <= 0:
            raise TableError(f"count for {benchmark}/{isa} must be positive")
        if (benchmark, isa) in self.counts:
            raise TableError(f"duplicate row for {benchmark}/{isa}")
        self.counts[benchmark, isa] = count
        if benchmark not in self.benchmarks:
            self.benchmarks.append(benchmark)
        if isa not in self.isas:
            self.isas.append(isa)

    def scaled(self, k) -> IsaCountTable:
        out = IsaCountTable()
        for (b, isa), c in self.counts.items():
            out.add(b, isa, c * Fraction(k))
        return out

    @classmethod
    def from_rows(cls, rows: Iterable[tuple]) -> IsaCountTable:
        table = cls()
        for benchmark, isa, count in rows:
            table.add(benchmark, isa, count)
        return table

    @classmethod
    def from_csv(cls, stream) -> IsaCountTable:
        """Parse ``benchmark,isa,count`` CSV text (or an open text file)."""
        text = stream if isinstance(stream, str) else stream.read()
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header] != ["benchmark", "isa", "count"]:
            raise TableError("CSV header must be 'benchmark,isa,count'")
        table = cls()
        for lineno, row in enumerate(reader, 2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 3:
                raise TableError(f"line {lineno}: expected 3 fields, got {len(row)}")
            benchmark, isa, count_text = (c.strip() for c in row)
            if not benchmark or not isa:
                raise TableError(f"line {lineno}: empty benchmark or isa")
            try:
                count = Fraction(count_text)
            except (ValueError, ZeroDivisionError):
                raise TableError(f"line {lineno}: bad count {count_text!r}") from None
            try:
                table.add(benchmark, isa, count)
            except TableError as exc:
                raise TableError(f"line {lineno}: {exc}") from None
        if not table.counts:
            raise TableError("CSV has no data rows")
        return table


def normalize(table: IsaCountTable, baseline_isa: str) -> dict:
    """``{(benchmark, isa): count / baseline count}`` at full precision."""
    ratios = {}
    for b in table.benchmarks:
        base = table.counts.get((b, baseline_isa))
        if base is None:
            raise TableError(f"benchmark {b!r} has no {baseline_isa!r} baseline row")
        for isa in table.isas:
            if (b, isa) in table.counts:
                ratios[b, isa] = float(table.counts[b, isa] / base)
    return ratios


def geomean(values: Iterable[float]) -> float:
    values = list(values)
    if not values:
        raise ValueError("geomean of no values")
    if any(v <= 0 for v in values):
        raise ValueError("geomean requires positive values")
    return math.exp(math.fsum(math.log(v) for v in values) / len(values))


def isa_geomeans(ratios: Mapping, isas: Sequence[str]) -> dict:
    out = {}
    for isa in isas:
        vals = [r for (_, i), r in ratios.items() if i == isa]
        if vals:
            out[isa] = geomean(vals)
    return out


# --- ARMv8 synthetic micro-ops --------------------------------------------

# Extra micro-ops per instruction: one per register write-back beyond the
# first.  Stores (and their address write-back) are assumed to crack into a
# single micro-op.
ARMV8_EXTRA_UOPS = {
    "ld": 0, "ldia": 1, "ldp": 1, "ldpia": 2,
    "st": 0, "stia": 0, "stp": 0, "stpia": 0,
}


def armv8_uop_adjust(categories: Mapping[str, float]) -> float:
    """Percent increase in operation count from cracking multi-write loads.

    ``categories`` maps the memory-instruction classes (ld, ldia, ldp, ldpia,
    st, stia, stp, stpia) to their share of all instructions, in percent.
    Missing categories count as zero.
    """
    unknown = set(categories) - set(ARMV8_EXTRA_UOPS)
    if unknown:
        raise ValueError(f"unknown categories: {sorted(unknown)}")
    total = 0.0
    for name, pct in categories.items():
        if pct < 0:
            raise ValueError(f"negative percentage for {name}")
        total += ARMV8_EXTRA_UOPS[name] * pct
    return total


# --- report ----------------------------------------------------------------

@dataclass
class MetricsReport:
    total_count: int
    total_bytes: int
    bytes_per_instruction: float
    effective_count: int
    macro_op_ratio: float
    per_idiom: dict                 # idiom name -> {"matches", "weighted", "reduction_pct"}
    cdf_points: list                # [(rank, cumulative fraction)]
    ratios: dict | None = None      # (benchmark, isa) -> ratio
    geomeans: dict | None = None    # isa -> geomean ratio
    baseline: str | None = None


def build_report(items: Sequence[WeightedInstruction], stats: FusionStats,
                 table: IsaCountTable | None = None, baseline: str = "x86-64",
                 top_n: int = 100) -> MetricsReport:
    if not items:
        raise ValueError("empty trace")
    total = dynamic_count(items)
    if stats.total != total:
        raise ValueError("fusion statistics come from a different trace")
    nbytes = dynamic_bytes(items)
    eff = effective_count(total, stats.matches)
    per = {k.value: {"matches": s.matches, "weighted": s.weighted,
                     "reduction_pct": s.reduction_pct}
           for k, s in stats.per_idiom.items()}
    points = [(rank, frac) for rank, frac in enumerate(cdf(items, top_n), 1)]
    report = MetricsReport(total, nbytes, nbytes / total, eff, eff / total, per, points)
    if table is not None:
        report.ratios = normalize(table, baseline)
        report.geomeans = isa_geomeans(report.ratios, table.isas)
        report.baseline = baseline
    return report

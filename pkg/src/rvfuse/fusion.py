"""Macro-op fusion idiom matching, selection, liveness and near-miss search."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .decoder import Instruction, OpClass
from .trace import Block


class IdiomKind(enum.Enum):
    LEA = "lea"
    INDEXED_LOAD = "indexed-load"
    INDEXED_LOAD_LONG = "indexed-load-long"
    CLEAR_UPPER_WORD = "clear-upper-word"
    CLEAR_UPPER_SHIFT = "clear-upper-shift"
    LUI_IMMOP = "lui-immop"
    LUI_LOAD = "lui-load"
    AUIPC_LOAD = "auipc-load"
    AUIPC_JALR = "auipc-jalr"
    MULH_MUL = "mulh-mul"
    DIV_REM = "div-rem"
    LOAD_PAIR = "load-pair"
    STORE_PAIR = "store-pair"
    POST_INDEXED_LOAD = "post-indexed-load"
    POST_INDEXED_STORE = "post-indexed-store"

    @property
    def arity(self) -> int:
        return 3 if self is IdiomKind.INDEXED_LOAD_LONG else 2

    @classmethod
    def from_name(cls, name: str) -> IdiomKind:
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ValueError(f"unknown idiom: {name!r}") from None


# idioms writing two registers; only selected when multi-writeback is allowed
MULTI_WRITEBACK = frozenset({IdiomKind.MULH_MUL, IdiomKind.DIV_REM,
                             IdiomKind.LOAD_PAIR, IdiomKind.POST_INDEXED_LOAD})

# idioms whose later instruction clobbers the first one's destination
SINGLE_WRITE = frozenset({
    IdiomKind.LEA, IdiomKind.INDEXED_LOAD, IdiomKind.INDEXED_LOAD_LONG,
    IdiomKind.CLEAR_UPPER_WORD, IdiomKind.CLEAR_UPPER_SHIFT, IdiomKind.LUI_IMMOP,
    IdiomKind.LUI_LOAD, IdiomKind.AUIPC_LOAD,
})

DEFAULT_IDIOMS = frozenset({IdiomKind.LEA, IdiomKind.INDEXED_LOAD,
                            IdiomKind.INDEXED_LOAD_LONG, IdiomKind.CLEAR_UPPER_WORD})

DEFAULT_PRIORITY = (IdiomKind.INDEXED_LOAD_LONG,) + tuple(
    k for k in IdiomKind if k is not IdiomKind.INDEXED_LOAD_LONG)


@dataclass(frozen=True)
class FusionConfig:
    enabled: frozenset = DEFAULT_IDIOMS
    allow_multi_writeback: bool = False
    priority: tuple = DEFAULT_PRIORITY

    def __post_init__(self):
        object.__setattr__(self, "enabled", frozenset(self.enabled))
        object.__setattr__(self, "priority", tuple(self.priority))
        if len(set(self.priority)) != len(self.priority):
            raise ValueError("priority lists an idiom more than once")
        missing = self.enabled - set(self.priority)
        if missing:
            names = ", ".join(sorted(k.value for k in missing))
            raise ValueError(f"priority is missing enabled idioms: {names}")

    @property
    def active(self) -> tuple[IdiomKind, ...]:
        """Idioms selection will try, in priority order."""
        return tuple(k for k in self.priority if k in self.enabled
                     and (self.allow_multi_writeback or k not in MULTI_WRITEBACK))

    @classmethod
    def from_names(cls, spec: str, allow_multi_writeback: bool = False) -> FusionConfig:
        """Build a config from ``all``, ``none``, ``default`` or a comma list."""
        spec = spec.strip().lower()
        if spec == "all":
            enabled = frozenset(IdiomKind)
        elif spec == "none":
            enabled = frozenset()
        elif spec == "default":
            enabled = DEFAULT_IDIOMS
        else:
            enabled = frozenset(IdiomKind.from_name(n) for n in spec.split(",") if n.strip())
        return cls(enabled, allow_multi_writeback)


@dataclass(frozen=True)
class FusionMatch:
    block_index: int
    start: int
    arity: int
    kind: IdiomKind
    weight: int
    writebacks: int

    @property
    def stop(self) -> int:
        return self.start + self.arity

    @property
    def eliminated(self) -> int:
        """Dynamic instructions this fusion removes from the effective count."""
        return self.weight * (self.arity - 1)


@dataclass(frozen=True)
class NearMiss:
    block_index: int
    start: int
    kind: IdiomKind
    blocking_register: int
    suggested_rename: int
    weight: int


# --- matching --------------------------------------------------------------

def _instrs(block) -> Sequence[Instruction]:
    if isinstance(block, Block):
        return block.instrs
    return [getattr(x, "instr", x) for x in block]


def _counts(block) -> list[int]:
    if isinstance(block, Block):
        return block.counts
    return [getattr(x, "count", 1) for x in block]


def _dest(i: Instruction) -> int | None:
    """Non-zero integer destination, or None."""
    rd = i.int_rd
    return rd if rd else None


def _lea(a: Instruction, b: Instruction) -> bool:
    rd = _dest(a)
    return (rd is not None and a.mnemonic == "slli" and a.imm in (1, 2, 3)
            and b.mnemonic == "add" and b.rd == rd and rd in (b.rs1, b.rs2))


def _clobbering_load(a: Instruction, b: Instruction, zero_offset: bool) -> bool:
    rd = _dest(a)
    return (rd is not None and b.opclass is OpClass.LOAD and b.rs1 == rd
            and b.rd == rd and (b.imm == 0 or not zero_offset))


def _clear_upper(a: Instruction, b: Instruction, shifts) -> bool:
    rd = _dest(a)
    return (rd is not None and a.mnemonic == "slli" and a.imm == 32
            and b.mnemonic == "srli" and b.rd == rd and b.rs1 == rd and b.imm in shifts)


def _same_sources_distinct_dests(a: Instruction, b: Instruction) -> bool:
    # a's destination must not overwrite an operand b still needs
    return (a.rs1 == b.rs1 and a.rs2 == b.rs2 and bool(a.rd) and bool(b.rd)
            and a.rd != b.rd and a.rd not in (a.rs1, a.rs2))


_REM_FOR = {"div": "rem", "divu": "remu"}


def _match_pair(kind: IdiomKind, a: Instruction, b: Instruction) -> int | None:
    """Write-back count if (a, b) forms ``kind``, else None."""
    if a.opclass is OpClass.OTHER or b.opclass is OpClass.OTHER:
        return None
    K = IdiomKind
    if kind is K.LEA:
        return 1 if _lea(a, b) else None
    if kind is K.INDEXED_LOAD:
        return 1 if a.mnemonic == "add" and _clobbering_load(a, b, True) else None
    if kind is K.CLEAR_UPPER_WORD:
        return 1 if _clear_upper(a, b, (32,)) else None
    if kind is K.CLEAR_UPPER_SHIFT:
        return 1 if _clear_upper(a, b, (29, 30, 31, 32)) else None
    if kind is K.LUI_IMMOP:
        rd = _dest(a)
        ok = (rd is not None and a.opclass is OpClass.LUI
              and b.opclass is OpClass.REG_IMM and b.rd == rd and b.rs1 == rd)
        return 1 if ok else None
    if kind is K.LUI_LOAD:
        return 1 if a.opclass is OpClass.LUI and _clobbering_load(a, b, False) else None
    if kind is K.AUIPC_LOAD:
        return 1 if a.opclass is OpClass.AUIPC and _clobbering_load(a, b, False) else None
    if kind is K.AUIPC_JALR:
        rd = _dest(a)
        if (rd is None or a.opclass is not OpClass.AUIPC or b.opclass is not OpClass.JALR
                or b.rs1 != rd or b.rd not in (rd, 1)):
            return None
        return 1 if b.rd == rd else 2
    if kind is K.MULH_MUL:
        ok = a.mnemonic in ("mulh", "mulhu", "mulhsu") and b.mnemonic == "mul"
        return 2 if ok and _same_sources_distinct_dests(a, b) else None
    if kind is K.DIV_REM:
        ok = _REM_FOR.get(a.mnemonic) == b.mnemonic
        return 2 if ok and _same_sources_distinct_dests(a, b) else None
    if kind is K.LOAD_PAIR:
        if not (a.is_load and b.opclass is a.opclass and a.access_size == b.access_size
                and a.rs1 == b.rs1 and a.rd != b.rd
                and abs(b.imm - a.imm) == a.access_size):
            return None
        if not a.fp_rd and (a.rd == a.rs1 or 0 in (a.rd, b.rd)):
            return None
        return 2
    if kind is K.STORE_PAIR:
        ok = (a.is_store and b.opclass is a.opclass and a.access_size == b.access_size
              and a.rs1 == b.rs1 and abs(b.imm - a.imm) == a.access_size)
        return 0 if ok else None
    if kind in (K.POST_INDEXED_LOAD, K.POST_INDEXED_STORE):
        first_ok = a.is_load if kind is K.POST_INDEXED_LOAD else a.is_store
        base = a.rs1
        if not (first_ok and base and b.mnemonic == "addi" and b.rd == base and b.rs1 == base):
            return None
        if kind is K.POST_INDEXED_STORE:
            return 1
        if not a.fp_rd and a.rd in (base, 0):
            return None
        return 2
    raise ValueError(f"{kind} is not a two-instruction idiom")


def match_at(block, i: int, kind: IdiomKind) -> tuple[int, int] | None:
    """Return ``(arity, writebacks)`` if ``kind`` matches at index ``i``."""
    instrs = _instrs(block)
    if i < 0 or i + kind.arity > len(instrs):
        return None
    a, b = instrs[i], instrs[i + 1]
    if kind is IdiomKind.INDEXED_LOAD_LONG:
        return (3, 1) if _lea(a, b) and _clobbering_load(a, instrs[i + 2], True) else None
    wb = _match_pair(kind, a, b)
    return None if wb is None else (2, wb)


def select_fusions(block, config: FusionConfig = FusionConfig(),
                   block_index: int = 0) -> list[FusionMatch]:
    """Greedy left-to-right, priority-ordered, non-overlapping selection."""
    instrs = _instrs(block)
    counts = _counts(block)
    kinds = config.active
    matches: list[FusionMatch] = []
    i = 0
    while i < len(instrs):
        for kind in kinds:
            hit = match_at(instrs, i, kind)
            if hit is not None:
                arity, wb = hit
                matches.append(FusionMatch(block_index, i, arity, kind,
                                           min(counts[i:i + arity]), wb))
                i += arity
                break
        else:
            i += 1
    return matches


# --- liveness --------------------------------------------------------------

ALL_REGISTERS = frozenset(range(1, 32))


def uses(i: Instruction) -> frozenset:
    return frozenset(r for r in i.int_sources() if r)


def defs(i: Instruction) -> frozenset:
    rd = _dest(i)
    return frozenset() if rd is None else frozenset({rd})


def liveness(block) -> list[frozenset]:
    """Integer registers live before each instruction.

    Intra-block backward dataflow with every register (x1..x31) live at the
    block exit.  ``x0`` is never live.  "other" instructions are opaque and
    neither read nor write tracked registers.
    """
    instrs = _instrs(block)
    live = ALL_REGISTERS
    out: list[frozenset] = [frozenset()] * len(instrs)
    for idx in range(len(instrs) - 1, -1, -1):
        i = instrs[idx]
        live = (live - defs(i)) | uses(i)
        out[idx] = live
    return out


def live_after(live_before: Sequence[frozenset], idx: int) -> frozenset:
    return live_before[idx + 1] if idx + 1 < len(live_before) else ALL_REGISTERS


# --- near misses -----------------------------------------------------------

def rename_pair(a: Instruction, b: Instruction) -> tuple[Instruction, Instruction]:
    """Retarget a's destination to b's, rewriting b's reads of it to match."""
    old, new = a.rd, b.rd
    b2 = b.replace(rs1=new if b.rs1 == old else b.rs1,
                   rs2=new if (b.rs2 == old and not b.fp_rs2) else b.rs2)
    return a.replace(rd=new), b2


def near_misses(block, config: FusionConfig = FusionConfig(), block_index: int = 0,
                selected: Iterable[FusionMatch] | None = None) -> list[NearMiss]:
    """Adjacent pairs that would fuse if the first destination were renamed.

    The rewrite renames the first instruction's destination to the second
    one's.  It is only proposed when the original register is dead after the
    pair and the second instruction does not also read its own destination,
    so block semantics are preserved.
    """
    instrs = _instrs(block)
    counts = _counts(block)
    if selected is None:
        selected = select_fusions(block, config, block_index)
    covered = {j for m in selected for j in range(m.start, m.stop)}
    kinds = [k for k in config.active if k in SINGLE_WRITE and k.arity == 2]
    live = liveness(instrs)
    found: list[NearMiss] = []
    for i in range(len(instrs) - 1):
        if i in covered or i + 1 in covered:
            continue
        a, b = instrs[i], instrs[i + 1]
        old, new = _dest(a), _dest(b)
        if old is None or new is None or old == new:
            continue
        if old not in uses(b) or new in uses(b):
            continue
        if old in live_after(live, i + 1):
            continue
        a2, b2 = rename_pair(a, b)
        for kind in kinds:
            if _match_pair(kind, a2, b2) is not None:
                found.append(NearMiss(block_index, i, kind, old, new, min(counts[i:i + 2])))
                break
    return found


# --- statistics ------------------------------------------------------------

@dataclass
class IdiomStat:
    kind: IdiomKind
    matches: int = 0
    weighted: int = 0
    eliminated: int = 0
    reduction_pct: float = 0.0


@dataclass
class FusionStats:
    total: int
    effective: int
    per_idiom: dict = field(default_factory=dict)
    matches: list = field(default_factory=list)

    @property
    def macro_op_ratio(self) -> float:
        return self.effective / self.total if self.total else 1.0


def analyze_blocks(blocks: Sequence[Block],
                   config: FusionConfig = FusionConfig()) -> list[FusionMatch]:
    return [m for bi, blk in enumerate(blocks) for m in select_fusions(blk, config, bi)]


def fusion_stats(blocks: Sequence[Block], config: FusionConfig = FusionConfig(),
                 matches: Sequence[FusionMatch] | None = None) -> FusionStats:
    """Per-idiom weighted counts, reductions and the macro-op ratio."""
    if matches is None:
        matches = analyze_blocks(blocks, config)
    total = sum(w.count for blk in blocks for w in blk)
    per = {k: IdiomStat(k) for k in config.priority if k in config.enabled}
    eliminated = 0
    for m in matches:
        stat = per.setdefault(m.kind, IdiomStat(m.kind))
        stat.matches += 1
        stat.weighted += m.weight
        stat.eliminated += m.eliminated
        eliminated += m.eliminated
    for stat in per.values():
        stat.reduction_pct = 100.0 * stat.eliminated / total if total else 0.0
    if eliminated > total:
        raise ValueError("fusions eliminate more instructions than were executed")
    return FusionStats(total, total - eliminated, per, list(matches))

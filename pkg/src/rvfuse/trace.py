"""Weighted instruction streams and straight-line block reconstruction.

Two input formats are understood.  The canonical histogram format has one
executed instruction per line::

    # pc       encoding  count
    80000000   00000013  5
    80000004   0001      5

and the assembly format used for hand-written golden traces::

    @base 35a58
    lw a4, 0(t4)           ; count=100
    35a5c: addw a5, s3, a4 ; count=100
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .decoder import AsmError, EncodingError, Instruction, assemble_line, decode, instr_length


class TraceError(ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno else message)


@dataclass(frozen=True)
class WeightedInstruction:
    pc: int
    instr: Instruction
    count: int

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f"count must be >= 1, got {self.count}")
        if self.pc % 2:
            raise ValueError(f"pc 0x{self.pc:x} is not 2-byte aligned")

    @property
    def next_pc(self) -> int:
        return self.pc + self.instr.encoded_length


@dataclass(frozen=True)
class Block:
    """A pc-contiguous run of instructions with control flow only at its end."""

    start_pc: int
    items: tuple[WeightedInstruction, ...]

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    @property
    def instrs(self) -> list[Instruction]:
        return [w.instr for w in self.items]

    @property
    def counts(self) -> list[int]:
        return [w.count for w in self.items]


def _lines(stream) -> Iterable[str]:
    if isinstance(stream, str):
        return stream.splitlines()
    return stream


def _finish(items: list[WeightedInstruction], linenos: dict[int, int]) -> list[WeightedInstruction]:
    items.sort(key=lambda w: w.pc)
    for prev, cur in zip(items, items[1:]):
        if cur.pc == prev.pc:
            raise TraceError(f"duplicate pc 0x{cur.pc:x}", linenos[id(cur)])
        if cur.pc < prev.next_pc:
            raise TraceError(
                f"instruction at 0x{cur.pc:x} overlaps the one at 0x{prev.pc:x}",
                linenos[id(cur)])
    return items


def parse_trace(stream) -> list[WeightedInstruction]:
    """Parse the ``PC_HEX ENC_HEX COUNT_DEC`` histogram format."""
    items: list[WeightedInstruction] = []
    linenos: dict[int, int] = {}
    for lineno, line in enumerate(_lines(stream), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 3:
            raise TraceError(f"expected 'PC ENCODING COUNT', got {line!r}", lineno)
        pc_text, enc_text, count_text = fields
        try:
            pc = int(pc_text, 16)
            raw = int(enc_text, 16)
            count = int(count_text, 10)
        except ValueError:
            raise TraceError(f"malformed field in {line!r}", lineno) from None
        if pc_text.lower().startswith("0x") or enc_text.lower().startswith("0x"):
            raise TraceError("hex fields take no 0x prefix", lineno)
        if len(enc_text) not in (4, 8):
            raise TraceError(f"encoding must be 4 or 8 hex digits, got {enc_text!r}", lineno)
        try:
            length = instr_length(raw & 0xFFFF)
        except EncodingError as exc:
            raise TraceError(str(exc), lineno) from None
        if length * 2 != len(enc_text):
            raise TraceError(
                f"encoding {enc_text} has {len(enc_text) // 2} bytes but its low bits "
                f"say {length}", lineno)
        if count < 1:
            raise TraceError("count must be at least 1", lineno)
        if pc % 2:
            raise TraceError(f"pc 0x{pc:x} is not 2-byte aligned", lineno)
        item = WeightedInstruction(pc, decode(raw, length), count)
        linenos[id(item)] = lineno
        items.append(item)
    return _finish(items, linenos)


_COUNT_RE = re.compile(r"^count\s*=\s*(\d+)$")
_PC_RE = re.compile(r"^\s*([0-9a-fA-F]+)\s*:(.*)$")


def _strip_comment(line: str) -> str:
    for marker in ("//", "#"):
        line = line.split(marker, 1)[0]
    return line.strip()


def parse_asm_trace(stream, base: int = 0) -> list[WeightedInstruction]:
    """Parse the assembly trace format.

    Lines are ``[PC_HEX:] <asm> [; count=N]``.  Lines without a pc are laid out
    right after the previous instruction, starting from ``@base PC_HEX`` (or
    ``base``).  ``//`` and ``#`` start comments.
    """
    items: list[WeightedInstruction] = []
    linenos: dict[int, int] = {}
    cursor = base
    for lineno, line in enumerate(_lines(stream), 1):
        line = _strip_comment(line)
        if not line:
            continue
        if line.startswith("@base"):
            parts = line.split()
            try:
                if len(parts) != 2:
                    raise ValueError
                cursor = int(parts[1], 16)
            except ValueError:
                raise TraceError(f"bad directive {line!r}", lineno) from None
            continue
        stmt, _, annot = line.partition(";")
        count = 1
        if annot.strip():
            m = _COUNT_RE.match(annot.strip())
            if not m:
                raise TraceError(f"bad annotation {annot.strip()!r}", lineno)
            count = int(m.group(1))
            if count < 1:
                raise TraceError("count must be at least 1", lineno)
        pc = cursor
        m = _PC_RE.match(stmt)
        if m:
            pc = int(m.group(1), 16)
            stmt = m.group(2)
        if pc % 2:
            raise TraceError(f"pc 0x{pc:x} is not 2-byte aligned", lineno)
        try:
            instr = assemble_line(stmt, pc=pc)
        except AsmError as exc:
            raise TraceError(str(exc), lineno) from None
        item = WeightedInstruction(pc, instr, count)
        linenos[id(item)] = lineno
        items.append(item)
        cursor = item.next_pc
    return _finish(items, linenos)


def segment_blocks(items: Sequence[WeightedInstruction]) -> list[Block]:
    """Split a pc-sorted stream into blocks.

    A block ends after every branch/jal/jalr (taken-ness is unknown in a
    histogram, so every control transfer is treated as a possible exit) and
    wherever the next pc is not the fall-through address.
    """
    blocks: list[Block] = []
    run: list[WeightedInstruction] = []
    for item in items:
        if run and (run[-1].instr.is_control or run[-1].next_pc != item.pc):
            blocks.append(Block(run[0].pc, tuple(run)))
            run = []
        run.append(item)
    if run:
        blocks.append(Block(run[0].pc, tuple(run)))
    return blocks


def load(path, fmt: str | None = None) -> list[WeightedInstruction]:
    """Read a trace file; ``fmt`` is "trace" or "asm" (guessed from the suffix)."""
    from pathlib import Path

    path = Path(path)
    if fmt is None:
        fmt = "asm" if path.suffix in (".asm", ".s", ".S") else "trace"
    text = path.read_text(encoding="utf-8")
    if fmt == "asm":
        return parse_asm_trace(text)
    if fmt == "trace":
        return parse_trace(text)
    raise ValueError(f"unknown trace format: {fmt!r}")

"""Canonical instruction representation and register naming."""

from __future__ import annotations

import enum
from dataclasses import dataclass


class OpClass(enum.Enum):
    REG_REG = "reg-reg"
    REG_IMM = "reg-imm"
    LOAD = "load"
    STORE = "store"
    BRANCH = "branch"
    JAL = "jal"
    JALR = "jalr"
    LUI = "lui"
    AUIPC = "auipc"
    MUL = "mul"
    DIV = "div"
    FP_LOAD = "fp-load"
    FP_STORE = "fp-store"
    OTHER = "other"


CONTROL_FLOW = frozenset({OpClass.BRANCH, OpClass.JAL, OpClass.JALR})

ABI_NAMES = (
    "zero", "ra", "sp", "gp", "tp", "t0", "t1", "t2",
    "s0", "s1", "a0", "a1", "a2", "a3", "a4", "a5",
    "a6", "a7", "s2", "s3", "s4", "s5", "s6", "s7",
    "s8", "s9", "s10", "s11", "t3", "t4", "t5", "t6",
)

FP_ABI_NAMES = (
    "ft0", "ft1", "ft2", "ft3", "ft4", "ft5", "ft6", "ft7",
    "fs0", "fs1", "fa0", "fa1", "fa2", "fa3", "fa4", "fa5",
    "fa6", "fa7", "fs2", "fs3", "fs4", "fs5", "fs6", "fs7",
    "fs8", "fs9", "fs10", "fs11", "ft8", "ft9", "ft10", "ft11",
)

# bytes moved by each memory mnemonic
ACCESS_SIZE = {
    "lb": 1, "lbu": 1, "lh": 2, "lhu": 2, "lw": 4, "lwu": 4, "ld": 8,
    "sb": 1, "sh": 2, "sw": 4, "sd": 8,
    "flw": 4, "fld": 8, "fsw": 4, "fsd": 8,
}


def reg_name(index: int, fp: bool = False) -> str:
    return (FP_ABI_NAMES if fp else ABI_NAMES)[index]


@dataclass(frozen=True)
class Instruction:
    """One decoded RISC-V instruction.

    ``mnemonic`` is always the base (uncompressed) mnemonic, so a ``c.mv``
    decodes to ``add`` with ``encoded_length == 2``.  Register fields hold
    indices 0..31 or ``None`` when the format has no such operand.  The
    ``fp_rd``/``fp_rs2`` flags mark operands living in the floating-point
    register file (FP loads write an f-register, FP stores read one).
    """

    mnemonic: str
    opclass: OpClass
    rd: int | None = None
    rs1: int | None = None
    rs2: int | None = None
    imm: int | None = None
    encoded_length: int = 4
    raw: int = 0
    fp_rd: bool = False
    fp_rs2: bool = False

    def __post_init__(self):
        for reg in (self.rd, self.rs1, self.rs2):
            if reg is not None and not 0 <= reg <= 31:
                raise ValueError(f"register index out of range: {reg}")
        if self.encoded_length not in (2, 4):
            raise ValueError(f"bad encoded length: {self.encoded_length}")

    @property
    def is_compressed(self) -> bool:
        return self.encoded_length == 2

    @property
    def is_control(self) -> bool:
        return self.opclass in CONTROL_FLOW

    @property
    def is_load(self) -> bool:
        return self.opclass in (OpClass.LOAD, OpClass.FP_LOAD)

    @property
    def is_store(self) -> bool:
        return self.opclass in (OpClass.STORE, OpClass.FP_STORE)

    @property
    def access_size(self) -> int | None:
        return ACCESS_SIZE.get(self.mnemonic)

    @property
    def int_rd(self) -> int | None:
        """Integer destination register, or None (FP destinations excluded)."""
        if self.rd is None or self.fp_rd:
            return None
        return self.rd

    def int_sources(self) -> tuple[int, ...]:
        """Integer registers read by this instruction."""
        srcs = []
        if self.rs1 is not None:
            srcs.append(self.rs1)
        if self.rs2 is not None and not self.fp_rs2:
            srcs.append(self.rs2)
        return tuple(srcs)

    def semantic(self) -> tuple:
        """Fields that must agree between a compressed form and its expansion."""
        return (self.mnemonic, self.opclass, self.rd, self.rs1, self.rs2,
                self.imm, self.fp_rd, self.fp_rs2)

    def replace(self, **changes) -> Instruction:
        from dataclasses import replace
        return replace(self, **changes)

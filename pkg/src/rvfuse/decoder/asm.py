"""Small assembler/disassembler for the decoded subset.

It exists to write test corpora and golden traces by hand.  Assembly goes
through real machine encodings: text is parsed, encoded to 16/32 bits and
decoded back, so every assembled Instruction carries a genuine ``raw``.

Branch and jump targets are absolute addresses written in hex, with or
without a ``0x`` prefix, as in objdump listings (``bnez a5, 35b00``).  They
are resolved against the ``pc`` given to :func:`assemble_line`.
"""

from __future__ import annotations

import re

from .decode import (SUPPORTED_MNEMONICS, decode16, decode32, op_class_of,
                     rvc_name, sign_extend)
from .isa import ABI_NAMES, FP_ABI_NAMES, Instruction, OpClass, reg_name


class AsmError(ValueError):
    pass


_INT_REGS = {name: i for i, name in enumerate(ABI_NAMES)}
_INT_REGS.update({f"x{i}": i for i in range(32)})
_INT_REGS["fp"] = 8
_FP_REGS = {name: i for i, name in enumerate(FP_ABI_NAMES)}
_FP_REGS.update({f"f{i}": i for i in range(32)})

_MEM_RE = re.compile(r"^(?P<off>[^()]*)\((?P<base>[^()]+)\)$")

_XLEN_MASK = (1 << 64) - 1


def _reg(tok: str, fp: bool = False) -> int:
    table = _FP_REGS if fp else _INT_REGS
    tok = tok.strip().lower()
    if tok not in table:
        kind = "floating-point" if fp else "integer"
        raise AsmError(f"bad {kind} register: {tok!r}")
    return table[tok]


def _imm(tok: str) -> int:
    tok = tok.strip()
    try:
        return int(tok, 0)
    except ValueError:
        raise AsmError(f"bad immediate: {tok!r}") from None


def _mem(tok: str) -> tuple[int, int]:
    m = _MEM_RE.match(tok.strip())
    if not m:
        raise AsmError(f"bad memory operand: {tok!r}")
    off = m.group("off").strip()
    return (_imm(off) if off else 0), _reg(m.group("base"))


def _target(tok: str, pc: int) -> int:
    tok = tok.strip().lower()
    if tok.startswith("0x"):
        tok = tok[2:]
    try:
        target = int(tok, 16)
    except ValueError:
        raise AsmError(f"bad branch target: {tok!r}") from None
    return ((target - pc + (1 << 63)) & _XLEN_MASK) - (1 << 63)


def _check_range(value: int, bits: int, what: str, *, signed=True, align=1):
    lo, hi = (-(1 << (bits - 1)), (1 << (bits - 1)) - 1) if signed else (0, (1 << bits) - 1)
    if not lo <= value <= hi:
        raise AsmError(f"{what} {value} out of range [{lo}, {hi}]")
    if value % align:
        raise AsmError(f"{what} {value} not a multiple of {align}")


# --- 32-bit encoding -------------------------------------------------------

_FUNCT3 = {
    "lb": 0, "lh": 1, "lw": 2, "ld": 3, "lbu": 4, "lhu": 5, "lwu": 6,
    "flw": 2, "fld": 3, "sb": 0, "sh": 1, "sw": 2, "sd": 3, "fsw": 2, "fsd": 3,
    "beq": 0, "bne": 1, "blt": 4, "bge": 5, "bltu": 6, "bgeu": 7,
    "addi": 0, "slti": 2, "sltiu": 3, "xori": 4, "ori": 6, "andi": 7,
    "slli": 1, "srli": 5, "srai": 5, "addiw": 0, "slliw": 1, "srliw": 5, "sraiw": 5,
}
_R_TYPE = {
    "add": (0x33, 0x00, 0), "sub": (0x33, 0x20, 0), "sll": (0x33, 0x00, 1),
    "slt": (0x33, 0x00, 2), "sltu": (0x33, 0x00, 3), "xor": (0x33, 0x00, 4),
    "srl": (0x33, 0x00, 5), "sra": (0x33, 0x20, 5), "or": (0x33, 0x00, 6),
    "and": (0x33, 0x00, 7),
    "mul": (0x33, 0x01, 0), "mulh": (0x33, 0x01, 1), "mulhsu": (0x33, 0x01, 2),
    "mulhu": (0x33, 0x01, 3), "div": (0x33, 0x01, 4), "divu": (0x33, 0x01, 5),
    "rem": (0x33, 0x01, 6), "remu": (0x33, 0x01, 7),
    "addw": (0x3B, 0x00, 0), "subw": (0x3B, 0x20, 0), "sllw": (0x3B, 0x00, 1),
    "srlw": (0x3B, 0x00, 5), "sraw": (0x3B, 0x20, 5), "mulw": (0x3B, 0x01, 0),
    "divw": (0x3B, 0x01, 4), "divuw": (0x3B, 0x01, 5), "remw": (0x3B, 0x01, 6),
    "remuw": (0x3B, 0x01, 7),
}


def encode32(mnemonic: str, rd=0, rs1=0, rs2=0, imm=0) -> int:
    """Encode one base instruction.  Register/immediate ranges are checked."""
    rd, rs1, rs2, imm = rd or 0, rs1 or 0, rs2 or 0, imm or 0
    opclass = op_class_of(mnemonic)
    if mnemonic in _R_TYPE:
        opcode, f7, f3 = _R_TYPE[mnemonic]
        return f7 << 25 | rs2 << 20 | rs1 << 15 | f3 << 12 | rd << 7 | opcode
    f3 = _FUNCT3.get(mnemonic, 0)
    if mnemonic in ("slli", "srli", "srai"):
        _check_range(imm, 6, "shift amount", signed=False)
        f6 = 0x10 if mnemonic == "srai" else 0
        return f6 << 26 | imm << 20 | rs1 << 15 | f3 << 12 | rd << 7 | 0x13
    if mnemonic in ("slliw", "srliw", "sraiw"):
        _check_range(imm, 5, "shift amount", signed=False)
        f7 = 0x20 if mnemonic == "sraiw" else 0
        return f7 << 25 | imm << 20 | rs1 << 15 | f3 << 12 | rd << 7 | 0x1B
    if opclass in (OpClass.REG_IMM, OpClass.LOAD, OpClass.FP_LOAD) or mnemonic == "jalr":
        _check_range(imm, 12, "immediate")
        opcode = {OpClass.LOAD: 0x03, OpClass.FP_LOAD: 0x07}.get(opclass)
        if opcode is None:
            opcode = 0x67 if mnemonic == "jalr" else (0x1B if mnemonic == "addiw" else 0x13)
        return (imm & 0xFFF) << 20 | rs1 << 15 | f3 << 12 | rd << 7 | opcode
    if opclass in (OpClass.STORE, OpClass.FP_STORE):
        _check_range(imm, 12, "immediate")
        opcode = 0x23 if opclass is OpClass.STORE else 0x27
        imm &= 0xFFF
        return ((imm >> 5) << 25 | rs2 << 20 | rs1 << 15 | f3 << 12
                | (imm & 0x1F) << 7 | opcode)
    if opclass is OpClass.BRANCH:
        _check_range(imm, 13, "branch offset", align=2)
        imm &= 0x1FFF
        return ((imm >> 12) << 31 | ((imm >> 5) & 0x3F) << 25 | rs2 << 20 | rs1 << 15
                | f3 << 12 | ((imm >> 1) & 0xF) << 8 | ((imm >> 11) & 1) << 7 | 0x63)
    if opclass is OpClass.JAL:
        _check_range(imm, 21, "jump offset", align=2)
        imm &= 0x1FFFFF
        return ((imm >> 20) << 31 | ((imm >> 1) & 0x3FF) << 21 | ((imm >> 11) & 1) << 20
                | ((imm >> 12) & 0xFF) << 12 | rd << 7 | 0x6F)
    if opclass in (OpClass.LUI, OpClass.AUIPC):
        _check_range(imm, 32, "upper immediate", align=1 << 12)
        opcode = 0x37 if opclass is OpClass.LUI else 0x17
        return (imm & 0xFFFFF000) | rd << 7 | opcode
    raise AsmError(f"cannot encode {mnemonic!r}")


# --- 16-bit encoding -------------------------------------------------------

def _creg(r: int, what: str) -> int:
    if r is None or not 8 <= r <= 15:
        raise AsmError(f"{what} must be one of x8..x15 for a compressed encoding")
    return r - 8


def _b(value: int, hi: int, lo: int) -> int:
    return (value >> lo) & ((1 << (hi - lo + 1)) - 1)


# compressed mnemonic -> (base mnemonic, operand syntax)
RVC_FORMS = {
    "c.nop": ("addi", ""),
    "c.addi": ("addi", "rd,imm"),
    "c.addiw": ("addiw", "rd,imm"),
    "c.li": ("addi", "rd,imm"),
    "c.lui": ("lui", "rd,uimm"),
    "c.addi16sp": ("addi", "sp,imm"),
    "c.addi4spn": ("addi", "rd,sp,imm"),
    "c.slli": ("slli", "rd,imm"),
    "c.srli": ("srli", "rd,imm"),
    "c.srai": ("srai", "rd,imm"),
    "c.andi": ("andi", "rd,imm"),
    "c.mv": ("add", "rd,rs2"),
    "c.add": ("add", "rd,rs2"),
    "c.sub": ("sub", "rd,rs2"),
    "c.xor": ("xor", "rd,rs2"),
    "c.or": ("or", "rd,rs2"),
    "c.and": ("and", "rd,rs2"),
    "c.subw": ("subw", "rd,rs2"),
    "c.addw": ("addw", "rd,rs2"),
    "c.lw": ("lw", "load"),
    "c.ld": ("ld", "load"),
    "c.fld": ("fld", "load"),
    "c.sw": ("sw", "store"),
    "c.sd": ("sd", "store"),
    "c.fsd": ("fsd", "store"),
    "c.lwsp": ("lw", "load"),
    "c.ldsp": ("ld", "load"),
    "c.fldsp": ("fld", "load"),
    "c.swsp": ("sw", "store"),
    "c.sdsp": ("sd", "store"),
    "c.fsdsp": ("fsd", "store"),
    "c.beqz": ("beq", "rs1,target"),
    "c.bnez": ("bne", "rs1,target"),
    "c.j": ("jal", "target"),
    "c.jr": ("jalr", "rs1"),
    "c.jalr": ("jalr", "rs1"),
}


def encode16(cname: str, rd=None, rs1=None, rs2=None, imm=0) -> int:
    """Encode a compressed instruction given its expanded operand fields."""
    imm = imm or 0
    if cname == "c.nop":
        return 0x0001
    if cname in ("c.addi", "c.addiw", "c.li", "c.andi"):
        _check_range(imm, 6, "immediate")
        f3 = {"c.addi": 0, "c.addiw": 1, "c.li": 2, "c.andi": 4}[cname]
        if cname == "c.andi":
            return (4 << 13 | _b(imm, 5, 5) << 12 | 2 << 10 | _creg(rd, "rd") << 7
                    | _b(imm, 4, 0) << 2 | 1)
        if cname == "c.addiw" and rd == 0:
            raise AsmError("c.addiw with rd=x0 is reserved")
        return f3 << 13 | _b(imm, 5, 5) << 12 | rd << 7 | _b(imm, 4, 0) << 2 | 1
    if cname == "c.lui":
        if rd == 2:
            raise AsmError("c.lui cannot target sp")
        _check_range(imm, 18, "upper immediate", align=1 << 12)
        if imm == 0:
            raise AsmError("c.lui immediate must be non-zero")
        field = imm >> 12
        return 3 << 13 | _b(field, 5, 5) << 12 | rd << 7 | _b(field, 4, 0) << 2 | 1
    if cname == "c.addi16sp":
        _check_range(imm, 10, "immediate", align=16)
        if imm == 0:
            raise AsmError("c.addi16sp immediate must be non-zero")
        return (3 << 13 | _b(imm, 9, 9) << 12 | 2 << 7 | _b(imm, 4, 4) << 6
                | _b(imm, 6, 6) << 5 | _b(imm, 8, 7) << 3 | _b(imm, 5, 5) << 2 | 1)
    if cname == "c.addi4spn":
        _check_range(imm, 10, "immediate", signed=False, align=4)
        if imm == 0:
            raise AsmError("c.addi4spn immediate must be non-zero")
        return (_b(imm, 5, 4) << 11 | _b(imm, 9, 6) << 7 | _b(imm, 2, 2) << 6
                | _b(imm, 3, 3) << 5 | _creg(rd, "rd") << 2)
    if cname == "c.slli":
        _check_range(imm, 6, "shift amount", signed=False)
        return _b(imm, 5, 5) << 12 | rd << 7 | _b(imm, 4, 0) << 2 | 2
    if cname in ("c.srli", "c.srai"):
        _check_range(imm, 6, "shift amount", signed=False)
        sub = 0 if cname == "c.srli" else 1
        return (4 << 13 | _b(imm, 5, 5) << 12 | sub << 10 | _creg(rd, "rd") << 7
                | _b(imm, 4, 0) << 2 | 1)
    if cname in ("c.sub", "c.xor", "c.or", "c.and", "c.subw", "c.addw"):
        b12, f2 = {"c.sub": (0, 0), "c.xor": (0, 1), "c.or": (0, 2), "c.and": (0, 3),
                   "c.subw": (1, 0), "c.addw": (1, 1)}[cname]
        return (4 << 13 | b12 << 12 | 3 << 10 | _creg(rd, "rd") << 7 | f2 << 5
                | _creg(rs2, "rs2") << 2 | 1)
    if cname in ("c.mv", "c.add", "c.jr", "c.jalr"):
        b12 = 0 if cname in ("c.mv", "c.jr") else 1
        if cname in ("c.jr", "c.jalr"):
            if not rs1:
                raise AsmError(f"{cname} requires a non-zero rs1")
            return 4 << 13 | b12 << 12 | rs1 << 7 | 2
        if not rs2:
            raise AsmError(f"{cname} requires a non-zero rs2")
        return 4 << 13 | b12 << 12 | rd << 7 | rs2 << 2 | 2
    if cname in ("c.lw", "c.sw"):
        _check_range(imm, 7, "offset", signed=False, align=4)
        f3 = 2 if cname == "c.lw" else 6
        r = rd if cname == "c.lw" else rs2
        return (f3 << 13 | _b(imm, 5, 3) << 10 | _creg(rs1, "rs1") << 7
                | _b(imm, 2, 2) << 6 | _b(imm, 6, 6) << 5 | _creg(r, "rd/rs2") << 2)
    if cname in ("c.ld", "c.fld", "c.sd", "c.fsd"):
        _check_range(imm, 8, "offset", signed=False, align=8)
        f3 = {"c.fld": 1, "c.ld": 3, "c.fsd": 5, "c.sd": 7}[cname]
        r = rd if cname in ("c.ld", "c.fld") else rs2
        return (f3 << 13 | _b(imm, 5, 3) << 10 | _creg(rs1, "rs1") << 7
                | _b(imm, 7, 6) << 5 | _creg(r, "rd/rs2") << 2)
    if cname in ("c.lwsp", "c.ldsp", "c.fldsp", "c.swsp", "c.sdsp", "c.fsdsp"):
        if rs1 != 2:
            raise AsmError(f"{cname} base register must be sp")
        if cname == "c.lwsp":
            _check_range(imm, 8, "offset", signed=False, align=4)
            if rd == 0:
                raise AsmError("c.lwsp with rd=x0 is reserved")
            return (2 << 13 | _b(imm, 5, 5) << 12 | rd << 7 | _b(imm, 4, 2) << 4
                    | _b(imm, 7, 6) << 2 | 2)
        if cname in ("c.ldsp", "c.fldsp"):
            _check_range(imm, 9, "offset", signed=False, align=8)
            if cname == "c.ldsp" and rd == 0:
                raise AsmError("c.ldsp with rd=x0 is reserved")
            f3 = 3 if cname == "c.ldsp" else 1
            return (f3 << 13 | _b(imm, 5, 5) << 12 | rd << 7 | _b(imm, 4, 3) << 5
                    | _b(imm, 8, 6) << 2 | 2)
        if cname == "c.swsp":
            _check_range(imm, 8, "offset", signed=False, align=4)
            return 6 << 13 | _b(imm, 5, 2) << 9 | _b(imm, 7, 6) << 7 | rs2 << 2 | 2
        _check_range(imm, 9, "offset", signed=False, align=8)
        f3 = 7 if cname == "c.sdsp" else 5
        return f3 << 13 | _b(imm, 5, 3) << 10 | _b(imm, 8, 6) << 7 | rs2 << 2 | 2
    if cname in ("c.beqz", "c.bnez"):
        _check_range(imm, 9, "branch offset", align=2)
        f3 = 6 if cname == "c.beqz" else 7
        return (f3 << 13 | _b(imm, 8, 8) << 12 | _b(imm, 4, 3) << 10 | _creg(rs1, "rs1") << 7
                | _b(imm, 7, 6) << 5 | _b(imm, 2, 1) << 3 | _b(imm, 5, 5) << 2 | 1)
    if cname == "c.j":
        _check_range(imm, 12, "jump offset", align=2)
        return (5 << 13 | _b(imm, 11, 11) << 12 | _b(imm, 4, 4) << 11 | _b(imm, 9, 8) << 9
                | _b(imm, 10, 10) << 8 | _b(imm, 6, 6) << 7 | _b(imm, 7, 7) << 6
                | _b(imm, 3, 1) << 3 | _b(imm, 5, 5) << 2 | 1)
    raise AsmError(f"unknown compressed mnemonic: {cname!r}")


# --- assembly --------------------------------------------------------------

def _split(operands: str) -> list[str]:
    operands = operands.strip()
    return [t.strip() for t in operands.split(",")] if operands else []


def _want(ops: list[str], n: int, mnemonic: str) -> None:
    if len(ops) != n:
        raise AsmError(f"{mnemonic} expects {n} operand(s), got {len(ops)}")


_BRANCH_ZERO = {"beqz": ("beq", False), "bnez": ("bne", False),
                "bgez": ("bge", False), "bltz": ("blt", False),
                "blez": ("bge", True), "bgtz": ("blt", True)}
_BRANCH_SWAP = {"bgt": "blt", "ble": "bge", "bgtu": "bltu", "bleu": "bgeu"}


def _pseudo(m: str, ops: list[str], pc: int):
    """Expand a pseudo-instruction into (mnemonic, fields) or return None."""
    if m == "nop":
        _want(ops, 0, m)
        return "addi", dict(rd=0, rs1=0, imm=0)
    if m == "li":
        _want(ops, 2, m)
        imm = _imm(ops[1])
        if not -2048 <= imm <= 2047:
            raise AsmError(f"li immediate {imm} needs more than one instruction")
        return "addi", dict(rd=_reg(ops[0]), rs1=0, imm=imm)
    if m == "mv":
        _want(ops, 2, m)
        return "addi", dict(rd=_reg(ops[0]), rs1=_reg(ops[1]), imm=0)
    if m == "not":
        _want(ops, 2, m)
        return "xori", dict(rd=_reg(ops[0]), rs1=_reg(ops[1]), imm=-1)
    if m in ("neg", "negw"):
        _want(ops, 2, m)
        return ("sub" if m == "neg" else "subw"), dict(rd=_reg(ops[0]), rs1=0, rs2=_reg(ops[1]))
    if m == "sext.w":
        _want(ops, 2, m)
        return "addiw", dict(rd=_reg(ops[0]), rs1=_reg(ops[1]), imm=0)
    if m == "seqz":
        _want(ops, 2, m)
        return "sltiu", dict(rd=_reg(ops[0]), rs1=_reg(ops[1]), imm=1)
    if m == "snez":
        _want(ops, 2, m)
        return "sltu", dict(rd=_reg(ops[0]), rs1=0, rs2=_reg(ops[1]))
    if m in _BRANCH_ZERO:
        _want(ops, 2, m)
        base, swap = _BRANCH_ZERO[m]
        r = _reg(ops[0])
        rs1, rs2 = (0, r) if swap else (r, 0)
        return base, dict(rs1=rs1, rs2=rs2, imm=_target(ops[1], pc))
    if m in _BRANCH_SWAP:
        _want(ops, 3, m)
        return _BRANCH_SWAP[m], dict(rs1=_reg(ops[1]), rs2=_reg(ops[0]),
                                     imm=_target(ops[2], pc))
    if m == "j":
        _want(ops, 1, m)
        return "jal", dict(rd=0, imm=_target(ops[0], pc))
    if m == "jr":
        _want(ops, 1, m)
        return "jalr", dict(rd=0, rs1=_reg(ops[0]), imm=0)
    if m == "ret":
        _want(ops, 0, m)
        return "jalr", dict(rd=0, rs1=1, imm=0)
    return None


def _base_fields(m: str, ops: list[str], pc: int) -> dict:
    opclass = op_class_of(m)
    if opclass in (OpClass.REG_REG, OpClass.MUL, OpClass.DIV):
        _want(ops, 3, m)
        return dict(rd=_reg(ops[0]), rs1=_reg(ops[1]), rs2=_reg(ops[2]))
    if opclass is OpClass.REG_IMM:
        _want(ops, 3, m)
        return dict(rd=_reg(ops[0]), rs1=_reg(ops[1]), imm=_imm(ops[2]))
    if opclass in (OpClass.LOAD, OpClass.FP_LOAD):
        _want(ops, 2, m)
        off, base = _mem(ops[1])
        return dict(rd=_reg(ops[0], fp=opclass is OpClass.FP_LOAD), rs1=base, imm=off)
    if opclass in (OpClass.STORE, OpClass.FP_STORE):
        _want(ops, 2, m)
        off, base = _mem(ops[1])
        return dict(rs2=_reg(ops[0], fp=opclass is OpClass.FP_STORE), rs1=base, imm=off)
    if opclass is OpClass.BRANCH:
        _want(ops, 3, m)
        return dict(rs1=_reg(ops[0]), rs2=_reg(ops[1]), imm=_target(ops[2], pc))
    if opclass is OpClass.JAL:
        if len(ops) == 1:
            return dict(rd=1, imm=_target(ops[0], pc))
        _want(ops, 2, m)
        return dict(rd=_reg(ops[0]), imm=_target(ops[1], pc))
    if opclass is OpClass.JALR:
        if len(ops) == 1:
            return dict(rd=1, rs1=_reg(ops[0]), imm=0)
        if len(ops) == 3:
            return dict(rd=_reg(ops[0]), rs1=_reg(ops[1]), imm=_imm(ops[2]))
        _want(ops, 2, m)
        off, base = _mem(ops[1])
        return dict(rd=_reg(ops[0]), rs1=base, imm=off)
    # lui / auipc take the 20-bit upper field
    _want(ops, 2, m)
    field = _imm(ops[1])
    if not -(1 << 19) <= field < (1 << 20):
        raise AsmError(f"upper immediate {field:#x} out of range")
    return dict(rd=_reg(ops[0]), imm=sign_extend((field & 0xFFFFF) << 12, 32))


def _rvc_fields(cname: str, ops: list[str], pc: int) -> dict:
    base, syntax = RVC_FORMS[cname]
    fp = base in ("fld", "fsd")
    if syntax == "":
        _want(ops, 0, cname)
        return dict(rd=0, rs1=0, imm=0)
    if syntax == "rd,imm":
        _want(ops, 2, cname)
        rd = _reg(ops[0])
        return dict(rd=rd, rs1=0 if cname == "c.li" else rd, imm=_imm(ops[1]))
    if syntax == "rd,uimm":
        _want(ops, 2, cname)
        field = _imm(ops[1])
        return dict(rd=_reg(ops[0]), imm=sign_extend((field & 0xFFFFF) << 12, 32))
    if syntax == "sp,imm":
        _want(ops, 2, cname)
        if _reg(ops[0]) != 2:
            raise AsmError(f"{cname} operates on sp only")
        return dict(rd=2, rs1=2, imm=_imm(ops[1]))
    if syntax == "rd,sp,imm":
        _want(ops, 3, cname)
        if _reg(ops[1]) != 2:
            raise AsmError(f"{cname} source must be sp")
        return dict(rd=_reg(ops[0]), rs1=2, imm=_imm(ops[2]))
    if syntax == "rd,rs2":
        _want(ops, 2, cname)
        rd = _reg(ops[0])
        return dict(rd=rd, rs1=0 if cname == "c.mv" else rd, rs2=_reg(ops[1]))
    if syntax == "load":
        _want(ops, 2, cname)
        off, b = _mem(ops[1])
        return dict(rd=_reg(ops[0], fp=fp), rs1=b, imm=off)
    if syntax == "store":
        _want(ops, 2, cname)
        off, b = _mem(ops[1])
        return dict(rs2=_reg(ops[0], fp=fp), rs1=b, imm=off)
    if syntax == "rs1,target":
        _want(ops, 2, cname)
        return dict(rs1=_reg(ops[0]), rs2=0, imm=_target(ops[1], pc))
    if syntax == "target":
        _want(ops, 1, cname)
        return dict(rd=0, imm=_target(ops[0], pc))
    _want(ops, 1, cname)  # c.jr / c.jalr
    return dict(rd=0 if cname == "c.jr" else 1, rs1=_reg(ops[0]), imm=0)


def assemble_line(text: str, pc: int = 0) -> Instruction:
    """Assemble one statement into a decoded Instruction.

    >>> assemble_line("slli a5, a5, 0x20").imm
    32
    """
    stmt = text.split("#", 1)[0].strip()
    if not stmt:
        raise AsmError("empty statement")
    parts = stmt.split(None, 1)
    m = parts[0].lower()
    ops = _split(parts[1]) if len(parts) > 1 else []

    if m in (".word", ".half"):
        _want(ops, 1, m)
        value = _imm(ops[0])
        if m == ".half":
            _check_range(value, 16, "halfword", signed=False)
            return decode16(value)
        _check_range(value, 32, "word", signed=False)
        return decode32(value)

    if m.startswith("c."):
        if m not in RVC_FORMS:
            raise AsmError(f"unknown mnemonic: {m!r}")
        fields = _rvc_fields(m, ops, pc)
        raw = encode16(m, **fields)
        name, instr = rvc_name(raw), decode16(raw)
        assert name == m or (m == "c.addi" and name == "c.nop"), (m, name)
        return instr

    expanded = _pseudo(m, ops, pc)
    if expanded is not None:
        m, fields = expanded
    elif m in SUPPORTED_MNEMONICS:
        fields = _base_fields(m, ops, pc)
    else:
        raise AsmError(f"unknown mnemonic: {m!r}")
    return decode32(encode32(m, **fields))


# --- disassembly -----------------------------------------------------------

def _target_text(instr: Instruction, pc: int) -> str:
    return f"{(pc + instr.imm) & _XLEN_MASK:x}"


def _upper_field(imm: int) -> str:
    return f"0x{(imm >> 12) & 0xFFFFF:x}"


def _choose_rvc(instr: Instruction) -> str | None:
    for cname, (base, _) in RVC_FORMS.items():
        if base != instr.mnemonic:
            continue
        try:
            raw = encode16(cname, instr.rd, instr.rs1, instr.rs2, instr.imm)
        except AsmError:
            continue
        if decode16(raw).semantic() == instr.semantic() and rvc_name(raw) == cname:
            return cname
    return None


def _disassemble_rvc(cname: str, i: Instruction, pc: int) -> str:
    _, syntax = RVC_FORMS[cname]
    fp = i.mnemonic in ("fld", "fsd")
    r = reg_name
    if syntax == "":
        return cname
    if syntax == "rd,imm":
        return f"{cname} {r(i.rd)}, {i.imm}"
    if syntax == "rd,uimm":
        return f"{cname} {r(i.rd)}, {_upper_field(i.imm)}"
    if syntax == "sp,imm":
        return f"{cname} sp, {i.imm}"
    if syntax == "rd,sp,imm":
        return f"{cname} {r(i.rd)}, sp, {i.imm}"
    if syntax == "rd,rs2":
        return f"{cname} {r(i.rd)}, {r(i.rs2)}"
    if syntax == "load":
        return f"{cname} {r(i.rd, fp)}, {i.imm}({r(i.rs1)})"
    if syntax == "store":
        return f"{cname} {r(i.rs2, fp)}, {i.imm}({r(i.rs1)})"
    if syntax == "rs1,target":
        return f"{cname} {r(i.rs1)}, {_target_text(i, pc)}"
    if syntax == "target":
        return f"{cname} {_target_text(i, pc)}"
    return f"{cname} {r(i.rs1)}"


def disassemble(instr: Instruction, pc: int = 0) -> str:
    """Render an Instruction as canonical assembly text."""
    i = instr
    if i.opclass is OpClass.OTHER:
        if i.encoded_length == 2:
            return f".half 0x{i.raw & 0xFFFF:04x}"
        return f".word 0x{i.raw & 0xFFFFFFFF:08x}"
    if i.encoded_length == 2:
        cname = None
        if decode16(i.raw).semantic() == i.semantic():
            cname = rvc_name(i.raw)
        cname = cname or _choose_rvc(i)
        if cname is not None:
            return _disassemble_rvc(cname, i, pc)
    m, r = i.mnemonic, reg_name
    oc = i.opclass
    if oc in (OpClass.REG_REG, OpClass.MUL, OpClass.DIV):
        return f"{m} {r(i.rd)}, {r(i.rs1)}, {r(i.rs2)}"
    if oc is OpClass.REG_IMM:
        return f"{m} {r(i.rd)}, {r(i.rs1)}, {i.imm}"
    if oc in (OpClass.LOAD, OpClass.FP_LOAD):
        return f"{m} {r(i.rd, i.fp_rd)}, {i.imm}({r(i.rs1)})"
    if oc in (OpClass.STORE, OpClass.FP_STORE):
        return f"{m} {r(i.rs2, i.fp_rs2)}, {i.imm}({r(i.rs1)})"
    if oc is OpClass.BRANCH:
        return f"{m} {r(i.rs1)}, {r(i.rs2)}, {_target_text(i, pc)}"
    if oc is OpClass.JAL:
        return f"jal {r(i.rd)}, {_target_text(i, pc)}"
    if oc is OpClass.JALR:
        return f"jalr {r(i.rd)}, {i.imm}({r(i.rs1)})"
    return f"{m} {r(i.rd)}, {_upper_field(i.imm)}"

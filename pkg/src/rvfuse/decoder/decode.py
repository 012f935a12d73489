"""RV64GC machine-code decoding.

Only the integer subset plus FP loads/stores is decoded field-by-field.
Anything else (FP arithmetic, atomics, CSR, fences, vector) becomes an
``OpClass.OTHER`` instruction carrying its raw bits; decoding never fails on
an arbitrary bit pattern.
"""

from __future__ import annotations

from .isa import Instruction, OpClass


class EncodingError(ValueError):
    """Raised for encodings reserved for instructions longer than 4 bytes."""


def sign_extend(value: int, bits: int) -> int:
    value &= (1 << bits) - 1
    sign = 1 << (bits - 1)
    return (value ^ sign) - sign


def _bits(word: int, hi: int, lo: int) -> int:
    return (word >> lo) & ((1 << (hi - lo + 1)) - 1)


def instr_length(first_halfword: int) -> int:
    """Byte length of the instruction whose lowest halfword is given."""
    if first_halfword & 0b11 != 0b11:
        return 2
    if first_halfword & 0b11111 == 0b11111:
        raise EncodingError(
            f"encoding 0x{first_halfword & 0xFFFF:04x} is reserved for "
            "instructions longer than 4 bytes")
    return 4


def _other(raw: int, length: int) -> Instruction:
    return Instruction("other", OpClass.OTHER, encoded_length=length, raw=raw)


_LOADS = {0: "lb", 1: "lh", 2: "lw", 3: "ld", 4: "lbu", 5: "lhu", 6: "lwu"}
_STORES = {0: "sb", 1: "sh", 2: "sw", 3: "sd"}
_BRANCHES = {0: "beq", 1: "bne", 4: "blt", 5: "bge", 6: "bltu", 7: "bgeu"}
_OP_IMM = {0: "addi", 2: "slti", 3: "sltiu", 4: "xori", 6: "ori", 7: "andi"}
# (funct7, funct3) -> mnemonic for OP and OP-32
_OP = {
    (0x00, 0): "add", (0x20, 0): "sub", (0x00, 1): "sll", (0x00, 2): "slt",
    (0x00, 3): "sltu", (0x00, 4): "xor", (0x00, 5): "srl", (0x20, 5): "sra",
    (0x00, 6): "or", (0x00, 7): "and",
    (0x01, 0): "mul", (0x01, 1): "mulh", (0x01, 2): "mulhsu", (0x01, 3): "mulhu",
    (0x01, 4): "div", (0x01, 5): "divu", (0x01, 6): "rem", (0x01, 7): "remu",
}
_OP32 = {
    (0x00, 0): "addw", (0x20, 0): "subw", (0x00, 1): "sllw", (0x00, 5): "srlw",
    (0x20, 5): "sraw", (0x01, 0): "mulw", (0x01, 4): "divw", (0x01, 5): "divuw",
    (0x01, 6): "remw", (0x01, 7): "remuw",
}


def op_class_of(mnemonic: str) -> OpClass:
    """Operation class of a base mnemonic from the decoded subset."""
    return _CLASS_OF[mnemonic]


_CLASS_OF: dict[str, OpClass] = {}
for _m in _LOADS.values():
    _CLASS_OF[_m] = OpClass.LOAD
for _m in _STORES.values():
    _CLASS_OF[_m] = OpClass.STORE
for _m in _BRANCHES.values():
    _CLASS_OF[_m] = OpClass.BRANCH
for _m in [*_OP_IMM.values(), "slli", "srli", "srai", "addiw", "slliw", "srliw", "sraiw"]:
    _CLASS_OF[_m] = OpClass.REG_IMM
for _m in [*_OP.values(), *_OP32.values()]:
    if _m.startswith("mul"):
        _CLASS_OF[_m] = OpClass.MUL
    elif _m.startswith(("div", "rem")):
        _CLASS_OF[_m] = OpClass.DIV
    else:
        _CLASS_OF[_m] = OpClass.REG_REG
_CLASS_OF.update({
    "jal": OpClass.JAL, "jalr": OpClass.JALR, "lui": OpClass.LUI,
    "auipc": OpClass.AUIPC, "flw": OpClass.FP_LOAD, "fld": OpClass.FP_LOAD,
    "fsw": OpClass.FP_STORE, "fsd": OpClass.FP_STORE,
})
del _m

SUPPORTED_MNEMONICS = frozenset(_CLASS_OF)


def make(mnemonic: str, rd=None, rs1=None, rs2=None, imm=None, *,
         length: int = 4, raw: int = 0) -> Instruction:
    """Build an Instruction for a base mnemonic, filling in class and FP flags."""
    opclass = _CLASS_OF[mnemonic]
    return Instruction(
        mnemonic, opclass, rd=rd, rs1=rs1, rs2=rs2, imm=imm,
        encoded_length=length, raw=raw,
        fp_rd=opclass is OpClass.FP_LOAD, fp_rs2=opclass is OpClass.FP_STORE)


def decode32(word: int) -> Instruction:
    word &= 0xFFFFFFFF
    if word & 0b11 != 0b11 or word & 0b11100 == 0b11100:
        return _other(word, 4)
    opcode = word & 0x7F
    rd = _bits(word, 11, 7)
    funct3 = _bits(word, 14, 12)
    rs1 = _bits(word, 19, 15)
    rs2 = _bits(word, 24, 20)
    funct7 = _bits(word, 31, 25)
    imm_i = sign_extend(word >> 20, 12)
    imm_s = sign_extend((funct7 << 5) | rd, 12)

    def mk(mnemonic, **fields):
        return make(mnemonic, raw=word, **fields)

    if opcode == 0x03 and funct3 in _LOADS:
        return mk(_LOADS[funct3], rd=rd, rs1=rs1, imm=imm_i)
    if opcode == 0x07 and funct3 in (2, 3):
        return mk("flw" if funct3 == 2 else "fld", rd=rd, rs1=rs1, imm=imm_i)
    if opcode == 0x13:
        if funct3 in _OP_IMM:
            return mk(_OP_IMM[funct3], rd=rd, rs1=rs1, imm=imm_i)
        shamt = _bits(word, 25, 20)
        funct6 = _bits(word, 31, 26)
        if funct3 == 1 and funct6 == 0:
            return mk("slli", rd=rd, rs1=rs1, imm=shamt)
        if funct3 == 5 and funct6 in (0x00, 0x10):
            return mk("srli" if funct6 == 0 else "srai", rd=rd, rs1=rs1, imm=shamt)
        return _other(word, 4)
    if opcode == 0x1B:
        if funct3 == 0:
            return mk("addiw", rd=rd, rs1=rs1, imm=imm_i)
        if funct3 == 1 and funct7 == 0:
            return mk("slliw", rd=rd, rs1=rs1, imm=rs2)
        if funct3 == 5 and funct7 in (0x00, 0x20):
            return mk("srliw" if funct7 == 0 else "sraiw", rd=rd, rs1=rs1, imm=rs2)
        return _other(word, 4)
    if opcode in (0x17, 0x37):
        return mk("auipc" if opcode == 0x17 else "lui", rd=rd,
                  imm=sign_extend(word & 0xFFFFF000, 32))
    if opcode == 0x23 and funct3 in _STORES:
        return mk(_STORES[funct3], rs1=rs1, rs2=rs2, imm=imm_s)
    if opcode == 0x27 and funct3 in (2, 3):
        return mk("fsw" if funct3 == 2 else "fsd", rs1=rs1, rs2=rs2, imm=imm_s)
    if opcode == 0x33 and (funct7, funct3) in _OP:
        return mk(_OP[funct7, funct3], rd=rd, rs1=rs1, rs2=rs2)
    if opcode == 0x3B and (funct7, funct3) in _OP32:
        return mk(_OP32[funct7, funct3], rd=rd, rs1=rs1, rs2=rs2)
    if opcode == 0x63 and funct3 in _BRANCHES:
        imm = (_bits(word, 31, 31) << 12 | _bits(word, 7, 7) << 11
               | _bits(word, 30, 25) << 5 | _bits(word, 11, 8) << 1)
        return mk(_BRANCHES[funct3], rs1=rs1, rs2=rs2, imm=sign_extend(imm, 13))
    if opcode == 0x67 and funct3 == 0:
        return mk("jalr", rd=rd, rs1=rs1, imm=imm_i)
    if opcode == 0x6F:
        imm = (_bits(word, 31, 31) << 20 | _bits(word, 19, 12) << 12
               | _bits(word, 20, 20) << 11 | _bits(word, 30, 21) << 1)
        return mk("jal", rd=rd, imm=sign_extend(imm, 21))
    return _other(word, 4)


def _decode16_named(half: int) -> tuple[str | None, Instruction]:
    """Decode an RVC halfword; also return the compressed mnemonic used."""
    half &= 0xFFFF
    quadrant = half & 0b11
    funct3 = _bits(half, 15, 13)
    b12 = _bits(half, 12, 12)
    r_full = _bits(half, 11, 7)
    rs2_full = _bits(half, 6, 2)
    r_low = 8 + _bits(half, 4, 2)     # rd'/rs2' in bits 4:2
    r_high = 8 + _bits(half, 9, 7)    # rs1'/rd' in bits 9:7
    imm6 = sign_extend(b12 << 5 | _bits(half, 6, 2), 6)
    uimm6 = b12 << 5 | _bits(half, 6, 2)

    def mk(cname, mnemonic, **fields):
        return cname, make(mnemonic, length=2, raw=half, **fields)

    if quadrant == 0:
        off_d = _bits(half, 12, 10) << 3 | _bits(half, 6, 5) << 6
        off_w = _bits(half, 12, 10) << 3 | _bits(half, 6, 6) << 2 | _bits(half, 5, 5) << 6
        if funct3 == 0:
            nzuimm = (_bits(half, 12, 11) << 4 | _bits(half, 10, 7) << 6
                      | _bits(half, 6, 6) << 2 | _bits(half, 5, 5) << 3)
            if nzuimm == 0:
                return None, _other(half, 2)
            return mk("c.addi4spn", "addi", rd=r_low, rs1=2, imm=nzuimm)
        if funct3 == 1:
            return mk("c.fld", "fld", rd=r_low, rs1=r_high, imm=off_d)
        if funct3 == 2:
            return mk("c.lw", "lw", rd=r_low, rs1=r_high, imm=off_w)
        if funct3 == 3:
            return mk("c.ld", "ld", rd=r_low, rs1=r_high, imm=off_d)
        if funct3 == 5:
            return mk("c.fsd", "fsd", rs1=r_high, rs2=r_low, imm=off_d)
        if funct3 == 6:
            return mk("c.sw", "sw", rs1=r_high, rs2=r_low, imm=off_w)
        if funct3 == 7:
            return mk("c.sd", "sd", rs1=r_high, rs2=r_low, imm=off_d)
        return None, _other(half, 2)

    if quadrant == 1:
        if funct3 == 0:
            if r_full == 0 and imm6 == 0:
                return mk("c.nop", "addi", rd=0, rs1=0, imm=0)
            return mk("c.addi", "addi", rd=r_full, rs1=r_full, imm=imm6)
        if funct3 == 1:
            if r_full == 0:
                return None, _other(half, 2)
            return mk("c.addiw", "addiw", rd=r_full, rs1=r_full, imm=imm6)
        if funct3 == 2:
            return mk("c.li", "addi", rd=r_full, rs1=0, imm=imm6)
        if funct3 == 3:
            if r_full == 2:
                nzimm = sign_extend(b12 << 9 | _bits(half, 6, 6) << 4 | _bits(half, 5, 5) << 6
                                    | _bits(half, 4, 3) << 7 | _bits(half, 2, 2) << 5, 10)
                if nzimm == 0:
                    return None, _other(half, 2)
                return mk("c.addi16sp", "addi", rd=2, rs1=2, imm=nzimm)
            if imm6 == 0:
                return None, _other(half, 2)
            return mk("c.lui", "lui", rd=r_full, imm=imm6 << 12)
        if funct3 == 4:
            sub = _bits(half, 11, 10)
            if sub == 0:
                return mk("c.srli", "srli", rd=r_high, rs1=r_high, imm=uimm6)
            if sub == 1:
                return mk("c.srai", "srai", rd=r_high, rs1=r_high, imm=uimm6)
            if sub == 2:
                return mk("c.andi", "andi", rd=r_high, rs1=r_high, imm=imm6)
            key = (b12, _bits(half, 6, 5))
            table = {(0, 0): "sub", (0, 1): "xor", (0, 2): "or", (0, 3): "and",
                     (1, 0): "subw", (1, 1): "addw"}
            if key not in table:
                return None, _other(half, 2)
            op = table[key]
            return mk("c." + op, op, rd=r_high, rs1=r_high, rs2=r_low)
        if funct3 == 5:
            off = (b12 << 11 | _bits(half, 11, 11) << 4 | _bits(half, 10, 9) << 8
                   | _bits(half, 8, 8) << 10 | _bits(half, 7, 7) << 6
                   | _bits(half, 6, 6) << 7 | _bits(half, 5, 3) << 1 | _bits(half, 2, 2) << 5)
            return mk("c.j", "jal", rd=0, imm=sign_extend(off, 12))
        off = (b12 << 8 | _bits(half, 11, 10) << 3 | _bits(half, 6, 5) << 6
               | _bits(half, 4, 3) << 1 | _bits(half, 2, 2) << 5)
        if funct3 == 6:
            return mk("c.beqz", "beq", rs1=r_high, rs2=0, imm=sign_extend(off, 9))
        return mk("c.bnez", "bne", rs1=r_high, rs2=0, imm=sign_extend(off, 9))

    if quadrant == 2:
        off_dsp = b12 << 5 | _bits(half, 6, 5) << 3 | _bits(half, 4, 2) << 6
        off_wsp = b12 << 5 | _bits(half, 6, 4) << 2 | _bits(half, 3, 2) << 6
        soff_d = _bits(half, 12, 10) << 3 | _bits(half, 9, 7) << 6
        soff_w = _bits(half, 12, 9) << 2 | _bits(half, 8, 7) << 6
        if funct3 == 0:
            return mk("c.slli", "slli", rd=r_full, rs1=r_full, imm=uimm6)
        if funct3 == 1:
            return mk("c.fldsp", "fld", rd=r_full, rs1=2, imm=off_dsp)
        if funct3 in (2, 3):
            if r_full == 0:
                return None, _other(half, 2)
            if funct3 == 2:
                return mk("c.lwsp", "lw", rd=r_full, rs1=2, imm=off_wsp)
            return mk("c.ldsp", "ld", rd=r_full, rs1=2, imm=off_dsp)
        if funct3 == 4:
            if b12 == 0:
                if rs2_full == 0:
                    if r_full == 0:
                        return None, _other(half, 2)
                    return mk("c.jr", "jalr", rd=0, rs1=r_full, imm=0)
                return mk("c.mv", "add", rd=r_full, rs1=0, rs2=rs2_full)
            if rs2_full == 0:
                if r_full == 0:
                    return None, _other(half, 2)  # c.ebreak
                return mk("c.jalr", "jalr", rd=1, rs1=r_full, imm=0)
            return mk("c.add", "add", rd=r_full, rs1=r_full, rs2=rs2_full)
        if funct3 == 5:
            return mk("c.fsdsp", "fsd", rs1=2, rs2=rs2_full, imm=soff_d)
        if funct3 == 6:
            return mk("c.swsp", "sw", rs1=2, rs2=rs2_full, imm=soff_w)
        return mk("c.sdsp", "sd", rs1=2, rs2=rs2_full, imm=soff_d)

    return None, _other(half, 2)


def decode16(halfword: int) -> Instruction:
    return _decode16_named(halfword)[1]


def rvc_name(halfword: int) -> str | None:
    """Compressed mnemonic (``"c.mv"``...) of a halfword, or None if unsupported."""
    return _decode16_named(halfword)[0]


def decode(raw: int, length: int | None = None) -> Instruction:
    """Decode a 2- or 4-byte encoding, inferring the length when not given."""
    if length is None:
        length = instr_length(raw & 0xFFFF)
    if length == 2:
        return decode16(raw)
    return decode32(raw)

from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from capstone_oracle import fields, load_corpus
from conftest import DATA
from rvfuse.decoder import (AsmError, EncodingError, Instruction, OpClass, assemble_line,
                            decode, decode16, decode32, disassemble, instr_length)
from rvfuse.decoder.asm import RVC_FORMS


def sem(i: Instruction):
    return (i.mnemonic, i.opclass.value, i.rd, i.rs1, i.rs2, i.imm, i.fp_rd, i.fp_rs2)


# --- instr_length ------------------------------------------------------------

@pytest.mark.parametrize("half, n", [(0x0001, 2), (0x0013, 4), (0x852E, 2), (0x0000, 2),
                                     (0xFFFE, 2), (0x0003, 4)])
def test_instr_length(half, n):
    assert instr_length(half) == n


@pytest.mark.parametrize("half", [0x001F, 0x003F, 0xFFFF, 0x107F])
def test_instr_length_rejects_long_encodings(half):
    with pytest.raises(EncodingError):
        instr_length(half)


# --- worked examples -------------------------------------------------------------

def test_decode32_nop():
    i = decode32(0x00000013)
    assert (i.mnemonic, i.opclass, i.rd, i.rs1, i.imm) == ("addi", OpClass.REG_IMM, 0, 0, 0)
    assert i.encoded_length == 4


def test_decode32_add():
    i = decode32(0x00B50533)
    assert (i.mnemonic, i.opclass, i.rd, i.rs1, i.rs2) == ("add", OpClass.REG_REG, 10, 10, 11)


def test_decode32_unknown_is_other():
    i = decode32(0xFFFFFFFF)
    assert i.opclass is OpClass.OTHER and i.raw == 0xFFFFFFFF


def test_decode16_nop():
    i = decode16(0x0001)
    assert (i.mnemonic, i.rd, i.rs1, i.imm, i.encoded_length) == ("addi", 0, 0, 0, 2)


def test_decode16_mv():
    i = decode16(0x852E)
    assert (i.mnemonic, i.rd, i.rs1, i.rs2, i.encoded_length) == ("add", 10, 0, 11, 2)


def test_decode16_reserved_zero():
    assert decode16(0x0000).opclass is OpClass.OTHER


def test_assemble_examples():
    i = assemble_line("slli a5, a5, 0x20")
    assert (i.mnemonic, i.opclass, i.rd, i.rs1, i.imm) == ("slli", OpClass.REG_IMM, 15, 15, 32)
    i = assemble_line("ld a3, 0(a4)")
    assert (i.mnemonic, i.opclass, i.rd, i.rs1, i.imm) == ("ld", OpClass.LOAD, 13, 14, 0)


@pytest.mark.parametrize("text", ["frobnicate x1", "add a0, a1", "add a0, a1, x32",
                                  "ld a0, 0(q9)", "slli a0, a0, 64", ""])
def test_assemble_errors(text):
    with pytest.raises(AsmError):
        assemble_line(text)


def test_disassemble_examples():
    assert disassemble(decode32(0x00B50533)) == "add a0, a0, a1"
    assert disassemble(decode16(0x0001)) == "c.nop"
    assert disassemble(decode32(0xFFFFFFFF)) == ".word 0xffffffff"


def test_branch_targets_are_absolute():
    i = assemble_line("bnez a5, 35b00", pc=0x35A74)
    assert i.imm == 0x35B00 - 0x35A74
    assert disassemble(i, 0x35A74) == "bne a5, zero, 35b00"


def test_x0_destination_kept():
    i = assemble_line("add zero, a0, a1")
    assert i.rd == 0 and i.opclass is OpClass.REG_REG


# --- reference transcript ----------------------------------------------------

CORPUS = list(load_corpus(DATA / "decoder_corpus.txt"))


def test_corpus_size_and_coverage():
    assert len(CORPUS) >= 500
    rvc = [row for row in CORPUS if row[1] == 2]
    assert len(rvc) >= 100
    classes = Counter(decode(raw, n).opclass for raw, n, _, _ in CORPUS)
    assert set(classes) == set(OpClass)
    rvc_names = {m for _, n, m, _ in CORPUS if n == 2}
    # every supported compressed form appears (c.jal is RV32-only)
    assert set(RVC_FORMS) <= rvc_names


def test_corpus_agrees_with_reference():
    mismatches = []
    for raw, n, mnemonic, op_str in CORPUS:
        got = sem(decode(raw, n))
        want = fields(mnemonic, op_str)
        if got != want:
            mismatches.append((f"{raw:0{2 * n}x}", mnemonic, op_str, got, want))
    assert mismatches == []


def test_corpus_lengths():
    for raw, n, _, _ in CORPUS:
        assert decode(raw, n).encoded_length == n == instr_length(raw & 0xFFFF)


def test_rvc_expands_like_base_form():
    for raw, n, _, _ in CORPUS:
        if n != 2:
            continue
        c = decode16(raw)
        if c.opclass is OpClass.OTHER:
            continue
        # re-encode the expansion as a 4-byte instruction and decode it
        full = assemble_line(disassemble(c.replace(encoded_length=4, raw=0)))
        assert sem(full) == sem(c)


# --- properties ----------------------------------------------------------------

@settings(max_examples=3000)
@given(st.integers(0, 0xFFFFFFFF))
def test_decode32_total(word):
    i = decode32(word)
    assert i.encoded_length == 4 and i.raw == word


@settings(max_examples=3000)
@given(st.integers(0, 0xFFFF).filter(lambda h: h & 3 != 3))
def test_decode16_total(half):
    i = decode16(half)
    assert i.encoded_length == 2 and i.raw == half
    assert instr_length(i.raw & 0xFFFF) == i.encoded_length


@settings(max_examples=3000)
@given(st.integers(0, 0xFFFFFFFF).filter(lambda w: w & 0x1F != 0x1F))
def test_length_law(raw):
    n = instr_length(raw & 0xFFFF)
    i = decode(raw & (0xFFFF if n == 2 else 0xFFFFFFFF))
    assert i.encoded_length == instr_length(i.raw & 0xFFFF)


@settings(max_examples=3000)
@given(st.integers(0, 0xFFFFFFFF).filter(lambda w: w & 0x1F != 0x1F),
       st.integers(0, 0x7FFFF).map(lambda x: 2 * x))
def test_round_trip(raw, pc):
    n = instr_length(raw & 0xFFFF)
    i = decode(raw & (0xFFFF if n == 2 else 0xFFFFFFFF))
    text = disassemble(i, pc)
    back = assemble_line(text, pc)
    assert sem(back) == sem(i)
    assert back.encoded_length == i.encoded_length

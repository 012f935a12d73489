"""RV64GC decoding plus a test-corpus assembler/disassembler."""

from .asm import AsmError, assemble_line, disassemble, encode16, encode32
from .decode import (EncodingError, decode, decode16, decode32, instr_length,
                     rvc_name)
from .isa import Instruction, OpClass, reg_name

__all__ = [
    "AsmError", "EncodingError", "Instruction", "OpClass", "assemble_line",
    "decode", "decode16", "decode32", "disassemble", "encode16", "encode32",
    "instr_length", "reg_name", "rvc_name",
]

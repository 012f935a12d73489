"""Random straight-line blocks for property tests.

Instructions come from a pool built over a tiny register file so idiom
shapes (and near-misses) turn up often.
"""

import itertools
import random
from functools import lru_cache

from rvfuse.decoder import assemble_line
from rvfuse.trace import Block, WeightedInstruction

REGS = ("zero", "a0", "a1", "a2", "a3")

_asm = lru_cache(maxsize=None)(assemble_line)


@lru_cache(maxsize=None)
def pool():
    texts = []
    for rd, rs1, rs2 in itertools.product(REGS, repeat=3):
        texts += [f"add {rd}, {rs1}, {rs2}", f"mulh {rd}, {rs1}, {rs2}",
                  f"mul {rd}, {rs1}, {rs2}", f"div {rd}, {rs1}, {rs2}",
                  f"rem {rd}, {rs1}, {rs2}", f"divu {rd}, {rs1}, {rs2}",
                  f"remu {rd}, {rs1}, {rs2}"]
    for rd, rs1 in itertools.product(REGS, repeat=2):
        texts += [f"slli {rd}, {rs1}, {sh}" for sh in (1, 2, 3, 32)]
        texts += [f"srli {rd}, {rs1}, {sh}" for sh in (30, 32)]
        texts += [f"addi {rd}, {rs1}, {k}" for k in (8, -4)]
        texts += [f"{op} {rd}, {off}({rs1})" for op in ("ld", "lw", "lbu")
                  for off in (0, 4, 8)]
        texts += [f"{op} {rd}, {off}({rs1})" for op in ("sd", "sw") for off in (0, 4, 8)]
        texts.append(f"flw f{REGS.index(rd)}, 0({rs1})")
    for rd in REGS:
        texts += [f"lui {rd}, 0x12", f"auipc {rd}, 0x3"]
        texts += [f"jalr {rd}, 16({rs1})" for rs1 in REGS]
    return tuple(_asm(t) for t in texts)


@lru_cache(maxsize=None)
def straight_line_pool():
    return tuple(i for i in pool() if not i.is_control)


# idiom-shaped sequences; registers are drawn independently, so some of
# them match and some only nearly match
TEMPLATES = (
    ("slli {0}, {1}, 2", "add {2}, {0}, {3}"),
    ("add {0}, {1}, {2}", "ld {3}, 0({0})"),
    ("slli {0}, {1}, 3", "add {0}, {0}, {2}", "lbu {3}, 0({0})"),
    ("slli {0}, {1}, 32", "srli {2}, {0}, 32"),
    ("slli {0}, {1}, 32", "srli {0}, {0}, 30"),
    ("lui {0}, 0x12", "addi {2}, {0}, 8"),
    ("lui {0}, 0x12", "lw {2}, 4({0})"),
    ("auipc {0}, 0x3", "ld {2}, 8({0})"),
    ("mulhu {0}, {1}, {2}", "mul {3}, {1}, {2}"),
    ("div {0}, {1}, {2}", "rem {3}, {1}, {2}"),
    ("ld {0}, 0({1})", "ld {2}, 8({1})"),
    ("sw {0}, 4({1})", "sw {2}, 8({1})"),
    ("ld {0}, 0({1})", "addi {1}, {1}, 8"),
    ("sd {0}, 0({1})", "addi {1}, {1}, 8"),
)


def _template(rng: random.Random):
    regs = [rng.choice(REGS[1:]) for _ in range(4)]
    if rng.random() < 0.5:          # make the destinations line up
        regs[2] = regs[0]
        regs[3] = regs[0]
    return [_asm(t.format(*regs)) for t in rng.choice(TEMPLATES)]


def random_block(rng: random.Random, max_len=12, max_count=5, control=False):
    """A contiguous block; ``control`` allows one jalr as the last item."""
    instrs = []
    target = rng.randint(0, max_len)
    while len(instrs) < target:
        if rng.random() < 0.5:
            instrs.extend(_template(rng))
        else:
            instrs.append(rng.choice(straight_line_pool()))
    if control and instrs:
        instrs[-1] = rng.choice([i for i in pool() if i.is_control])
    items, pc = [], 0x1000
    for instr in instrs:
        items.append(WeightedInstruction(pc, instr, rng.randint(1, max_count)))
        pc += instr.encoded_length
    return Block(0x1000, tuple(items))


def block_of(lines, counts=None, base=0x1000):
    items, pc = [], base
    for k, text in enumerate(lines):
        instr = assemble_line(text, pc)
        items.append(WeightedInstruction(pc, instr, counts[k] if counts else 1))
        pc += instr.encoded_length
    return Block(base, tuple(items))

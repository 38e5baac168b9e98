"""Shared register machines and a random-machine generator for the property suites."""

import random

from hypothesis import strategies as st

from icrn.regmachine import Dec, Goto, Halt, Inc, RegisterMachine

MUL2_SOURCE = """\
# f(n) = 2n
dec r_in, 5
inc r_out
inc r_out
goto 1
halt
"""

# the introductory listing: input r1, output r2
MUL2_R1_SOURCE = """\
@input r1
@output r2
dec r1,5
inc r2
inc r2
goto 1
halt
"""

REGISTERS = ("r_in", "r_out", "r1")


def random_machine(rng: random.Random, max_lines: int = 20) -> RegisterMachine:
    m = rng.randint(1, max_lines)
    regs = REGISTERS[: rng.randint(1, 3)]
    instructions = []
    for _ in range(m):
        kind = rng.choices(["inc", "dec", "goto", "halt"], weights=[4, 4, 1, 1])[0]
        if kind == "inc":
            instructions.append(Inc(rng.choice(regs)))
        elif kind == "dec":
            instructions.append(Dec(rng.choice(regs), rng.randint(1, m)))
        elif kind == "goto":
            instructions.append(Goto(rng.randint(1, m)))
        else:
            instructions.append(Halt())
    return RegisterMachine(tuple(instructions))


def corpus(count: int = 120, seed: int = 20241015):
    """``count`` (machine, input) pairs, inputs in 0..20."""
    rng = random.Random(seed)
    return [(random_machine(rng), rng.randint(0, 20)) for _ in range(count)]


@st.composite
def machines(draw, max_lines: int = 8):
    m = draw(st.integers(1, max_lines))
    regs = REGISTERS[: draw(st.integers(1, 3))]
    reg = st.sampled_from(regs)
    target = st.integers(1, m)
    ins = st.one_of(
        st.builds(Inc, reg),
        st.builds(Dec, reg, target),
        st.builds(Goto, target),
        st.just(Halt()),
    )
    return RegisterMachine(tuple(draw(st.lists(ins, min_size=m, max_size=m))))

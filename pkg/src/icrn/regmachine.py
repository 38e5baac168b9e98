"""
Register machines: assembly parser and reference interpreter.

.. code-block:: text

    @input r_in       # optional, default r_in
    @output r_out     # optional, default r_out
    dec r_in, 5       # line 1: if r_in > 0, decrement and go to 2; else go to 5
    inc r_out
    inc r_out
    goto 1
    halt

Lines are numbered from 1 over instructions only (directives, comments and
blank lines do not count). The interpreter is the ground truth the compiled
iCRN is checked against.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from typing import Union

from .core import ICRNError, ParseError

DEFAULT_INPUT = "r_in"
DEFAULT_OUTPUT = "r_out"

_REG = r"([A-Za-z_][A-Za-z0-9_]*)"
_INC_RE = re.compile(rf"inc\s+{_REG}\Z")
_DEC_RE = re.compile(rf"dec\s+{_REG}\s*,\s*(\d+)\Z")
_GOTO_RE = re.compile(r"goto\s+(\d+)\Z")
_HALT_RE = re.compile(r"halt\Z")
_DIRECTIVE_RE = re.compile(rf"@(input|output)\s+{_REG}\Z")


class StepAfterHalt(ICRNError):
    pass


class ImplicitHaltWarning(UserWarning):
    """Control can run past the last line; that point is treated as a halt."""


@dataclass(frozen=True)
class Inc:
    register: str

    def __str__(self):
        return f"inc {self.register}"


@dataclass(frozen=True)
class Dec:
    register: str
    target: int

    def __str__(self):
        return f"dec {self.register},{self.target}"


@dataclass(frozen=True)
class Goto:
    target: int

    def __str__(self):
        return f"goto {self.target}"


@dataclass(frozen=True)
class Halt:
    def __str__(self):
        return "halt"


Instruction = Union[Inc, Dec, Goto, Halt]


@dataclass(frozen=True)
class RegisterMachine:
    """
    Instructions are stored 0-based in ``instructions`` but addressed 1-based
    through :meth:`instruction`. Line ``len + 1`` (falling off the end) acts as a halt.
    """

    instructions: tuple[Instruction, ...]
    input_register: str = DEFAULT_INPUT
    output_register: str = DEFAULT_OUTPUT
    registers: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "instructions", tuple(self.instructions))
        if not self.instructions:
            raise ValueError("register machine has no instructions")
        names = dict.fromkeys(self.registers)
        for ins in self.instructions:
            if isinstance(ins, (Inc, Dec)):
                names[ins.register] = None
            if isinstance(ins, (Dec, Goto)) and not 1 <= ins.target <= len(self.instructions):
                raise ValueError(f"jump target {ins.target} out of range 1..{len(self.instructions)}")
        names[self.input_register] = None
        names[self.output_register] = None
        object.__setattr__(self, "registers", tuple(names))

    def __len__(self) -> int:
        return len(self.instructions)

    def instruction(self, line: int) -> Instruction:
        """Instruction at 1-based ``line``; the line just past the end reads as Halt."""
        if line == len(self.instructions) + 1:
            return Halt()
        if not 1 <= line <= len(self.instructions):
            raise IndexError(f"line {line} out of range")
        return self.instructions[line - 1]

    @property
    def falls_off_end(self) -> bool:
        """True when the last instruction can pass control to line ``m + 1``."""
        return isinstance(self.instructions[-1], (Inc, Dec))

    @property
    def halt_lines(self) -> tuple[int, ...]:
        lines = [i for i, ins in enumerate(self.instructions, 1) if isinstance(ins, Halt)]
        if self.falls_off_end:
            lines.append(len(self.instructions) + 1)
        return tuple(lines)

    def format(self) -> str:
        lines = []
        if self.input_register != DEFAULT_INPUT:
            lines.append(f"@input {self.input_register}")
        if self.output_register != DEFAULT_OUTPUT:
            lines.append(f"@output {self.output_register}")
        lines.extend(str(ins) for ins in self.instructions)
        return "".join(line + "\n" for line in lines)


@dataclass(frozen=True)
class RmState:
    """Current line and register contents. ``halted`` is set once a halt line is executed."""

    line: int
    registers: dict[str, int] = field(default_factory=dict)
    halted: bool = False

    def __getitem__(self, register: str) -> int:
        return self.registers.get(register, 0)


@dataclass(frozen=True)
class RmResult:
    halted: bool
    state: RmState
    steps: int
    trace: list[RmState] | None = None

    def output(self, m: RegisterMachine) -> int:
        return self.state[m.output_register]


def parse_rm(text: str, source: str | None = None) -> RegisterMachine:
    """
    Parse register-machine assembly.

    Raises:
        ParseError: unknown syntax, or a jump target outside ``1..m``. The
            reported line number is the source line.

    Warns:
        ImplicitHaltWarning: if control can fall past the last instruction.
    """
    instructions: list[Instruction] = []
    where: list[int] = []
    input_register, output_register = DEFAULT_INPUT, DEFAULT_OUTPUT
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = " ".join(raw.split("#", 1)[0].split())
        if not line:
            continue
        if m := _DIRECTIVE_RE.match(line):
            if m.group(1) == "input":
                input_register = m.group(2)
            else:
                output_register = m.group(2)
            continue
        if m := _INC_RE.match(line):
            ins: Instruction = Inc(m.group(1))
        elif m := _DEC_RE.match(line):
            ins = Dec(m.group(1), int(m.group(2)))
        elif m := _GOTO_RE.match(line):
            ins = Goto(int(m.group(1)))
        elif _HALT_RE.match(line):
            ins = Halt()
        else:
            raise ParseError(f"cannot parse instruction {line!r}", lineno, source)
        instructions.append(ins)
        where.append(lineno)
    if not instructions:
        raise ParseError("program has no instructions", None, source)
    for ins, lineno in zip(instructions, where):
        if isinstance(ins, (Dec, Goto)) and not 1 <= ins.target <= len(instructions):
            raise ParseError(
                f"jump target {ins.target} out of range 1..{len(instructions)}", lineno, source
            )
    machine = RegisterMachine(tuple(instructions), input_register, output_register)
    for message in validate(machine):
        warnings.warn(message, ImplicitHaltWarning, stacklevel=2)
    return machine


def validate(m: RegisterMachine) -> list[str]:
    """Non-fatal problems with a machine, as human-readable messages."""
    problems = []
    if m.falls_off_end:
        problems.append(
            f"control can run past line {len(m)}; line {len(m) + 1} is treated as an implicit halt"
        )
    return problems


def initial_state(m: RegisterMachine, n: int) -> RmState:
    if n < 0:
        raise ValueError("input must be a natural number")
    registers = {r: 0 for r in m.registers}
    registers[m.input_register] = n
    return RmState(1, registers)


def step(m: RegisterMachine, s: RmState) -> RmState:
    """Execute the instruction at ``s.line``."""
    if s.halted:
        raise StepAfterHalt(f"machine already halted at line {s.line}")
    ins = m.instruction(s.line)
    if isinstance(ins, Halt):
        return RmState(s.line, s.registers, halted=True)
    if isinstance(ins, Goto):
        return RmState(ins.target, s.registers)
    regs = dict(s.registers)
    if isinstance(ins, Inc):
        regs[ins.register] = regs.get(ins.register, 0) + 1
        return RmState(s.line + 1, regs)
    if regs.get(ins.register, 0) > 0:
        regs[ins.register] -= 1
        return RmState(s.line + 1, regs)
    return RmState(ins.target, s.registers)


def run(m: RegisterMachine, n: int, fuel: int, trace: bool = False) -> RmResult:
    """
    Run from line 1 with the input register set to ``n``.

    ``steps`` counts executed non-halt instructions; reaching a halt line costs
    nothing. If ``fuel`` steps pass without reaching a halt line the result has
    ``halted=False``. With ``trace=True`` the result carries every visited state,
    initial and final included (the final halt-line state is recorded unhalted).
    """
    s = initial_state(m, n)
    states = [s] if trace else None
    steps = 0
    while True:
        if isinstance(m.instruction(s.line), Halt):
            return RmResult(True, step(m, s), steps, states)
        if steps >= fuel:
            return RmResult(False, s, steps, states)
        s = step(m, s)
        steps += 1
        if states is not None:
            states.append(s)

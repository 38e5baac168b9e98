"""
Compile a register machine into an iCRN driven by a stateful three-phase
oscillator ``A_i -> B_i -> C_i -> A_next``.

For each non-halt line ``i`` with potential predecessors ``j1..jl``::

    A_i -[C_j1,...,C_jl]-> B_i
    B_i -[A_i]-> C_i
    inc r:     C_i -[B_i]-> A_{i+1} + R
    dec r,k:   C_i + R -[B_i]-> A_{i+1}
               C_i -[B_i,R]-> A_k
    goto k:    C_i -[B_i]-> A_k

Halt lines get no reactions. The run starts from ``{1 A_1, n R_in}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .core import Configuration, Icrn, ParseError, Reaction, format_icrn, parse_configuration, parse_icrn, read_pragmas
from .regmachine import Dec, Goto, Halt, Inc, RegisterMachine


@dataclass(frozen=True)
class CompiledNet:
    net: Icrn
    machine: RegisterMachine | None
    state_species: dict[int, tuple[str, str, str]]
    register_species: dict[str, str]
    input_species: str
    output_species: str
    initial_context: Configuration

    @cached_property
    def oscillator_species(self) -> frozenset[str]:
        names = {s for triple in self.state_species.values() for s in triple}
        return frozenset(names & set(self.net.species))

    @cached_property
    def species_state(self) -> dict[str, tuple[int, str]]:
        """Oscillator species -> (line, phase letter)."""
        out = {}
        for i, triple in self.state_species.items():
            for phase, name in zip("ABC", triple):
                out[name] = (i, phase)
        return out

    @property
    def halt_states(self) -> tuple[int, ...]:
        return self.machine.halt_lines if self.machine is not None else ()


def state_species(i: int) -> tuple[str, str, str]:
    return f"A_{i}", f"B_{i}", f"C_{i}"


def register_species_names(registers: tuple[str, ...]) -> dict[str, str]:
    """
    ``r_in -> R_in``, ``r1 -> R_1``, anything else ``x -> R_x``.

    If the shortened names collide, every register falls back to ``R_<name>``.
    """

    def short(reg: str) -> str:
        if reg.startswith("r_") and len(reg) > 2:
            return "R_" + reg[2:]
        if reg.startswith("r") and reg[1:].isdigit():
            return "R_" + reg[1:]
        return "R_" + reg

    names = {reg: short(reg) for reg in registers}
    if len(set(names.values())) < len(names):
        names = {reg: "R_" + reg for reg in registers}
    return names


def predecessors(m: RegisterMachine, i: int) -> frozenset[int]:
    """
    Lines that can pass control to line ``i``: the previous line when it is an
    inc or dec (fall-through), plus every dec or goto jumping to ``i``.
    """
    if not 1 <= i <= len(m) + 1:
        raise IndexError(f"state {i} out of range")
    preds = set()
    if i > 1 and isinstance(m.instruction(i - 1), (Inc, Dec)):
        preds.add(i - 1)
    for j, ins in enumerate(m.instructions, 1):
        if isinstance(ins, (Dec, Goto)) and ins.target == i:
            preds.add(j)
    return frozenset(preds)


def compile_machine(m: RegisterMachine) -> CompiledNet:
    reg = register_species_names(m.registers)
    n_states = len(m) + (1 if m.falls_off_end else 0)
    reactions: list[Reaction] = []
    for i in range(1, len(m) + 1):
        ins = m.instruction(i)
        if isinstance(ins, Halt):
            continue
        a, b, c = state_species(i)
        guards = tuple(state_species(j)[2] for j in sorted(predecessors(m, i)))
        reactions.append(Reaction(((a, 1),), guards, ((b, 1),)))
        reactions.append(Reaction(((b, 1),), (a,), ((c, 1),)))
        a_next = state_species(i + 1)[0]
        if isinstance(ins, Inc):
            reactions.append(Reaction(((c, 1),), (b,), ((a_next, 1), (reg[ins.register], 1))))
        elif isinstance(ins, Dec):
            r = reg[ins.register]
            reactions.append(Reaction(((c, 1), (r, 1)), (b,), ((a_next, 1),)))
            reactions.append(Reaction(((c, 1),), (b, r), ((state_species(ins.target)[0], 1),)))
        else:
            reactions.append(Reaction(((c, 1),), (b,), ((state_species(ins.target)[0], 1),)))

    # canonical order: A_1 B_1 C_1 ... then registers; halt lines contribute A_i only
    mentioned = {s for rxn in reactions for s in rxn.species()}
    species: list[str] = []
    triples = {}
    for i in range(1, n_states + 1):
        triple = state_species(i)
        triples[i] = triple
        if isinstance(m.instruction(i), Halt):
            if i == 1 or triple[0] in mentioned:
                species.append(triple[0])
        else:
            species.extend(triple)
    species.extend(reg[r] for r in m.registers)
    net = Icrn(tuple(species), tuple(reactions))
    return CompiledNet(
        net=net,
        machine=m,
        state_species=triples,
        register_species=reg,
        input_species=reg[m.input_register],
        output_species=reg[m.output_register],
        initial_context=Configuration({"A_1": 1}),
    )


def initial_configuration(cn: CompiledNet, n: int) -> Configuration:
    """``{1 A_1, n R_in}``."""
    if n < 0:
        raise ValueError("input must be a natural number")
    conc = dict(cn.initial_context)
    conc[cn.input_species] = conc.get(cn.input_species, 0) + n
    return Configuration(conc)


def format_compiled(cn: CompiledNet) -> str:
    """Self-describing net file: pragmas for input, output and context, then the reactions."""
    header = [
        f"#@input {cn.input_species}",
        f"#@output {cn.output_species}",
        "#@context " + ",".join(f"{k}={v}" for k, v in cn.initial_context.items()),
    ]
    if cn.machine is not None:
        header.append("# compiled from:")
        header.extend(f"#   {i}: {ins}" for i, ins in enumerate(cn.machine.instructions, 1))
    body = format_icrn(cn.net)
    if not body.startswith("#@species"):
        header.append("#@species " + ",".join(cn.net.species))
    return "\n".join(header) + "\n" + body


@dataclass(frozen=True)
class NetFile:
    """A net loaded from text, with whatever pragmas it carried."""

    net: Icrn
    input_species: str | None = None
    output_species: str | None = None
    context: Configuration | None = None


def load_net(text: str, source: str | None = None) -> NetFile:
    net = parse_icrn(text, source)
    pragmas = read_pragmas(text)
    context = None
    if "context" in pragmas:
        try:
            context = parse_configuration(pragmas["context"])
        except ParseError as e:
            raise ParseError(f"#@context: {e.message}", None, source) from None
    return NetFile(net, pragmas.get("input"), pragmas.get("output"), context)

"""
Exact rate-independent execution by maximal-progress segments.

Each segment runs the single applicable reaction until it is no longer
applicable, i.e. until some species it net-consumes is exhausted. For the
compiled nets this lands on the next transition point every time, with flux 1.
Time is measured in segments.
"""

from __future__ import annotations

import csv
import enum
import io
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .compiler import CompiledNet, initial_configuration
from .core import Configuration, ICRNError, Icrn, Reaction, apply_segment, format_number


class NoApplicable(ICRNError):
    """No reaction is applicable: the configuration is static."""


class Nondeterministic(ICRNError):
    def __init__(self, config: Configuration, applicable: tuple[int, ...]):
        self.config = config
        self.applicable = applicable
        super().__init__(f"{len(applicable)} reactions applicable: {list(applicable)}")


class UnboundedSegment(ICRNError):
    """The applicable reaction consumes nothing on net, so it can run forever."""

    def __init__(self, reaction_index: int):
        self.reaction_index = reaction_index
        super().__init__(f"reaction {reaction_index} net-consumes no species; maximal flux is unbounded")


class NonIntegerOutput(ICRNError):
    pass


class Transition(NamedTuple):
    config: Configuration
    reaction: int
    flux: Fraction


def max_flux(rxn: Reaction, c: Mapping[str, Fraction]) -> Fraction | None:
    """
    Largest flux keeping every concentration nonnegative, or None when the
    reaction net-consumes nothing.
    """
    best = None
    for name, d in rxn.net_change().items():
        if d < 0:
            u = Fraction(c.get(name, 0)) / -d
            if best is None or u < best:
                best = u
    return best


def next_transition(net: Icrn, c: Configuration, lowest_index: bool = False) -> Transition:
    """
    Run the applicable reaction to its maximal flux.

    With ``lowest_index=True`` the lowest-indexed applicable reaction is chosen
    when several are applicable, instead of raising.

    Raises:
        NoApplicable: ``c`` is static.
        Nondeterministic: more than one reaction is applicable.
        UnboundedSegment: the reaction could run forever.
    """
    if not isinstance(c, Configuration):
        c = Configuration(c)
    app = net.applicable_for_support(c.support)
    if not app:
        raise NoApplicable("configuration is static")
    if len(app) > 1 and not lowest_index:
        raise Nondeterministic(c, app)
    j = app[0]
    u = max_flux(net.reactions[j], c)
    if u is None:
        raise UnboundedSegment(j)
    return Transition(apply_segment(net, c, {j: u}), j, u)


@dataclass(frozen=True)
class Trajectory:
    """Segment endpoints ``points[0..k]`` and the ``(reaction, flux)`` fired in each segment."""

    points: tuple[Configuration, ...]
    fired: tuple[tuple[int, Fraction], ...] = ()

    def __post_init__(self):
        if len(self.points) != len(self.fired) + 1:
            raise ValueError("a trajectory with k segments needs k + 1 points")

    def __len__(self) -> int:
        return len(self.fired)

    def series(self, species: str) -> list[Fraction]:
        return [p[species] for p in self.points]

    @property
    def times(self) -> list[int]:
        return list(range(len(self.points)))


class Outcome(enum.Enum):
    STATIC = "static"
    FUEL_EXHAUSTED = "fuel"
    NONDETERMINISTIC = "nondeterministic"


@dataclass(frozen=True)
class ExecResult:
    outcome: Outcome
    final: Configuration
    trajectory: Trajectory
    applicable: tuple[int, ...] = field(default=())

    @property
    def segments(self) -> int:
        return len(self.trajectory)


def run_to_static(
    net: Icrn, c0: Mapping[str, Fraction], max_segments: int, lowest_index: bool = False
) -> ExecResult:
    """Step with :func:`next_transition` until static, out of budget, or nondeterministic."""
    c = c0 if isinstance(c0, Configuration) else Configuration(c0)
    points = [c]
    fired: list[tuple[int, Fraction]] = []
    while True:
        app = net.applicable_for_support(c.support)
        if not app:
            return ExecResult(Outcome.STATIC, c, Trajectory(tuple(points), tuple(fired)))
        if len(app) > 1 and not lowest_index:
            return ExecResult(Outcome.NONDETERMINISTIC, c, Trajectory(tuple(points), tuple(fired)), app)
        if len(fired) >= max_segments:
            return ExecResult(Outcome.FUEL_EXHAUSTED, c, Trajectory(tuple(points), tuple(fired)))
        c, j, u = next_transition(net, c, lowest_index)
        points.append(c)
        fired.append((j, u))


def simulate_function(cn: CompiledNet, n: int, max_segments: int) -> int | None:
    """
    Compute ``f(n)`` with the compiled net. Returns None if the segment budget
    runs out before a static configuration is reached.

    Raises:
        NonIntegerOutput: output concentration at the static configuration is not a natural number.
        Nondeterministic: more than one reaction became applicable.
    """
    result = run_to_static(cn.net, initial_configuration(cn, n), max_segments)
    if result.outcome is Outcome.NONDETERMINISTIC:
        raise Nondeterministic(result.final, result.applicable)
    if result.outcome is Outcome.FUEL_EXHAUSTED:
        return None
    y = result.final[cn.output_species]
    if y.denominator != 1:
        raise NonIntegerOutput(f"output {cn.output_species} = {y} is not an integer")
    return int(y)


@dataclass(frozen=True)
class TransitionPoint:
    index: int
    config: Configuration
    oscillator_species: str


def transition_point_species(cn: CompiledNet, c: Configuration) -> str | None:
    """The oscillator species ``c`` is a transition point of, if any."""
    osc = cn.oscillator_species
    present = [s for s in c.support if s in osc]
    if len(present) == 1 and c[present[0]] == 1:
        return present[0]
    return None


def transition_points(cn: CompiledNet, trajectory: Trajectory) -> list[TransitionPoint]:
    out = []
    for k, c in enumerate(trajectory.points):
        s = transition_point_species(cn, c)
        if s is not None:
            out.append(TransitionPoint(k, c, s))
    return out


def project_trace(cn: CompiledNet, trajectory: Trajectory) -> list[tuple[int, dict[str, Fraction]]]:
    """
    ``(line, registers)`` at every transition point of an ``A_i`` species,
    in the same shape as the interpreter's trace.
    """
    species_state = cn.species_state
    out = []
    for tp in transition_points(cn, trajectory):
        line, phase = species_state[tp.oscillator_species]
        if phase == "A":
            regs = {r: tp.config[s] for r, s in cn.register_species.items()}
            out.append((line, regs))
    return out


def build_ring_oscillator(n: int) -> Icrn:
    """``X_i -[X_{i-1}]-> X_{i+1}`` for ``i`` in ``0..n-1``, indices mod ``n``."""
    if n < 3:
        raise ValueError(f"ring oscillator needs at least 3 species, got {n}")
    species = tuple(f"X_{i}" for i in range(n))
    reactions = tuple(
        Reaction(((species[i], 1),), (species[(i - 1) % n],), ((species[(i + 1) % n], 1),))
        for i in range(n)
    )
    return Icrn(species, reactions)


def format_transition_log(net: Icrn, trajectory: Trajectory, species: Sequence[str] | None = None) -> str:
    """CSV with header ``segment,fired_reaction,flux,<species...>``, one row per segment endpoint."""
    species = list(net.species if species is None else species)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["segment", "fired_reaction", "flux", *species])
    for k, point in enumerate(trajectory.points):
        if k == 0:
            head = [0, "", ""]
        else:
            j, u = trajectory.fired[k - 1]
            head = [k, j, format_number(u)]
        w.writerow(head + [format_number(point[s]) for s in species])
    return buf.getvalue()


def read_transition_log(text: str) -> Trajectory:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0][:3] != ["segment", "fired_reaction", "flux"]:
        raise ValueError("not a transition log: header must start with segment,fired_reaction,flux")
    species = rows[0][3:]
    points = []
    fired = []
    for k, row in enumerate(rows[1:]):
        points.append(Configuration(zip(species, (Fraction(v) for v in row[3:]))))
        if k > 0:
            fired.append((int(row[1]), Fraction(row[2])))
    return Trajectory(tuple(points), tuple(fired))


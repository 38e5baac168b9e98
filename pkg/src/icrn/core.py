"""
Inhibitory chemical reaction networks: species, reactions, configurations,
and the exact (rational) applicability and stoichiometry primitives.

A reaction is written in text as

.. code-block:: text

    A + 2 B -[I]-> A + 3 C      # reactants A, 2B; inhibitor I; products A, 3C
    X -> Y                      # no inhibitors
    X + Y -[I, J]-> 0           # empty product side

A reaction is *applicable* in a configuration when all of its reactants are
present (positive concentration) and none of its inhibitors are.
All concentrations here are :class:`fractions.Fraction`, never floats:
applicability hinges on exact zero tests.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Union

import numpy as np

Number = Union[int, Fraction, str]

MAX_COEFFICIENT = 2**31 - 1

_SPECIES_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_TERM_RE = re.compile(r"\s*(?:(\d+)\s*)?([A-Za-z_][A-Za-z0-9_]*)\s*\Z")
_ARROW_RE = re.compile(r"-\[([^\]]*)\]->|->")


class ICRNError(Exception):
    """Base class for errors raised by this package."""


class ParseError(ICRNError, ValueError):
    """Malformed input text. ``lineno`` is 1-based, or None if unknown."""

    def __init__(self, message: str, lineno: int | None = None, source: str | None = None):
        self.message = message
        self.lineno = lineno
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if lineno is not None:
            where += f"{lineno}:"
        super().__init__(f"{where} {message}" if where else message)


class InapplicableFlux(ICRNError):
    """Positive flux was assigned to a reaction that is not applicable."""

    def __init__(self, reaction_index: int):
        self.reaction_index = reaction_index
        super().__init__(f"reaction {reaction_index} has positive flux but is not applicable")


class NegativeResult(ICRNError):
    """A segment would drive some species below zero."""

    def __init__(self, species: str, value: Fraction):
        self.species = species
        self.value = value
        super().__init__(f"species {species} would reach negative concentration {value}")


def is_species_name(name: str) -> bool:
    return bool(_SPECIES_RE.match(name))


def _check_species_name(name: str) -> None:
    if not is_species_name(name):
        raise ValueError(f"invalid species name {name!r}")


def _stoich_tuple(terms: Mapping[str, int] | Iterable[tuple[str, int]]) -> tuple[tuple[str, int], ...]:
    """Merge repeated species, keep first-appearance order, drop zero coefficients."""
    items = terms.items() if isinstance(terms, Mapping) else terms
    merged: dict[str, int] = {}
    for name, coeff in items:
        _check_species_name(name)
        if not isinstance(coeff, (int, np.integer)) or coeff < 0:
            raise ValueError(f"stoichiometric coefficient of {name} must be a natural number, got {coeff!r}")
        merged[name] = merged.get(name, 0) + int(coeff)
        if merged[name] > MAX_COEFFICIENT:
            raise ValueError(f"stoichiometric coefficient of {name} exceeds {MAX_COEFFICIENT}")
    return tuple((name, c) for name, c in merged.items() if c > 0)


@dataclass(frozen=True)
class Reaction:
    """
    A reaction ``(r, inhibitors, p)``.

    ``reactants`` and ``products`` are stored as tuples of ``(species, coefficient)``
    pairs in first-appearance order; ``inhibitors`` as a deduplicated tuple.
    Dicts are accepted by the constructor.
    """

    reactants: tuple[tuple[str, int], ...]
    inhibitors: tuple[str, ...] = ()
    products: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "reactants", _stoich_tuple(self.reactants))
        object.__setattr__(self, "products", _stoich_tuple(self.products))
        inhibitors = tuple(dict.fromkeys(self.inhibitors))
        for name in inhibitors:
            _check_species_name(name)
        object.__setattr__(self, "inhibitors", inhibitors)
        if not self.reactants:
            raise ValueError("reaction must have at least one reactant")
        if dict(self.reactants) == dict(self.products):
            raise ValueError(f"reaction {self} has zero net effect (reactants equal products)")

    @property
    def reactant_map(self) -> dict[str, int]:
        return dict(self.reactants)

    @property
    def product_map(self) -> dict[str, int]:
        return dict(self.products)

    def net_change(self) -> dict[str, int]:
        """Nonzero entries of ``p - r``."""
        delta: dict[str, int] = {}
        for name, c in self.reactants:
            delta[name] = delta.get(name, 0) - c
        for name, c in self.products:
            delta[name] = delta.get(name, 0) + c
        return {name: d for name, d in delta.items() if d != 0}

    def species(self) -> Iterator[str]:
        """Species in textual order (reactants, inhibitors, products), with repeats."""
        for name, _ in self.reactants:
            yield name
        yield from self.inhibitors
        for name, _ in self.products:
            yield name

    def __str__(self) -> str:
        return format_reaction(self)


@dataclass(frozen=True)
class Icrn:
    """An inhibitory CRN: ordered species list and ordered reaction list."""

    species: tuple[str, ...]
    reactions: tuple[Reaction, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "species", tuple(self.species))
        object.__setattr__(self, "reactions", tuple(self.reactions))
        seen = set()
        for name in self.species:
            _check_species_name(name)
            if name in seen:
                raise ValueError(f"duplicate species {name}")
            seen.add(name)
        for i, rxn in enumerate(self.reactions):
            for name in rxn.species():
                if name not in seen:
                    raise ValueError(f"reaction {i} ({rxn}) mentions unknown species {name}")

    @classmethod
    def from_reactions(cls, reactions: Iterable[Reaction], species: Iterable[str] = ()) -> Icrn:
        """Build a net whose species are ``species`` followed by any others in first-appearance order."""
        reactions = tuple(reactions)
        names = dict.fromkeys(species)
        for rxn in reactions:
            names.update(dict.fromkeys(rxn.species()))
        return cls(tuple(names), reactions)

    @cached_property
    def species_index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.species)}

    @cached_property
    def _reactant_sets(self) -> tuple[frozenset[str], ...]:
        return tuple(frozenset(name for name, _ in rxn.reactants) for rxn in self.reactions)

    @cached_property
    def _inhibitor_sets(self) -> tuple[frozenset[str], ...]:
        return tuple(frozenset(rxn.inhibitors) for rxn in self.reactions)

    @cached_property
    def _consumers(self) -> dict[str, tuple[int, ...]]:
        # species -> indices of reactions having it as a reactant
        index: dict[str, list[int]] = {}
        for i, rxn in enumerate(self.reactions):
            for name, _ in rxn.reactants:
                index.setdefault(name, []).append(i)
        return {name: tuple(ids) for name, ids in index.items()}

    def applicable_for_support(self, support: frozenset[str] | set[str]) -> tuple[int, ...]:
        candidates: set[int] = set()
        for name in support:
            candidates.update(self._consumers.get(name, ()))
        return tuple(
            i
            for i in sorted(candidates)
            if self._reactant_sets[i] <= support and not (self._inhibitor_sets[i] & support)
        )

    def __str__(self) -> str:
        return format_icrn(self)


class Configuration(Mapping[str, Fraction]):
    """
    Immutable nonnegative rational concentration vector.

    Missing species read as 0; zero entries are not stored, so two
    configurations compare equal exactly when they have the same support and values.
    """

    __slots__ = ("_conc", "_support")

    def __init__(self, concentrations: Mapping[str, Number] | Iterable[tuple[str, Number]] = ()):
        items = concentrations.items() if isinstance(concentrations, Mapping) else concentrations
        conc: dict[str, Fraction] = {}
        for name, value in items:
            _check_species_name(name)
            v = value if type(value) is Fraction else Fraction(value)
            if v < 0:
                raise ValueError(f"concentration of {name} is negative: {v}")
            if v:
                conc[name] = v
            else:
                conc.pop(name, None)
        self._conc = conc
        self._support = frozenset(conc)

    @classmethod
    def _trusted(cls, conc: dict[str, Fraction]) -> Configuration:
        # caller guarantees positive Fraction values and valid names
        self = cls.__new__(cls)
        self._conc = conc
        self._support = frozenset(conc)
        return self

    def __getitem__(self, name: str) -> Fraction:
        return self._conc.get(name, Fraction(0))

    def __contains__(self, name: object) -> bool:
        return name in self._conc

    def __iter__(self) -> Iterator[str]:
        return iter(self._conc)

    def __len__(self) -> int:
        return len(self._conc)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Configuration):
            return self._conc == other._conc
        if isinstance(other, Mapping):
            return self == Configuration(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._conc.items()))

    @property
    def support(self) -> frozenset[str]:
        """Species with positive concentration."""
        return self._support

    def __repr__(self) -> str:
        return f"Configuration({{{', '.join(f'{k!r}: {format_number(v)}' for k, v in self._conc.items())}}})"

    def __str__(self) -> str:
        return format_configuration(self)


def format_number(x: Fraction | int) -> str:
    """``p/q`` for non-integers, plain integer otherwise."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_configuration(c: Mapping[str, Fraction], order: Iterable[str] | None = None) -> str:
    names = list(c) if order is None else [s for s in order if c.get(s, 0)]
    return ",".join(f"{name}={format_number(c[name])}" for name in names)


def parse_configuration(text: str) -> Configuration:
    """
    Parse ``"A_1=1,R_in=3"``. Values may be integers, decimals, or ``p/q``.

    Raises:
        ParseError: on malformed pairs, bad species names, negative values,
            or a species given twice.
    """
    conc: dict[str, Fraction] = {}
    text = text.strip()
    if not text:
        return Configuration()
    for part in text.split(","):
        name, sep, value = part.partition("=")
        name, value = name.strip(), value.strip()
        if not sep or not is_species_name(name):
            raise ParseError(f"expected species=value, got {part.strip()!r}")
        if name in conc:
            raise ParseError(f"species {name} given twice")
        try:
            v = Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad concentration {value!r} for {name}") from None
        if v < 0:
            raise ParseError(f"negative concentration for {name}")
        conc[name] = v
    return Configuration(conc)


def _parse_side(text: str, lineno: int, side: str) -> list[tuple[str, int]]:
    text = text.strip()
    if side == "products" and text in ("0", "∅"):
        return []
    if text in ("0", "∅"):
        raise ParseError("reactions with no reactants are not supported", lineno)
    if not text:
        raise ParseError(f"empty {side} side", lineno)
    terms = []
    for raw in text.split("+"):
        m = _TERM_RE.match(raw)
        if not m:
            raise ParseError(f"bad term {raw.strip()!r} in {side}", lineno)
        coeff = int(m.group(1)) if m.group(1) is not None else 1
        if coeff == 0:
            raise ParseError(f"zero coefficient for {m.group(2)}", lineno)
        if coeff > MAX_COEFFICIENT:
            raise ParseError(f"coefficient {coeff} exceeds {MAX_COEFFICIENT}", lineno)
        terms.append((m.group(2), coeff))
    return terms


def parse_reaction(line: str, lineno: int = 1) -> Reaction:
    arrows = list(_ARROW_RE.finditer(line))
    if len(arrows) != 1:
        raise ParseError("expected exactly one arrow '->' or '-[...]->'", lineno)
    arrow = arrows[0]
    reactants = _parse_side(line[: arrow.start()], lineno, "reactants")
    products = _parse_side(line[arrow.end() :], lineno, "products")
    inhibitors: list[str] = []
    if arrow.group(1) is not None:
        for name in arrow.group(1).split(","):
            name = name.strip()
            if not is_species_name(name):
                raise ParseError(f"bad inhibitor name {name!r}", lineno)
            inhibitors.append(name)
        if not inhibitors:
            raise ParseError("empty inhibitor list", lineno)
    try:
        return Reaction(tuple(reactants), tuple(inhibitors), tuple(products))
    except ValueError as e:
        raise ParseError(str(e), lineno) from None


def read_pragmas(text: str) -> dict[str, str]:
    """Collect ``#@key value`` lines. Later duplicates override earlier ones."""
    pragmas = {}
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("#@"):
            key, _, value = line[2:].partition(" ")
            pragmas[key.strip()] = value.strip()
    return pragmas


def parse_icrn(text: str, source: str | None = None) -> Icrn:
    """
    Parse one reaction per line. ``#`` starts a comment; blank lines are ignored.

    Species are ordered by first appearance, unless a ``#@species a,b,...`` pragma
    lists some of them first.

    Raises:
        ParseError: with the offending line number.
    """
    reactions = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            reactions.append(parse_reaction(line, lineno))
        except ParseError as e:
            raise ParseError(e.message, lineno, source) from None
    declared: list[str] = []
    species_pragma = read_pragmas(text).get("species", "")
    for name in filter(None, (s.strip() for s in species_pragma.split(","))):
        if not is_species_name(name):
            raise ParseError(f"bad species name {name!r} in #@species pragma", None, source)
        declared.append(name)
    return Icrn.from_reactions(reactions, declared)


def _format_side(terms: tuple[tuple[str, int], ...]) -> str:
    if not terms:
        return "0"
    return " + ".join(name if c == 1 else f"{c} {name}" for name, c in terms)


def format_reaction(rxn: Reaction) -> str:
    arrow = f"-[{','.join(rxn.inhibitors)}]->" if rxn.inhibitors else "->"
    return f"{_format_side(rxn.reactants)} {arrow} {_format_side(rxn.products)}"


def format_icrn(net: Icrn) -> str:
    """
    Inverse of :func:`parse_icrn`. A ``#@species`` pragma is emitted only when
    the species list is not already recoverable from the reactions.
    """
    lines = [format_reaction(rxn) for rxn in net.reactions]
    if Icrn.from_reactions(net.reactions).species != net.species:
        lines.insert(0, "#@species " + ",".join(net.species))
    return "".join(line + "\n" for line in lines)


def stoichiometry_matrix(net: Icrn) -> np.ndarray:
    """``|species| x |reactions|`` integer matrix with entry ``p(S) - r(S)``."""
    m = np.zeros((len(net.species), len(net.reactions)), dtype=np.int64)
    idx = net.species_index
    for j, rxn in enumerate(net.reactions):
        for name, d in rxn.net_change().items():
            m[idx[name], j] = d
    return m


def applicable(net: Icrn, c: Mapping[str, Number]) -> tuple[int, ...]:
    """Indices, in reaction order, of the reactions applicable in ``c``."""
    if not isinstance(c, Configuration):
        c = Configuration(c)
    return net.applicable_for_support(c.support)


def is_static(net: Icrn, c: Mapping[str, Number]) -> bool:
    return not applicable(net, c)


def apply_segment(net: Icrn, c: Mapping[str, Number], flux: Mapping[int, Number]) -> Configuration:
    """
    Run one straight-line segment: return ``c + M u`` computed exactly.

    Every reaction with positive flux must be applicable at ``c``. Nonnegativity
    of the endpoint implies nonnegativity along the whole segment.

    Raises:
        InapplicableFlux: positive flux on a reaction not applicable at ``c``.
        NegativeResult: the endpoint has a negative entry.
    """
    if not isinstance(c, Configuration):
        c = Configuration(c)
    support = c.support
    result = dict(c._conc)
    for j, u in flux.items():
        u = Fraction(u)
        if u < 0:
            raise ValueError(f"flux for reaction {j} is negative")
        if not u:
            continue
        if j not in net.applicable_for_support(support):
            raise InapplicableFlux(j)
        for name, d in net.reactions[j].net_change().items():
            result[name] = result.get(name, Fraction(0)) + d * u
    for name, v in result.items():
        if v < 0:
            raise NegativeResult(name, v)
    return Configuration._trusted({k: v for k, v in result.items() if v})

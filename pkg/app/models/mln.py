from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

from app.core.exceptions import ValidationException
from app.models.formula import (
    Atom,
    Formula,
    Literal,
    atoms_of,
    is_ground,
)


@dataclass(frozen=True)
class TypedDomain:
    """Ordered map from type tag to ordered constant names."""

    entries: Tuple[Tuple[str, Tuple[str, ...]], ...] = ()

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Sequence[str]]) -> "TypedDomain":
        return cls(tuple((tag, tuple(constants)) for tag, constants in mapping.items()))

    @cached_property
    def mapping(self) -> Dict[str, Tuple[str, ...]]:
        return dict(self.entries)

    @property
    def type_tags(self) -> Tuple[str, ...]:
        return tuple(tag for tag, _ in self.entries)

    def constants(self, type_tag: str) -> Tuple[str, ...]:
        return self.mapping.get(type_tag, ())

    def all_constants(self) -> Tuple[str, ...]:
        seen: Dict[str, None] = {}
        for _, constants in self.entries:
            for c in constants:
                seen.setdefault(c)
        return tuple(seen)

    def type_of(self, constant: str) -> Optional[str]:
        for tag, constants in self.entries:
            if constant in constants:
                return tag
        return None

    def merged(self, other: "TypedDomain") -> "TypedDomain":
        """Union keeping this domain's order; new constants and tags appended."""
        mapping: Dict[str, Tuple[str, ...]] = dict(self.mapping)
        for tag, constants in other.entries:
            current = mapping.get(tag, ())
            mapping[tag] = current + tuple(c for c in constants if c not in current)
        return TypedDomain.from_mapping(mapping)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class WeightedFormula:
    formula: Formula
    weight: Fraction

    def __str__(self) -> str:
        return f"{self.weight} :: {self.formula}"


@dataclass(frozen=True)
class Mln:
    """Hard constraints plus weighted soft formulas, optionally over a typed domain."""

    soft: Tuple[WeightedFormula, ...] = ()
    hard: Tuple[Formula, ...] = ()
    domain: TypedDomain = field(default_factory=TypedDomain)
    name: str = ""

    @cached_property
    def is_ground(self) -> bool:
        return all(is_ground(f) for f in self.formulas())

    def formulas(self) -> Iterator[Formula]:
        for wf in self.soft:
            yield wf.formula
        yield from self.hard

    @cached_property
    def atoms(self) -> Tuple[Atom, ...]:
        """Ground-atom universe in canonical (text) order."""
        seen = {atom for f in self.formulas() for atom in atoms_of(f)}
        return tuple(sorted(seen, key=str))

    @property
    def total_weight(self) -> Fraction:
        return sum((wf.weight for wf in self.soft), Fraction(0))

    def with_formulas(
        self, soft: Iterable[WeightedFormula], hard: Iterable[Formula]
    ) -> "Mln":
        return Mln(tuple(soft), tuple(hard), self.domain, self.name)

    def __len__(self) -> int:
        return len(self.soft) + len(self.hard)


@dataclass(frozen=True)
class EvidenceSet:
    """A set of ground formulas, kept in canonical text order."""

    formulas: Tuple[Formula, ...] = ()

    def __post_init__(self):
        unique = {f: None for f in self.formulas}
        object.__setattr__(self, "formulas", tuple(sorted(unique, key=str)))
        for f in self.formulas:
            if not is_ground(f):
                raise ValidationException(f"Evidence must be ground, got {f}")

    @classmethod
    def of(cls, *formulas: Formula) -> "EvidenceSet":
        return cls(tuple(formulas))

    @classmethod
    def from_literals(cls, literals: Iterable[Literal]) -> "EvidenceSet":
        return cls(tuple(lit.to_formula() for lit in literals))

    @cached_property
    def key(self) -> frozenset:
        return frozenset(self.formulas)

    def literals(self) -> Tuple[Literal, ...]:
        literals = []
        for f in self.formulas:
            lit = Literal.from_formula(f)
            if lit is None:
                raise ValidationException(f"Evidence formula {f} is not a literal")
            literals.append(lit)
        return tuple(sorted(literals))

    def atoms(self) -> Tuple[Atom, ...]:
        seen: Dict[Atom, None] = {}
        for f in self.formulas:
            for atom in atoms_of(f):
                seen.setdefault(atom)
        return tuple(seen)

    def union(self, *formulas: Formula) -> "EvidenceSet":
        return EvidenceSet(self.formulas + tuple(formulas))

    def __iter__(self) -> Iterator[Formula]:
        return iter(self.formulas)

    def __len__(self) -> int:
        return len(self.formulas)

    def __str__(self) -> str:
        return "{" + ", ".join(str(f) for f in self.formulas) + "}"


EMPTY_EVIDENCE = EvidenceSet()

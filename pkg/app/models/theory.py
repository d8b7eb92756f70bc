from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from app.core.constants import LevelKind
from app.models.formula import Formula, format_formula, is_ground
from app.models.mln import TypedDomain
from app.models.penalty import Penalty, Rational, format_rational

_LEVEL_RANK = {LevelKind.BOTTOM: 0, LevelKind.FINITE: 1, LevelKind.HARD: 2}


@total_ordering
@dataclass(frozen=True)
class Level:
    """Certainty stratum: Bottom < Finite(p) ordered by p < Hard."""

    kind: LevelKind
    pen: Fraction = Fraction(0)

    @classmethod
    def finite(cls, pen: Rational) -> "Level":
        return cls(LevelKind.FINITE, Fraction(pen))

    @classmethod
    def from_penalty(cls, penalty: Penalty) -> "Level":
        return HARD if penalty.is_infinite else cls.finite(penalty.value)

    @property
    def sort_key(self) -> Tuple[int, Fraction]:
        return (_LEVEL_RANK[self.kind], self.pen)

    @property
    def is_hard(self) -> bool:
        return self.kind == LevelKind.HARD

    @property
    def is_finite(self) -> bool:
        return self.kind == LevelKind.FINITE

    def __lt__(self, other: "Level") -> bool:
        return self.sort_key < other.sort_key

    def label(self) -> str:
        if self.kind == LevelKind.HARD:
            return "1"
        if self.kind == LevelKind.BOTTOM:
            return "lbot"
        return f"l{format_rational(self.pen)}"

    def __str__(self) -> str:
        return self.label()


HARD = Level(LevelKind.HARD)
BOTTOM = Level(LevelKind.BOTTOM)


@dataclass(frozen=True)
class DisplayScale:
    """Display parameters of lambda_x = (K + x) / L."""

    offset: Fraction = Fraction(1)
    denominator: Fraction = Fraction(1)

    @classmethod
    def for_weights(cls, offset: Rational, total_weight: Rational) -> "DisplayScale":
        offset = Fraction(offset)
        return cls(offset, offset + Fraction(total_weight) + 1)

    @classmethod
    def fitting(cls, levels: Iterable["Level"]) -> "DisplayScale":
        """Weights-style scale keeping every given finite level strictly below 1."""
        top = max((level.pen for level in levels if level.is_finite), default=Fraction(0))
        return cls.for_weights(1, top)

    def display(self, level: Level) -> Fraction:
        if level.kind == LevelKind.HARD:
            return Fraction(1)
        if level.kind == LevelKind.BOTTOM:
            return Fraction(0)
        return (self.offset + level.pen) / self.denominator


@dataclass(frozen=True)
class PossFormula:
    formula: Formula
    level: Level

    def __str__(self) -> str:
        return f"({self.formula}, {self.level.label()})"


@dataclass(frozen=True)
class PossTheory:
    formulas: Tuple[PossFormula, ...] = ()
    domain: TypedDomain = field(default_factory=TypedDomain)
    scale: DisplayScale = field(default_factory=DisplayScale)

    def __post_init__(self):
        unique = {pf: None for pf in self.formulas}
        object.__setattr__(self, "formulas", tuple(unique))

    @classmethod
    def build(
        cls,
        formulas: Iterable[PossFormula],
        domain: Optional[TypedDomain] = None,
        scale: Optional[DisplayScale] = None,
    ) -> "PossTheory":
        """Keep only the highest level of each formula, in canonical order."""
        best: Dict[Formula, Level] = {}
        for pf in formulas:
            current = best.get(pf.formula)
            if current is None or current < pf.level:
                best[pf.formula] = pf.level
        ordered = sorted(
            (PossFormula(f, lvl) for f, lvl in best.items()), key=theory_sort_key
        )
        scale = scale or DisplayScale.fitting(pf.level for pf in ordered)
        return cls(tuple(ordered), domain or TypedDomain(), scale)

    def levels(self) -> List[Level]:
        return sorted({pf.level for pf in self.formulas})

    def cut(self, level: Level) -> List[Formula]:
        return [pf.formula for pf in self.formulas if pf.level >= level]

    @property
    def is_ground(self) -> bool:
        return all(is_ground(pf.formula) for pf in self.formulas)

    def with_formulas(self, formulas: Iterable[PossFormula]) -> "PossTheory":
        return PossTheory.build(formulas, self.domain, self.scale)

    def __iter__(self) -> Iterator[PossFormula]:
        return iter(self.formulas)

    def __len__(self) -> int:
        return len(self.formulas)


def theory_sort_key(pf: PossFormula) -> Tuple:
    return (pf.level.sort_key, format_formula(pf.formula))

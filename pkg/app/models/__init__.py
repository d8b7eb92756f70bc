# app/models/__init__.py
from app.models.formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    Constant,
    Distinct,
    Formula,
    Iff,
    Implies,
    Literal,
    Not,
    Or,
    Substitution,
    Term,
    World,
)
from app.models.mln import EMPTY_EVIDENCE, EvidenceSet, Mln, TypedDomain, WeightedFormula
from app.models.penalty import INFINITE, ZERO, Penalty
from app.models.theory import BOTTOM, HARD, DisplayScale, Level, PossFormula, PossTheory

"""
Typed first-order and propositional syntax.

Formulas are immutable trees of frozen dataclasses, so they hash and compare
structurally and can be used as dictionary keys and set members.
"""
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

from app.core.constants import ALLDIFF_PREDICATE, TermKind
from app.core.exceptions import UnknownAtomException

DEFAULT_TYPE = "obj"


@dataclass(frozen=True)
class Term:
    # Terms are identified by kind and name; the type tag is metadata
    name: str
    kind: TermKind = TermKind.CONSTANT
    type_tag: str = field(default=DEFAULT_TYPE, compare=False)

    @classmethod
    def constant(cls, name: str, type_tag: str = DEFAULT_TYPE) -> "Term":
        return cls(name, TermKind.CONSTANT, type_tag)

    @classmethod
    def variable(cls, name: str, type_tag: str = DEFAULT_TYPE) -> "Term":
        return cls(name, TermKind.VARIABLE, type_tag)

    @property
    def is_variable(self) -> bool:
        return self.kind == TermKind.VARIABLE

    def with_type(self, type_tag: str) -> "Term":
        return Term(self.name, self.kind, type_tag)

    def render(self, typed: bool = False) -> str:
        if typed and self.is_variable and self.type_tag != DEFAULT_TYPE:
            return f"{self.type_tag}:{self.name}"
        return self.name

    def __str__(self) -> str:
        return self.name


Substitution = Dict[Term, Term]


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Atom(Formula):
    predicate: str
    args: Tuple[Term, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def is_ground(self) -> bool:
        return not any(arg.is_variable for arg in self.args)


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True)
class And(Formula):
    operands: Tuple[Formula, ...]


@dataclass(frozen=True)
class Or(Formula):
    operands: Tuple[Formula, ...]


@dataclass(frozen=True)
class Implies(Formula):
    antecedent: Formula
    consequent: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Constant(Formula):
    value: bool


@dataclass(frozen=True)
class Distinct(Formula):
    """Disequality guard between two terms of the same type."""

    left: Term
    right: Term


TRUE = Constant(True)
FALSE = Constant(False)


@dataclass(frozen=True)
class Literal:
    atom: Atom
    sign: bool = True

    @cached_property
    def sort_key(self) -> Tuple[str, int]:
        # Canonical order: by atom text, positive before negative
        return (str(self.atom), 0 if self.sign else 1)

    def __lt__(self, other: "Literal") -> bool:
        return self.sort_key < other.sort_key

    def negate(self) -> "Literal":
        return Literal(self.atom, not self.sign)

    def to_formula(self) -> Formula:
        return self.atom if self.sign else Not(self.atom)

    @classmethod
    def from_formula(cls, formula: Formula) -> Optional["Literal"]:
        if isinstance(formula, Atom):
            return cls(formula, True)
        if isinstance(formula, Not) and isinstance(formula.operand, Atom):
            return cls(formula.operand, False)
        return None

    def __str__(self) -> str:
        return str(self.to_formula())


@dataclass(frozen=True)
class World:
    """Total truth assignment over an ordered ground-atom universe."""

    atoms: Tuple[Atom, ...]
    values: Tuple[bool, ...]

    @cached_property
    def _index(self) -> Dict[Atom, int]:
        return {atom: i for i, atom in enumerate(self.atoms)}

    def __getitem__(self, atom: Atom) -> bool:
        try:
            return self.values[self._index[atom]]
        except KeyError:
            raise UnknownAtomException(f"Atom {atom} is outside the world universe")

    def __contains__(self, atom: Atom) -> bool:
        return atom in self._index

    @classmethod
    def from_true_atoms(cls, atoms: Iterable[Atom], true_atoms: Iterable[Atom]) -> "World":
        atoms = tuple(atoms)
        true_set = set(true_atoms)
        return cls(atoms, tuple(atom in true_set for atom in atoms))

    def true_atoms(self) -> Tuple[Atom, ...]:
        return tuple(a for a, v in zip(self.atoms, self.values) if v)

    def literals(self) -> Tuple[Literal, ...]:
        return tuple(Literal(a, v) for a, v in zip(self.atoms, self.values))

    def __str__(self) -> str:
        return "{" + ", ".join(str(lit) for lit in self.literals()) + "}"


# Constructors that keep trees flat and small


def conj(*formulas: Formula) -> Formula:
    parts: List[Formula] = []
    for f in formulas:
        if isinstance(f, And):
            parts.extend(f.operands)
        elif f != TRUE:
            parts.append(f)
    if not parts:
        return TRUE
    if len(parts) == 1:
        return parts[0]
    return And(tuple(parts))


def disj(*formulas: Formula) -> Formula:
    parts: List[Formula] = []
    for f in formulas:
        if isinstance(f, Or):
            parts.extend(f.operands)
        elif f != FALSE:
            parts.append(f)
    if not parts:
        return FALSE
    if len(parts) == 1:
        return parts[0]
    return Or(tuple(parts))


def neg(formula: Formula) -> Formula:
    if isinstance(formula, Not):
        return formula.operand
    if isinstance(formula, Constant):
        return Constant(not formula.value)
    return Not(formula)


def conj_literals(literals: Iterable[Literal]) -> Formula:
    return conj(*(lit.to_formula() for lit in sorted(literals)))


# Traversal


def subformulas(formula: Formula) -> Iterator[Formula]:
    """Pre-order, left-to-right traversal."""
    yield formula
    if isinstance(formula, Not):
        yield from subformulas(formula.operand)
    elif isinstance(formula, (And, Or)):
        for op in formula.operands:
            yield from subformulas(op)
    elif isinstance(formula, Implies):
        yield from subformulas(formula.antecedent)
        yield from subformulas(formula.consequent)
    elif isinstance(formula, Iff):
        yield from subformulas(formula.left)
        yield from subformulas(formula.right)


def atoms_of(formula: Formula) -> Tuple[Atom, ...]:
    seen: Dict[Atom, None] = {}
    for sub in subformulas(formula):
        if isinstance(sub, Atom):
            seen.setdefault(sub)
    return tuple(seen)


def terms_of(formula: Formula) -> Tuple[Term, ...]:
    """Distinct terms in first-occurrence order."""
    seen: Dict[Term, None] = {}
    for sub in subformulas(formula):
        if isinstance(sub, Atom):
            for arg in sub.args:
                seen.setdefault(arg)
        elif isinstance(sub, Distinct):
            seen.setdefault(sub.left)
            seen.setdefault(sub.right)
    return tuple(seen)


def constants_of(formula: Formula) -> Tuple[Term, ...]:
    return tuple(t for t in terms_of(formula) if not t.is_variable)


def variables_of(formula: Formula) -> Tuple[Term, ...]:
    return tuple(t for t in terms_of(formula) if t.is_variable)


def is_ground(formula: Formula) -> bool:
    return not variables_of(formula)


def substitute(formula: Formula, theta: Mapping[Term, Term]) -> Formula:
    """Apply a term substitution everywhere, including guards."""
    if not theta:
        return formula
    if isinstance(formula, Atom):
        return Atom(formula.predicate, tuple(theta.get(a, a) for a in formula.args))
    if isinstance(formula, Distinct):
        return Distinct(theta.get(formula.left, formula.left), theta.get(formula.right, formula.right))
    if isinstance(formula, Not):
        return Not(substitute(formula.operand, theta))
    if isinstance(formula, And):
        return And(tuple(substitute(op, theta) for op in formula.operands))
    if isinstance(formula, Or):
        return Or(tuple(substitute(op, theta) for op in formula.operands))
    if isinstance(formula, Implies):
        return Implies(substitute(formula.antecedent, theta), substitute(formula.consequent, theta))
    if isinstance(formula, Iff):
        return Iff(substitute(formula.left, theta), substitute(formula.right, theta))
    return formula


def formula_size(formula: Formula) -> int:
    """Number of atom and guard occurrences; used to order rules by length."""
    return sum(1 for sub in subformulas(formula) if isinstance(sub, (Atom, Distinct)))


# Text form

_PRECEDENCE = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5}


def _precedence(formula: Formula) -> int:
    return _PRECEDENCE.get(type(formula), 6)


def _guard_text(guards: List[Distinct], typed: bool) -> List[str]:
    """Merge pairwise guards into one alldiff when they form full same-type cliques."""
    variables: Dict[Term, None] = {}
    for g in guards:
        variables.setdefault(g.left)
        variables.setdefault(g.right)
    pairs = {frozenset((g.left, g.right)) for g in guards}
    clique = {
        frozenset((a, b))
        for a, b in combinations(variables, 2)
        if a.type_tag == b.type_tag
    }
    if pairs == clique and len(pairs) == len(guards):
        names = ", ".join(v.render(typed) for v in variables)
        return [f"{ALLDIFF_PREDICATE}({names})"]
    return [f"{ALLDIFF_PREDICATE}({g.left.render(typed)}, {g.right.render(typed)})" for g in guards]


def format_formula(formula: Formula, typed: bool = False) -> str:
    def wrap(child: Formula, parent_prec: int, strict: bool) -> str:
        text = fmt(child)
        child_prec = _precedence(child)
        if child_prec < parent_prec or (strict and child_prec == parent_prec):
            return f"({text})"
        return text

    def fmt(f: Formula) -> str:
        if isinstance(f, Atom):
            if not f.args:
                return f.predicate
            return f"{f.predicate}({', '.join(a.render(typed) for a in f.args)})"
        if isinstance(f, Constant):
            return "true" if f.value else "false"
        if isinstance(f, Distinct):
            return _guard_text([f], typed)[0]
        if isinstance(f, Not):
            return "!" + wrap(f.operand, 5, False)
        if isinstance(f, And):
            guards = [op for op in f.operands if isinstance(op, Distinct)]
            rest = [wrap(op, 4, True) for op in f.operands if not isinstance(op, Distinct)]
            parts = (_guard_text(guards, typed) if guards else []) + rest
            return " & ".join(parts)
        if isinstance(f, Or):
            return " | ".join(wrap(op, 3, True) for op in f.operands)
        if isinstance(f, Implies):
            return f"{wrap(f.antecedent, 2, True)} -> {wrap(f.consequent, 2, False)}"
        if isinstance(f, Iff):
            return f"{wrap(f.left, 1, True)} <-> {wrap(f.right, 1, True)}"
        raise TypeError(f"Unknown formula node {type(f).__name__}")

    return fmt(formula)

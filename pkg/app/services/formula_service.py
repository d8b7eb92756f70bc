"""
Classical semantics of formulas: evaluation, normal forms and SAT-backed
equivalence and entailment.
"""
import logging
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from app.core.constants import ALLDIFF_PREDICATE
from app.core.exceptions import ValidationException
from app.integrations.sat import BaseSatClient, ClauseSet, CnfBuilder, CnfInstance, get_sat_client
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
    World,
    format_formula,
)

# Set up module logger
logger = logging.getLogger(__name__)


def guard_atom(guard: Distinct) -> Atom:
    """Symmetric pseudo-atom standing for a disequality guard inside clauses."""
    left, right = sorted((guard.left, guard.right), key=lambda t: (t.kind, t.name))
    return Atom(ALLDIFF_PREDICATE, (left, right))


def evaluate(formula: Formula, world: World) -> bool:
    if isinstance(formula, Atom):
        return world[formula]
    if isinstance(formula, Constant):
        return formula.value
    if isinstance(formula, Distinct):
        if formula.left.is_variable or formula.right.is_variable:
            raise ValidationException(f"Cannot evaluate non-ground guard {formula}")
        return formula.left.name != formula.right.name
    if isinstance(formula, Not):
        return not evaluate(formula.operand, world)
    if isinstance(formula, And):
        return all(evaluate(op, world) for op in formula.operands)
    if isinstance(formula, Or):
        return any(evaluate(op, world) for op in formula.operands)
    if isinstance(formula, Implies):
        return (not evaluate(formula.antecedent, world)) or evaluate(formula.consequent, world)
    if isinstance(formula, Iff):
        return evaluate(formula.left, world) == evaluate(formula.right, world)
    raise TypeError(f"Unknown formula node {type(formula).__name__}")


def _and(parts: Iterable[Formula]) -> Formula:
    flat: Dict[Formula, None] = {}
    for part in parts:
        if part == FALSE:
            return FALSE
        if part == TRUE:
            continue
        for op in part.operands if isinstance(part, And) else (part,):
            flat.setdefault(op)
    if not flat:
        return TRUE
    if len(flat) == 1:
        return next(iter(flat))
    return And(tuple(flat))


def _or(parts: Iterable[Formula]) -> Formula:
    flat: Dict[Formula, None] = {}
    for part in parts:
        if part == TRUE:
            return TRUE
        if part == FALSE:
            continue
        for op in part.operands if isinstance(part, Or) else (part,):
            flat.setdefault(op)
    if not flat:
        return FALSE
    if len(flat) == 1:
        return next(iter(flat))
    return Or(tuple(flat))


def simplify(formula: Formula, evaluate_guards: bool = False) -> Formula:
    """
    Fold truth constants. With `evaluate_guards`, guards between two
    constants are decided by name; a guard between a term and itself is
    always false.
    """
    if isinstance(formula, Distinct):
        if formula.left == formula.right:
            return FALSE
        if evaluate_guards and not (formula.left.is_variable or formula.right.is_variable):
            return TRUE
        return formula
    if isinstance(formula, (Atom, Constant)):
        return formula
    if isinstance(formula, Not):
        inner = simplify(formula.operand, evaluate_guards)
        if isinstance(inner, Constant):
            return Constant(not inner.value)
        if isinstance(inner, Not):
            return inner.operand
        return Not(inner)
    if isinstance(formula, And):
        return _and(simplify(op, evaluate_guards) for op in formula.operands)
    if isinstance(formula, Or):
        return _or(simplify(op, evaluate_guards) for op in formula.operands)
    if isinstance(formula, Implies):
        antecedent = simplify(formula.antecedent, evaluate_guards)
        consequent = simplify(formula.consequent, evaluate_guards)
        if antecedent == FALSE or consequent == TRUE:
            return TRUE
        if antecedent == TRUE:
            return consequent
        if consequent == FALSE:
            return simplify(Not(antecedent))
        return Implies(antecedent, consequent)
    if isinstance(formula, Iff):
        left = simplify(formula.left, evaluate_guards)
        right = simplify(formula.right, evaluate_guards)
        if isinstance(left, Constant):
            return right if left.value else simplify(Not(right))
        if isinstance(right, Constant):
            return left if right.value else simplify(Not(left))
        return Iff(left, right)
    raise TypeError(f"Unknown formula node {type(formula).__name__}")


def to_nnf(formula: Formula) -> Formula:
    """Negation normal form over atoms and guards, with constants folded."""

    def positive(f: Formula) -> Formula:
        if isinstance(f, (Atom, Constant, Distinct)):
            return f
        if isinstance(f, Not):
            return negative(f.operand)
        if isinstance(f, And):
            return _and(positive(op) for op in f.operands)
        if isinstance(f, Or):
            return _or(positive(op) for op in f.operands)
        if isinstance(f, Implies):
            return _or((negative(f.antecedent), positive(f.consequent)))
        if isinstance(f, Iff):
            return _and(
                (
                    _or((negative(f.left), positive(f.right))),
                    _or((positive(f.left), negative(f.right))),
                )
            )
        raise TypeError(f"Unknown formula node {type(f).__name__}")

    def negative(f: Formula) -> Formula:
        if isinstance(f, Constant):
            return Constant(not f.value)
        if isinstance(f, (Atom, Distinct)):
            return Not(f)
        if isinstance(f, Not):
            return positive(f.operand)
        if isinstance(f, And):
            return _or(negative(op) for op in f.operands)
        if isinstance(f, Or):
            return _and(negative(op) for op in f.operands)
        if isinstance(f, Implies):
            return _and((positive(f.antecedent), negative(f.consequent)))
        if isinstance(f, Iff):
            return _or(
                (
                    _and((positive(f.left), negative(f.right))),
                    _and((negative(f.left), positive(f.right))),
                )
            )
        raise TypeError(f"Unknown formula node {type(f).__name__}")

    return positive(simplify(formula))


def nnf_literal(formula: Formula) -> Optional[Literal]:
    """Literal of an NNF leaf; guards map to their pseudo-atom."""
    if isinstance(formula, Atom):
        return Literal(formula, True)
    if isinstance(formula, Distinct):
        return Literal(guard_atom(formula), True)
    if isinstance(formula, Not):
        inner = formula.operand
        if isinstance(inner, Atom):
            return Literal(inner, False)
        if isinstance(inner, Distinct):
            return Literal(guard_atom(inner), False)
    return None


def _normalize_clause(literals: Iterable[Literal]) -> Optional[Tuple[Literal, ...]]:
    """Sorted, duplicate-free clause; None for a tautology."""
    unique = set(literals)
    for lit in unique:
        if lit.negate() in unique:
            return None
    return tuple(sorted(unique))


def to_cnf(formula: Formula) -> ClauseSet:
    """
    Equisatisfiable clause set.

    Conjunctions nested under disjunctions get a definition atom d with the
    one-directional clauses (not d or C) for each clause C of the conjunction.
    Definition atoms are auxiliary and never projected.
    """
    nnf = to_nnf(formula)
    clauses: Dict[Tuple[Literal, ...], None] = {}
    auxiliary: Dict[Atom, None] = {}
    defined: Dict[Formula, Atom] = {}

    def define(sub: Formula) -> Literal:
        atom = defined.get(sub)
        if atom is None:
            atom = Atom(f"${format_formula(sub)}")
            defined[sub] = atom
            auxiliary.setdefault(atom)
            for clause in conjuncts(sub):
                add((Literal(atom, False),) + clause)
        return Literal(atom, True)

    def add(literals: Sequence[Literal]) -> None:
        clause = _normalize_clause(literals)
        if clause is not None:
            clauses.setdefault(clause)

    def disjunct(f: Formula) -> List[Literal]:
        lit = nnf_literal(f)
        if lit is not None:
            return [lit]
        if isinstance(f, Or):
            return [lit for op in f.operands for lit in disjunct(op)]
        return [define(f)]

    def conjuncts(f: Formula) -> List[Tuple[Literal, ...]]:
        if isinstance(f, And):
            return [clause for op in f.operands for clause in conjuncts(op)]
        return [tuple(disjunct(f))]

    if nnf == TRUE:
        return ClauseSet()
    if nnf == FALSE:
        return ClauseSet(((),))
    for clause in conjuncts(nnf):
        add(clause)
    return ClauseSet(tuple(clauses), frozenset(auxiliary))


class FormulaService:
    """Satisfiability, entailment and equivalence of ground formulas."""

    def __init__(self, sat_client: Optional[BaseSatClient] = None):
        self.sat_client = sat_client or get_sat_client()

    def instance(self, formulas: Iterable[Formula], atoms: Iterable[Atom] = ()) -> CnfInstance:
        builder = CnfBuilder(atoms)
        for formula in formulas:
            builder.add_clause_set(to_cnf(formula))
        return builder.build()

    def find_model(self, formulas: Iterable[Formula], atoms: Iterable[Atom] = ()) -> Optional[World]:
        return self.sat_client.solve(self.instance(formulas, atoms))

    def is_satisfiable(self, formulas: Iterable[Formula]) -> bool:
        return self.sat_client.is_satisfiable(self.instance(formulas))

    def entails(self, premises: Iterable[Formula], conclusion: Formula) -> bool:
        return not self.is_satisfiable(list(premises) + [Not(conclusion)])

    def equivalent(self, f1: Formula, f2: Formula) -> bool:
        return not self.is_satisfiable([Not(Iff(f1, f2))])

    def is_tautology(self, formula: Formula) -> bool:
        return not self.is_satisfiable([Not(formula)])

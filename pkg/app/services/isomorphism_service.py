"""
Renaming-invariant fingerprints and type-respecting isomorphism of formulas.

Both work on the prime implicates of a formula, with disequality guards read
as symmetric pseudo-atoms, so two formulas are compared by meaning rather
than by syntax.
"""
import logging
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from app.core.constants import ALLDIFF_PREDICATE
from app.models.formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    Formula,
    Literal,
    Or,
    Substitution,
    Term,
    substitute,
)
from app.services.formula_service import FormulaService, nnf_literal, to_nnf
from app.services.grounding_service import skolemize

# Set up module logger
logger = logging.getLogger(__name__)

Clause = FrozenSet[Literal]


def _clauses(nnf: Formula) -> List[Clause]:
    if nnf == TRUE:
        return []
    if nnf == FALSE:
        return [frozenset()]
    lit = nnf_literal(nnf)
    if lit is not None:
        return [frozenset((lit,))]
    if isinstance(nnf, And):
        return [c for op in nnf.operands for c in _clauses(op)]
    if isinstance(nnf, Or):
        result: List[Clause] = [frozenset()]
        for op in nnf.operands:
            result = [a | b for a in result for b in _clauses(op)]
            result = [c for c in result if not _is_tautology(c)]
        return result
    raise TypeError(f"Unexpected node {type(nnf).__name__} in negation normal form")


def _is_tautology(clause: Clause) -> bool:
    return any(lit.negate() in clause for lit in clause)


def _subsumption_free(clauses: Iterable[Clause]) -> Set[Clause]:
    kept: Set[Clause] = set()
    for clause in sorted(set(clauses), key=len):
        if not any(other <= clause for other in kept):
            kept.add(clause)
    return kept


@lru_cache(maxsize=65536)
def prime_implicates(formula: Formula) -> FrozenSet[Clause]:
    """Resolution closure of the distributed CNF, reduced under subsumption."""
    clauses = _subsumption_free(_clauses(to_nnf(formula)))
    changed = True
    while changed:
        changed = False
        current = sorted(clauses, key=lambda c: (len(c), sorted(c)))
        for i, c1 in enumerate(current):
            for c2 in current[i + 1 :]:
                for lit in c1:
                    if lit.negate() not in c2:
                        continue
                    resolvent = (c1 - {lit}) | (c2 - {lit.negate()})
                    if _is_tautology(resolvent):
                        continue
                    if any(other <= resolvent for other in clauses):
                        continue
                    clauses = {c for c in clauses if not resolvent <= c}
                    clauses.add(resolvent)
                    changed = True
            if changed:
                break
    return frozenset(clauses)


def _arg_pattern(args: Tuple[Term, ...]) -> Tuple:
    local: Dict[Term, int] = {}
    pattern = []
    for arg in args:
        if arg.is_variable:
            index = local.setdefault(arg, len(local))
            pattern.append(("?", arg.type_tag, index))
        else:
            pattern.append(("=", arg.name))
    return tuple(pattern)


def _literal_signature(lit: Literal) -> Tuple:
    return (lit.atom.predicate, lit.atom.arity, lit.sign, _arg_pattern(lit.atom.args))


def _clause_signature(clause: Clause) -> Tuple:
    return tuple(sorted(_literal_signature(lit) for lit in clause))


def _variables(clauses: Iterable[Clause]) -> List[Term]:
    seen: Dict[Term, None] = {}
    for clause in sorted(clauses, key=lambda c: sorted(c)):
        for lit in sorted(clause):
            for arg in lit.atom.args:
                if arg.is_variable:
                    seen.setdefault(arg)
    return list(seen)


def _variable_signatures(clauses: FrozenSet[Clause]) -> Dict[Term, Tuple]:
    occurrences: Dict[Term, List[Tuple]] = {}
    for clause in clauses:
        clause_sig = _clause_signature(clause)
        per_variable: Dict[Term, List[Tuple]] = {}
        for lit in clause:
            lit_sig = _literal_signature(lit)
            symmetric = lit.atom.predicate == ALLDIFF_PREDICATE
            for position, arg in enumerate(lit.atom.args):
                if symmetric:
                    position = 0
                if arg.is_variable:
                    per_variable.setdefault(arg, []).append((lit_sig, position))
        for variable, places in per_variable.items():
            occurrences.setdefault(variable, []).append((clause_sig, tuple(sorted(places))))
    return {
        v: (v.type_tag, tuple(sorted(places))) for v, places in occurrences.items()
    }


@lru_cache(maxsize=65536)
def fingerprint(formula: Formula) -> str:
    """
    Canonical text invariant under variable renaming and reordering; equal
    for isomorphic formulas.
    """
    clauses = prime_implicates(formula)
    clause_sigs = sorted(_clause_signature(c) for c in clauses)
    var_sigs = _variable_signatures(clauses)
    var_types = sorted(v.type_tag for v in var_sigs)
    return repr((tuple(clause_sigs), tuple(var_types), tuple(sorted(var_sigs.values()))))


def _rename_literal(lit: Literal, theta: Substitution) -> Literal:
    args = tuple(theta.get(a, a) for a in lit.atom.args)
    if lit.atom.predicate == ALLDIFF_PREDICATE:
        args = tuple(sorted(args, key=lambda t: (t.kind, t.name)))
    return Literal(Atom(lit.atom.predicate, args), lit.sign)


def _rename(clauses: FrozenSet[Clause], theta: Substitution) -> FrozenSet[Clause]:
    return frozenset(frozenset(_rename_literal(l, theta) for l in c) for c in clauses)


class IsomorphismService:
    """Decides whether a type-respecting variable bijection makes two formulas equivalent."""

    def __init__(self, formula_service: Optional[FormulaService] = None):
        self.formula_service = formula_service or FormulaService()

    def find_bijection(self, f1: Formula, f2: Formula) -> Optional[Substitution]:
        if fingerprint(f1) != fingerprint(f2):
            return None
        pi1, pi2 = prime_implicates(f1), prime_implicates(f2)
        sigs1, sigs2 = _variable_signatures(pi1), _variable_signatures(pi2)
        vars1, vars2 = _variables(pi1), _variables(pi2)
        candidates = [[u for u in vars2 if sigs2[u] == sigs1[v]] for v in vars1]

        def extend(index: int, theta: Substitution, used: Set[Term]) -> Optional[Substitution]:
            if index == len(vars1):
                return dict(theta) if _rename(pi1, theta) == pi2 else None
            v = vars1[index]
            for u in candidates[index]:
                if u in used:
                    continue
                theta[v] = u
                used.add(u)
                found = extend(index + 1, theta, used)
                used.discard(u)
                del theta[v]
                if found is not None:
                    return found
            return None

        return extend(0, {}, set())

    def isomorphic(self, f1: Formula, f2: Formula) -> bool:
        theta = self.find_bijection(f1, f2)
        if theta is None:
            return False
        renamed = substitute(f1, theta)
        grounded2, mapping = skolemize(f2)
        grounded1, _ = skolemize(renamed, mapping)
        return self.formula_service.equivalent(grounded1, grounded2)

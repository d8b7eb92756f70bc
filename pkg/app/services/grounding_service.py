import logging
from itertools import combinations, product
from string import ascii_uppercase
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple

from app.core.exceptions import EmptyDomainException, MissingTypeException
from app.models.formula import (
    FALSE,
    TRUE,
    Distinct,
    Formula,
    Implies,
    Substitution,
    Term,
    conj,
    constants_of,
    substitute,
    variables_of,
)
from app.models.mln import Mln, TypedDomain, WeightedFormula
from app.models.theory import PossFormula, PossTheory
from app.services.formula_service import simplify

# Set up module logger
logger = logging.getLogger(__name__)

SKOLEM_PREFIX = "$"


def variable_name(index: int) -> str:
    """A, B, ..., Z, A1, B1, ..."""
    letter = ascii_uppercase[index % len(ascii_uppercase)]
    round_ = index // len(ascii_uppercase)
    return letter if round_ == 0 else f"{letter}{round_}"


def _domain_for(variable: Term, domain: TypedDomain) -> Tuple[str, ...]:
    if variable.type_tag not in domain.mapping:
        raise MissingTypeException(
            f"Type '{variable.type_tag}' of variable {variable.name} has no domain",
            details={"type": variable.type_tag},
        )
    constants = domain.constants(variable.type_tag)
    if not constants:
        raise EmptyDomainException(
            f"Type '{variable.type_tag}' has no constants", details={"type": variable.type_tag}
        )
    return constants


def groundings(formula: Formula, domain: TypedDomain) -> Iterator[Tuple[Substitution, Formula]]:
    """Every type-respecting grounding with guards decided; trivially true ones dropped."""
    variables = variables_of(formula)
    choices = [_domain_for(v, domain) for v in variables]
    for names in product(*choices):
        theta = {
            v: Term.constant(name, v.type_tag) for v, name in zip(variables, names)
        }
        ground_formula = simplify(substitute(formula, theta), evaluate_guards=True)
        if ground_formula != TRUE:
            yield theta, ground_formula


def ground(formula: Formula, domain: TypedDomain) -> Tuple[Formula, ...]:
    unique: Dict[Formula, None] = {}
    for _, ground_formula in groundings(formula, domain):
        unique.setdefault(ground_formula)
    return tuple(unique)


def ground_mln(mln: Mln, domain: Optional[TypedDomain] = None) -> Mln:
    """
    Ground every formula. Soft groundings keep multiplicity since each one
    counts separately towards the penalty.
    """
    if mln.is_ground:
        return mln
    domain = domain if domain is not None else mln.domain
    soft: List[WeightedFormula] = []
    for wf in mln.soft:
        for _, ground_formula in groundings(wf.formula, domain):
            if ground_formula != FALSE:
                soft.append(WeightedFormula(ground_formula, wf.weight))
            else:
                # An always-violated grounding shifts every world equally
                logger.debug(f"Dropping unsatisfiable grounding of {wf.formula}")
    hard: Dict[Formula, None] = {}
    for formula in mln.hard:
        for ground_formula in ground(formula, domain):
            hard.setdefault(ground_formula)
    grounded = Mln(tuple(soft), tuple(hard), domain, mln.name)
    logger.debug(
        f"Grounded {len(mln)} formulas into {len(grounded.soft)} soft and {len(grounded.hard)} hard"
    )
    return grounded


def variabilize(
    formula: Formula,
    type_of: Optional[Callable[[Term], str]] = None,
    fixed: FrozenSet[str] = frozenset(),
) -> Formula:
    """
    Replace every constant by a fresh typed variable, named in first-occurrence
    order and guarded by pairwise disequalities between same-type variables.
    Constants named in `fixed` are kept.
    """
    type_of = type_of or (lambda term: term.type_tag)
    constants = [c for c in constants_of(formula) if c.name not in fixed]
    if not constants:
        return formula
    theta: Substitution = {
        c: Term.variable(variable_name(i), type_of(c)) for i, c in enumerate(constants)
    }
    body = substitute(formula, theta)
    guards = [
        Distinct(theta[c], theta[d])
        for c, d in combinations(constants, 2)
        if theta[c].type_tag == theta[d].type_tag
    ]
    if not guards:
        return body
    return Implies(conj(*guards), body)


def skolemize(
    formula: Formula, theta: Optional[Substitution] = None
) -> Tuple[Formula, Substitution]:
    """
    Replace variables by fresh constants that cannot clash with parsed names.
    Variables already mapped by `theta` keep their image.
    """
    mapping: Substitution = dict(theta or {})
    for v in variables_of(formula):
        if v not in mapping:
            mapping[v] = Term.constant(f"{SKOLEM_PREFIX}{v.name}", v.type_tag)
    return substitute(formula, mapping), mapping


def injective_grounding(formula: Formula) -> Formula:
    """One grounding mapping distinct variables to distinct fresh constants."""
    grounded, _ = skolemize(formula)
    return simplify(grounded, evaluate_guards=True)


def fresh_domain(formulas: Iterable[Formula]) -> TypedDomain:
    """Domain of the fresh constants used by `injective_grounding`."""
    mapping: Dict[str, List[str]] = {}
    for formula in formulas:
        for v in variables_of(formula):
            names = mapping.setdefault(v.type_tag, [])
            name = f"{SKOLEM_PREFIX}{v.name}"
            if name not in names:
                names.append(name)
    return TypedDomain.from_mapping(mapping)


def ground_theory(theory: PossTheory, domain: Optional[TypedDomain] = None) -> PossTheory:
    """Replace each formula by its groundings; a ground formula reached twice keeps its highest level."""
    if theory.is_ground:
        return theory
    domain = domain if domain is not None else theory.domain
    formulas = [
        PossFormula(ground_formula, pf.level)
        for pf in theory
        for ground_formula in ground(pf.formula, domain)
    ]
    return PossTheory.build(formulas, domain, theory.scale)


def domain_of(formulas: Iterable[Formula]) -> TypedDomain:
    """Constants mentioned by `formulas`, grouped by their type tags."""
    mapping: Dict[str, List[str]] = {}
    for formula in formulas:
        for c in constants_of(formula):
            names = mapping.setdefault(c.type_tag, [])
            if c.name not in names:
                names.append(c.name)
    return TypedDomain.from_mapping(mapping)

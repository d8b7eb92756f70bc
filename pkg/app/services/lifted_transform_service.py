"""
Lifted default-rule compilation of first-order MLNs.

Constants are grouped into interchangeability classes; evidence sets are
explored breadth-first over a small working domain, one representative per
isomorphism class, and the resulting rules are variabilized.
"""
import logging
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx

from app.core.config import settings
from app.core.constants import DEFAULT_DISPLAY_OFFSET, BlockingMode
from app.integrations.sat import BaseMaxSatClient
from app.models.formula import (
    And,
    Constant,
    Formula,
    Implies,
    Literal,
    Term,
    conj_literals,
    constants_of,
    substitute,
    variables_of,
)
from app.models.mln import EvidenceSet, Mln, TypedDomain, WeightedFormula
from app.models.penalty import Penalty
from app.models.theory import HARD, DisplayScale, Level, PossFormula, PossTheory
from app.repositories.closed_set_repository import ClosedSetRepository, RuleRepository
from app.services.ground_transform_service import (
    GroundTransformService,
    negated_conjunction,
    default_rule,
)
from app.services.grounding_service import ground_mln, variabilize
from app.services.isomorphism_service import IsomorphismService, fingerprint
from app.services.map_service import MapInferenceService, normalize

# Set up module logger
logger = logging.getLogger(__name__)

__all__ = [
    "LiftedTransformService",
    "interchangeable_partition",
    "mln_isomorphic",
    "split_consequents",
    "working_domain",
]


def _weight_key(mln: Mln) -> List[Tuple[Optional[object], Formula]]:
    return [(wf.weight, wf.formula) for wf in mln.soft] + [(None, f) for f in mln.hard]


def mln_isomorphic(
    m1: Mln, m2: Mln, isomorphism_service: Optional[IsomorphismService] = None
) -> bool:
    """
    A weight-preserving bijection pairing isomorphic formulas. Formulas are
    bucketed by (weight, fingerprint); each bucket needs a perfect matching.
    """
    isomorphism_service = isomorphism_service or IsomorphismService()
    buckets: Dict[Tuple, Tuple[List[Formula], List[Formula]]] = {}
    for side, mln in enumerate((m1, m2)):
        for weight, formula in _weight_key(mln):
            buckets.setdefault((weight, fingerprint(formula)), ([], []))[side].append(formula)

    for left, right in buckets.values():
        if len(left) != len(right):
            return False
        if len(left) == 1:
            if not isomorphism_service.isomorphic(left[0], right[0]):
                return False
            continue
        graph = nx.Graph()
        top = [("l", i) for i in range(len(left))]
        graph.add_nodes_from(top)
        graph.add_nodes_from(("r", j) for j in range(len(right)))
        for i, f1 in enumerate(left):
            for j, f2 in enumerate(right):
                if isomorphism_service.isomorphic(f1, f2):
                    graph.add_edge(("l", i), ("r", j))
        matching = nx.bipartite.hopcroft_karp_matching(graph, top_nodes=top)
        if len(matching) // 2 != len(left):
            return False
    return True


def swap_constants(mln: Mln, c: Term, d: Term) -> Mln:
    theta = {c: d.with_type(c.type_tag), d: c.with_type(d.type_tag)}
    soft = [WeightedFormula(substitute(wf.formula, theta), wf.weight) for wf in mln.soft]
    hard = [substitute(f, theta) for f in mln.hard]
    return mln.with_formulas(soft, hard)


def mentioned_constants(mln: Mln) -> FrozenSet[str]:
    return frozenset(c.name for f in mln.formulas() for c in constants_of(f))


def interchangeable_partition(
    mln: Mln,
    constants: Sequence[Term],
    isomorphism_service: Optional[IsomorphismService] = None,
) -> TypedDomain:
    """
    Classes of constants whose pairwise swap maps the MLN to an isomorphic
    one. Only constants of the same declared type are compared. A type that
    splits gets one tag per class, `<type>1`, `<type>2`, ...
    """
    isomorphism_service = isomorphism_service or IsomorphismService()
    mentioned = mentioned_constants(mln)
    by_type: Dict[str, List[Term]] = {}
    for c in constants:
        by_type.setdefault(c.type_tag, []).append(c)

    mapping: Dict[str, List[str]] = {}
    for type_tag, members in by_type.items():
        classes: List[List[Term]] = []
        for c in members:
            for cls in classes:
                representative = cls[0]
                unmentioned = c.name not in mentioned and representative.name not in mentioned
                if unmentioned or mln_isomorphic(
                    mln, swap_constants(mln, representative, c), isomorphism_service
                ):
                    cls.append(c)
                    break
            else:
                classes.append([c])
        if len(classes) == 1:
            mapping[type_tag] = [c.name for c in classes[0]]
        else:
            for index, cls in enumerate(classes, start=1):
                mapping[f"{type_tag}{index}"] = [c.name for c in cls]
        logger.debug(f"Type {type_tag} splits into {len(classes)} interchangeability classes")
    return TypedDomain.from_mapping(mapping)


def working_domain(mln: Mln, k: int, domain_size: Optional[int] = None) -> TypedDomain:
    """
    Declared constants, padded with fresh ones up to `domain_size`. Types
    without declared constants get max(k, LIFTED_MIN_DOMAIN_SIZE) fresh
    constants unless `domain_size` is given.
    """
    mapping: Dict[str, List[str]] = {tag: list(mln.domain.constants(tag)) for tag in mln.domain.type_tags}
    for formula in mln.formulas():
        for c in constants_of(formula):
            names = mapping.setdefault(c.type_tag, [])
            if c.name not in names:
                names.append(c.name)
        for v in variables_of(formula):
            mapping.setdefault(v.type_tag, [])

    taken = {name for names in mapping.values() for name in names}
    for type_tag, names in mapping.items():
        if names:
            target = max(len(names), domain_size or 0)
        else:
            target = domain_size or max(k, settings.LIFTED_MIN_DOMAIN_SIZE)
        index = 1
        while len(names) < target:
            fresh = f"{type_tag.lower()}{index}"
            index += 1
            if fresh not in taken:
                names.append(fresh)
                taken.add(fresh)
    return TypedDomain.from_mapping(mapping)


class LiftedTransformService:
    """First-order counterpart of the default-rule encoding."""

    def __init__(
        self,
        maxsat_client: Optional[BaseMaxSatClient] = None,
        isomorphism_service: Optional[IsomorphismService] = None,
        ground_transform_service: Optional[GroundTransformService] = None,
    ):
        self.maxsat_client = maxsat_client
        self.isomorphism_service = isomorphism_service or IsomorphismService()
        self.ground_transform_service = ground_transform_service or GroundTransformService(
            maxsat_client
        )

    def transform_lifted(
        self,
        mln: Mln,
        k: int,
        blocking: BlockingMode = BlockingMode.FULL,
        domain_size: Optional[int] = None,
        domain: Optional[TypedDomain] = None,
        pruning: bool = True,
    ) -> PossTheory:
        """
        Breadth-first search over ground literal evidence sets of size at most
        k, one per isomorphism class, emitting variabilized rules at the
        penalty of the evidence and blocking rules just below it.
        """
        mln = normalize(mln)
        domain = domain if domain is not None else working_domain(mln, k, domain_size)
        constants = [Term.constant(name, tag) for tag, names in domain.entries for name in names]
        partition = interchangeable_partition(mln, constants, self.isomorphism_service)
        class_of = {name: tag for tag, names in partition.entries for name in names}
        mentioned = mentioned_constants(mln)
        fixed = frozenset(
            name for name in mentioned if len(partition.constants(class_of.get(name, ""))) == 1
        )

        def lift(formula: Formula) -> Formula:
            return variabilize(formula, lambda c: class_of.get(c.name, c.type_tag), fixed)

        service = MapInferenceService(ground_mln(mln, domain), self.maxsat_client)
        representatives = self._explore(service, k, lift)
        finite_levels = sorted({Level.finite(pen.value) for _, pen in representatives})

        rules = RuleRepository(self.isomorphism_service)
        for formula in mln.hard:
            rules.offer(PossFormula(formula, HARD))
        for evidence_literals, pen in representatives:
            for rule in self._rules_for(
                service, evidence_literals, pen, finite_levels, blocking, pruning, lift
            ):
                rules.offer(rule)

        theory = PossTheory.build(
            rules.rules(),
            domain.merged(partition),
            DisplayScale.for_weights(DEFAULT_DISPLAY_OFFSET, service.mln.total_weight),
        )
        logger.info(
            f"Lifted transformation (k={k}, blocking={blocking}) kept "
            f"{len(representatives)} evidence classes and {len(theory)} formulas"
        )
        return theory

    def _explore(
        self, service: MapInferenceService, k: int, lift
    ) -> List[Tuple[Tuple[Literal, ...], Penalty]]:
        literals = sorted(Literal(atom, sign) for atom in service.atoms for sign in (True, False))
        closed = ClosedSetRepository(self.isomorphism_service)
        representatives: List[Tuple[Tuple[Literal, ...], Penalty]] = []
        layer: List[Tuple[Literal, ...]] = [()]

        for size in range(k + 1):
            if size > 0:
                candidates = {
                    tuple(sorted(evidence + (lit,)))
                    for evidence in layer
                    for lit in literals
                    if lit.atom not in {l.atom for l in evidence}
                }
            else:
                candidates = {()}
            keyed = sorted(
                ((fingerprint(lift(conj_literals(c))), [str(l) for l in c], c) for c in candidates),
                key=lambda item: (item[0], item[1]),
            )
            layer = []
            for _, _, evidence_literals in keyed:
                if not closed.add(lift(conj_literals(evidence_literals))):
                    continue
                pen = service.penalty(EvidenceSet.from_literals(evidence_literals))
                if pen.is_infinite:
                    shown = ", ".join(map(str, evidence_literals))
                    logger.debug(f"Skipping {shown}: contradicts hard rules")
                    continue
                layer.append(evidence_literals)
                representatives.append((evidence_literals, pen))
            logger.info(f"Evidence sets of size {size}: {len(layer)} classes")
        return representatives

    def _rules_for(
        self,
        service: MapInferenceService,
        evidence_literals: Tuple[Literal, ...],
        pen: Penalty,
        finite_levels: List[Level],
        blocking: BlockingMode,
        pruning: bool,
        lift,
    ) -> List[PossFormula]:
        helper = self.ground_transform_service
        evidence = EvidenceSet.from_literals(evidence_literals)
        if helper.cautious_skip(service, evidence_literals):
            return []

        entailed = service.entailed_literals(evidence)
        redundant = set(evidence_literals)
        if pruning:
            redundant |= helper.hard_entailed(service, evidence, entailed)
        consequent = [x for x in entailed if x not in redundant]
        if pruning:
            reduced = helper.rationally_entailed(service, evidence_literals, consequent)
            consequent = [x for x in consequent if x not in reduced]

        level = Level.finite(pen.value)
        rules = [PossFormula(lift(default_rule(evidence_literals, [x])), level) for x in consequent]
        if pen > Penalty.finite(0):
            if blocking == BlockingMode.FULL:
                blocked = sorted(set(evidence_literals) | {x for x in entailed if x not in redundant})
            else:
                blocked = list(evidence_literals)
            below = helper.level_below(level, finite_levels)
            rules.append(
                PossFormula(lift(negated_conjunction(l.to_formula() for l in blocked)), below)
            )
        return rules


def split_consequents(theory: PossTheory) -> PossTheory:
    """One rule per consequent literal; rules with nothing to conclude are dropped."""
    formulas: List[PossFormula] = []
    for pf in theory:
        formula = pf.formula
        if isinstance(formula, Implies):
            consequent = formula.consequent
            if isinstance(consequent, Constant) and consequent.value:
                continue
            parts = consequent.operands if isinstance(consequent, And) else (consequent,)
            formulas.extend(
                PossFormula(Implies(formula.antecedent, part), pf.level) for part in parts
            )
        else:
            formulas.append(pf)
    return theory.with_formulas(formulas)

"""
Compilation of ground MLNs into possibilistic theories.

Three encodings are offered: the exact powerset encoding, the encoding
restricted to an explicit family of evidence sets, and the default-rule
encoding that covers every literal evidence set up to a size bound.
"""
import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple

from pysat.examples.hitman import Hitman

from app.core.config import settings
from app.core.constants import DEFAULT_DISPLAY_OFFSET, EXACT_DISPLAY_OFFSET
from app.core.exceptions import (
    CapExceededException,
    InconsistentEvidenceException,
    NoHittingSetException,
    ValidationException,
)
from app.integrations.sat import BaseMaxSatClient
from app.models.formula import Atom, Formula, Implies, Literal, conj_literals, disj, neg
from app.models.mln import EvidenceSet, Mln
from app.models.penalty import Penalty
from app.models.theory import BOTTOM, HARD, DisplayScale, Level, PossFormula, PossTheory
from app.services.formula_service import FormulaService, to_cnf
from app.services.grounding_service import ground_mln
from app.services.map_service import MapInferenceService

# Set up module logger
logger = logging.getLogger(__name__)


def literal_sets(atoms: Sequence[Atom], max_size: int) -> Iterator[Tuple[Literal, ...]]:
    """
    Consistent literal sets over `atoms` with at most `max_size` members, by
    size and then lexicographically.
    """
    literals = sorted(Literal(atom, sign) for atom in atoms for sign in (True, False))
    for size in range(max_size + 1):
        for chosen in combinations(literals, size):
            if len({lit.atom for lit in chosen}) == size:
                yield chosen


@dataclass(frozen=True)
class EvidenceFamily:
    """Either an explicit list of evidence sets or every literal set of size at most `max_size`."""

    members: Optional[Tuple[EvidenceSet, ...]] = None
    max_size: Optional[int] = None

    def __post_init__(self):
        if (self.members is None) == (self.max_size is None):
            raise ValidationException("An evidence family needs either members or a maximum size")

    @classmethod
    def explicit(cls, members: Iterable[EvidenceSet]) -> "EvidenceFamily":
        return cls(members=tuple(members))

    @classmethod
    def up_to(cls, max_size: int) -> "EvidenceFamily":
        return cls(max_size=max_size)

    def evidence_sets(self, atoms: Sequence[Atom]) -> Iterator[EvidenceSet]:
        if self.members is not None:
            yield from self.members
            return
        for chosen in literal_sets(atoms, self.max_size):
            yield EvidenceSet.from_literals(chosen)


def minimal_hitting_sets(family: Sequence[Iterable[Hashable]]) -> List[FrozenSet]:
    """
    Every subset-minimal set meeting each member of `family`, smallest first
    and then in sorted element order.
    """
    members = [frozenset(member) for member in family]
    if not members:
        return [frozenset()]
    if any(not member for member in members):
        raise NoHittingSetException("An empty member cannot be hit")

    found: List[FrozenSet] = []
    with Hitman(bootstrap_with=[sorted(m) for m in members], htype="sorted") as hitman:
        while True:
            hitting_set = hitman.get()
            if hitting_set is None:
                break
            found.append(frozenset(hitting_set))
            # Supersets of a found set are not minimal
            hitman.block(hitting_set)
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def _clause_literals(formula: Formula) -> Optional[Tuple[Literal, ...]]:
    clause_set = to_cnf(formula)
    if len(clause_set) != 1 or clause_set.auxiliary:
        return None
    return clause_set.clauses[0]


def negated_conjunction(formulas: Iterable[Formula]) -> Formula:
    return disj(*(neg(f) for f in formulas))


class GroundTransformService:
    """Builds possibilistic theories whose inference reproduces MAP inference."""

    def __init__(
        self,
        maxsat_client: Optional[BaseMaxSatClient] = None,
        formula_service: Optional[FormulaService] = None,
    ):
        self.maxsat_client = maxsat_client
        self.formula_service = formula_service or FormulaService()

    def map_service(self, mln: Mln) -> MapInferenceService:
        return MapInferenceService(ground_mln(mln), self.maxsat_client)

    # Powerset encoding

    def transform_exact(self, mln: Mln) -> PossTheory:
        """
        Every disjunction of soft formulas at the penalty of its negation;
        disjunctions that cost nothing to violate, and tautologies, are left out.
        """
        service = self.map_service(mln)
        soft = service.mln.soft
        if len(soft) > settings.EXACT_TRANSFORM_MAX_FORMULAS:
            raise CapExceededException(
                f"{len(soft)} soft formulas exceed the exact transformation cap of "
                f"{settings.EXACT_TRANSFORM_MAX_FORMULAS}",
                details={"formulas": len(soft), "cap": settings.EXACT_TRANSFORM_MAX_FORMULAS},
            )
        clauses = [_clause_literals(wf.formula) for wf in soft]
        formulas: List[PossFormula] = [PossFormula(f, HARD) for f in service.mln.hard]

        for size in range(1, len(soft) + 1):
            for chosen in combinations(range(len(soft)), size):
                candidate = self._disjunction(chosen, soft, clauses)
                if candidate is None:
                    continue
                pen = service.penalty_of(neg(candidate))
                if pen > Penalty.finite(0):
                    formulas.append(PossFormula(candidate, Level.from_penalty(pen)))

        theory = PossTheory.build(
            formulas,
            service.mln.domain,
            DisplayScale.for_weights(EXACT_DISPLAY_OFFSET, service.mln.total_weight),
        )
        logger.info(f"Exact transformation produced {len(theory)} formulas from {len(soft)}")
        return theory

    def _disjunction(self, chosen, soft, clauses) -> Optional[Formula]:
        if all(clauses[i] is not None for i in chosen):
            literals = {lit for i in chosen for lit in clauses[i]}
            if any(lit.negate() in literals for lit in literals):
                return None
            return disj(*(lit.to_formula() for lit in sorted(literals)))
        candidate = disj(*(soft[i].formula for i in chosen))
        return None if self.formula_service.is_tautology(candidate) else candidate

    # Evidence-restricted encoding

    def compute_se(
        self, service: MapInferenceService, evidence: EvidenceSet
    ) -> List[FrozenSet[int]]:
        """
        Minimal sets Z of soft formulas (by index) among those cheaper to
        violate than the evidence, such that violating all of Z together with
        the evidence costs more than the evidence alone.
        """
        pen = self._require_finite(service, evidence)
        cheaper = frozenset(
            i
            for i, wf in enumerate(service.mln.soft)
            if service.penalty_of(neg(wf.formula)) < pen
        )
        family = [y & cheaper for y in service.cons_sets(evidence)]
        if any(not member for member in family):
            logger.debug(f"Some most probable world under {evidence} satisfies no cheaper formula")
            return []
        return minimal_hitting_sets(family)

    def transform_evidence(self, mln: Mln, family: EvidenceFamily) -> PossTheory:
        service = self.map_service(mln)
        soft = service.mln.soft
        formulas: List[PossFormula] = [PossFormula(f, HARD) for f in service.mln.hard]
        for wf in soft:
            level = Level.from_penalty(service.penalty_of(neg(wf.formula)))
            formulas.append(PossFormula(wf.formula, level))

        for evidence in family.evidence_sets(service.atoms):
            pen = self._require_finite(service, evidence)
            for hitting_set in self.compute_se(service, evidence):
                members = [soft[i].formula for i in sorted(hitting_set)]
                clause = disj(negated_conjunction(evidence), *members)
                strengthened = evidence.union(*(neg(f) for f in members))
                formulas.append(PossFormula(clause, Level.from_penalty(service.penalty(strengthened))))
            if pen > Penalty.finite(0):
                formulas.append(PossFormula(negated_conjunction(evidence), Level.from_penalty(pen)))

        theory = PossTheory.build(
            formulas,
            service.mln.domain,
            DisplayScale.for_weights(DEFAULT_DISPLAY_OFFSET, service.mln.total_weight),
        )
        logger.info(f"Evidence-restricted transformation produced {len(theory)} formulas")
        return theory

    # Default-rule encoding

    def transform_default(
        self,
        mln: Mln,
        k: int,
        pruning: bool = True,
        omit_entailed_blocking: bool = False,
    ) -> PossTheory:
        """
        One default rule per literal evidence set E with |E| <= k: E implies
        the literals true in all its most probable worlds. Evidence sets with
        a positive penalty also get a blocking rule just below their level.
        """
        if k < 0:
            raise ValidationException(f"k must be nonnegative, got {k}")
        service = self.map_service(mln)
        atoms = service.atoms
        if len(atoms) > settings.DEFAULT_TRANSFORM_MAX_ATOMS:
            raise CapExceededException(
                f"{len(atoms)} atoms exceed the default transformation cap of "
                f"{settings.DEFAULT_TRANSFORM_MAX_ATOMS}",
                details={"atoms": len(atoms), "cap": settings.DEFAULT_TRANSFORM_MAX_ATOMS},
            )

        penalties: Dict[Tuple[Literal, ...], Penalty] = {}
        skipped = 0
        for chosen in literal_sets(atoms, k):
            pen = service.penalty(EvidenceSet.from_literals(chosen))
            if pen.is_infinite:
                logger.debug(f"Skipping {EvidenceSet.from_literals(chosen)}: contradicts hard rules")
                skipped += 1
                continue
            penalties[chosen] = pen
        if skipped:
            logger.info(f"Skipped {skipped} evidence sets that contradict the hard rules")
        finite_levels = sorted({Level.finite(p.value) for p in penalties.values()})

        formulas: List[PossFormula] = [PossFormula(f, HARD) for f in service.mln.hard]
        for evidence_literals, pen in penalties.items():
            rules = self._default_rules(
                service,
                evidence_literals,
                pen,
                finite_levels,
                pruning,
                omit_entailed_blocking,
            )
            formulas.extend(rules)

        theory = PossTheory.build(
            formulas,
            service.mln.domain,
            DisplayScale.for_weights(DEFAULT_DISPLAY_OFFSET, service.mln.total_weight),
        )
        logger.info(
            f"Default transformation (k={k}) visited {len(penalties)} evidence sets "
            f"and produced {len(theory)} formulas"
        )
        return theory

    def _default_rules(
        self,
        service: MapInferenceService,
        evidence_literals: Tuple[Literal, ...],
        pen: Penalty,
        finite_levels: List[Level],
        pruning: bool,
        omit_entailed_blocking: bool,
    ) -> List[PossFormula]:
        evidence = EvidenceSet.from_literals(evidence_literals)
        if self.cautious_skip(service, evidence_literals):
            logger.debug(f"Skipping {evidence}: a member follows from the others")
            return []

        entailed = service.entailed_literals(evidence)
        redundant = set(evidence_literals)
        if pruning:
            redundant |= self.hard_entailed(service, evidence, entailed)
        consequent = [x for x in entailed if x not in redundant]
        if pruning:
            reduced = self.rationally_entailed(service, evidence_literals, consequent)
            consequent = [x for x in consequent if x not in reduced]

        level = Level.finite(pen.value)
        rules = [PossFormula(default_rule(evidence_literals, consequent), level)]

        if pen > Penalty.finite(0):
            below = self.level_below(level, finite_levels)
            if omit_entailed_blocking and self._blocking_entailed(service, evidence_literals, below):
                logger.debug(f"Omitting blocking rule of {evidence}")
            else:
                blocked = sorted(set(evidence_literals) | {x for x in entailed if x not in redundant})
                rules.append(PossFormula(negated_conjunction(l.to_formula() for l in blocked), below))
        return rules

    @staticmethod
    def cautious_skip(service: MapInferenceService, evidence_literals: Tuple[Literal, ...]) -> bool:
        """True when some y in E is MAP-entailed by the rest of E."""
        for y in evidence_literals:
            rest = EvidenceSet.from_literals(l for l in evidence_literals if l != y)
            if service.map_entails(rest, y.to_formula()):
                return True
        return False

    @staticmethod
    def rationally_entailed(
        service: MapInferenceService,
        evidence_literals: Tuple[Literal, ...],
        candidates: Iterable[Literal],
    ) -> set:
        """
        Literals x entailed by E minus some y where E minus y does not entail
        the negation of y; rules for smaller evidence sets already yield them.
        """
        reduced = set()
        for y in evidence_literals:
            rest = EvidenceSet.from_literals(l for l in evidence_literals if l != y)
            if service.map_entails(rest, y.negate().to_formula()):
                continue
            reduced.update(x for x in candidates if service.map_entails(rest, x.to_formula()))
        return reduced

    def hard_entailed(
        self, service: MapInferenceService, evidence: EvidenceSet, literals: Iterable[Literal]
    ) -> set:
        """Literals that the hard rules and the evidence entail classically."""
        premises = list(service.mln.hard) + list(evidence)
        return {
            lit
            for lit in literals
            if lit.to_formula() in evidence.key
            or (service.mln.hard and self.formula_service.entails(premises, lit.to_formula()))
        }

    @staticmethod
    def level_below(level: Level, finite_levels: Sequence[Level]) -> Level:
        lower = [other for other in finite_levels if other < level]
        return max(lower) if lower else BOTTOM

    @staticmethod
    def _blocking_entailed(
        service: MapInferenceService, evidence_literals: Tuple[Literal, ...], below: Level
    ) -> bool:
        for y in evidence_literals:
            rest = EvidenceSet.from_literals(l for l in evidence_literals if l != y)
            if Level.from_penalty(service.penalty(rest)) == below:
                return True
        return False

    @staticmethod
    def _require_finite(service: MapInferenceService, evidence: EvidenceSet) -> Penalty:
        pen = service.penalty(evidence)
        if pen.is_infinite:
            raise InconsistentEvidenceException(
                f"Evidence {evidence} contradicts the hard rules",
                details={"evidence": [str(f) for f in evidence]},
            )
        return pen


def default_rule(evidence_literals: Sequence[Literal], consequent: Sequence[Literal]) -> Formula:
    """Rule text used by both ground and lifted default encodings."""
    return Implies(conj_literals(evidence_literals), conj_literals(consequent))

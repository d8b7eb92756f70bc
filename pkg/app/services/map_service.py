import logging
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from app.core.exceptions import InconsistentEvidenceException, ValidationException
from app.integrations.sat import (
    BaseMaxSatClient,
    ClauseSet,
    CnfBuilder,
    CnfInstance,
    MaxSatResult,
    get_maxsat_client,
)
from app.models.formula import And, Atom, Formula, Literal, Not, World, neg
from app.models.mln import EMPTY_EVIDENCE, EvidenceSet, Mln, WeightedFormula
from app.models.penalty import INFINITE, Penalty
from app.services.formula_service import evaluate, to_cnf, to_nnf

# Set up module logger
logger = logging.getLogger(__name__)


def normalize(mln: Mln) -> Mln:
    """Flip negative weights onto the negated formula and drop zero weights."""
    soft: List[WeightedFormula] = []
    for wf in mln.soft:
        if wf.weight > 0:
            soft.append(wf)
        elif wf.weight < 0:
            soft.append(WeightedFormula(neg(wf.formula), -wf.weight))
    return mln.with_formulas(soft, mln.hard)


def negation_conjuncts(query: Formula) -> Tuple[Formula, ...]:
    """The negated query split into conjuncts, so literal queries hit the penalty cache."""
    negated = to_nnf(Not(query))
    if isinstance(negated, And):
        return negated.operands
    return (negated,)


class MapInferenceService:
    """
    Penalties and MAP inference on a ground MLN via weighted MaxSAT.

    Each soft formula F gets a selector s with hard clauses (not s or CNF(F))
    and a soft unit [s] carrying the weight of F. Optima are cached per
    evidence set.
    """

    def __init__(self, mln: Mln, maxsat_client: Optional[BaseMaxSatClient] = None):
        if not mln.is_ground:
            raise ValidationException("MAP inference needs a ground MLN")
        self.mln = normalize(mln)
        self.maxsat_client = maxsat_client or get_maxsat_client()
        self.atoms: Tuple[Atom, ...] = self.mln.atoms
        self._hard: List[ClauseSet] = [to_cnf(f) for f in self.mln.hard]
        self._soft: List[Tuple[ClauseSet, Fraction]] = [
            (to_cnf(wf.formula), wf.weight) for wf in self.mln.soft
        ]
        self._optima: Dict[FrozenSet[Formula], Optional[MaxSatResult]] = {}

    def _instance(self, evidence: EvidenceSet) -> CnfInstance:
        builder = CnfBuilder(self.atoms + evidence.atoms())
        for clause_set in self._hard:
            builder.add_clause_set(clause_set)
        for formula in evidence:
            builder.add_clause_set(to_cnf(formula))
        for index, (clause_set, weight) in enumerate(self._soft):
            selector = builder.selector(index)
            builder.add_clause_set(clause_set, guard=selector)
            builder.add_soft([selector], weight)
        return builder.build()

    def _optimum(self, evidence: EvidenceSet) -> Optional[MaxSatResult]:
        key = evidence.key
        if key not in self._optima:
            self._optima[key] = self.maxsat_client.minimize(self._instance(evidence))
        return self._optima[key]

    def _require_consistent(self, evidence: EvidenceSet) -> Penalty:
        pen = self.penalty(evidence)
        if pen.is_infinite:
            raise InconsistentEvidenceException(
                f"Evidence {evidence} contradicts the hard rules",
                details={"evidence": [str(f) for f in evidence]},
            )
        return pen

    def sat_weight(self, evidence: EvidenceSet = EMPTY_EVIDENCE) -> Optional[Fraction]:
        """Best total weight of satisfied soft formulas; None when no world satisfies the evidence."""
        result = self._optimum(evidence)
        if result is None:
            return None
        return self.mln.total_weight - result.cost

    def penalty(self, evidence: EvidenceSet = EMPTY_EVIDENCE) -> Penalty:
        result = self._optimum(evidence)
        base = self._optimum(EMPTY_EVIDENCE)
        if result is None or base is None:
            return INFINITE
        return Penalty.finite(result.cost - base.cost)

    def penalty_of(self, *formulas: Formula) -> Penalty:
        return self.penalty(EvidenceSet(tuple(formulas)))

    def map_entails(self, evidence: EvidenceSet, query: Formula) -> bool:
        pen = self._require_consistent(evidence)
        strengthened = evidence.union(*negation_conjuncts(query))
        entailed = self.penalty(strengthened) > pen
        logger.debug(f"MAP {evidence} |- {query}: {entailed}")
        return entailed

    def most_probable_worlds(
        self, evidence: EvidenceSet = EMPTY_EVIDENCE, limit: Optional[int] = None
    ) -> List[World]:
        self._require_consistent(evidence)
        optimal = self.maxsat_client.enumerate_optimal(self._instance(evidence), limit)
        return list(optimal.models) if optimal is not None else []

    def entailed_literals(
        self, evidence: EvidenceSet = EMPTY_EVIDENCE, atoms: Optional[Sequence[Atom]] = None
    ) -> Tuple[Literal, ...]:
        """
        Literals true in every most probable world: the literal of each atom
        in one optimal world, kept when its negation raises the penalty.
        """
        pen = self._require_consistent(evidence)
        atoms = self.atoms if atoms is None else tuple(atoms)
        witness = self._optimum(evidence).model
        entailed: List[Literal] = []
        for atom in atoms:
            lit = Literal(atom, witness[atom] if atom in witness else False)
            if self.penalty(evidence.union(lit.negate().to_formula())) > pen:
                entailed.append(lit)
        return tuple(sorted(entailed))

    def satisfied_soft(self, world: World) -> FrozenSet[int]:
        return frozenset(
            i for i, wf in enumerate(self.mln.soft) if evaluate(wf.formula, world)
        )

    def cons_sets(self, evidence: EvidenceSet = EMPTY_EVIDENCE) -> List[FrozenSet[int]]:
        """
        Distinct sets of soft formulas (by index into `self.mln.soft`)
        satisfied by the most probable worlds.
        """
        family = {self.satisfied_soft(w) for w in self.most_probable_worlds(evidence)}
        return sorted(family, key=lambda y: (len(y), sorted(y)))

    def soft_formulas(self, indices: Iterable[int]) -> Tuple[WeightedFormula, ...]:
        return tuple(self.mln.soft[i] for i in sorted(indices))

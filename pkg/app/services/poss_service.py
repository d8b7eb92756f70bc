import logging
from contextlib import ExitStack
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Set, Tuple

from app.core.config import settings
from app.core.constants import RedundancyFilter
from app.core.exceptions import AllStrataInconsistentException, CapExceededException
from app.integrations.sat import BaseSatClient, ClauseSet, CnfBuilder, SatSession, get_sat_client
from app.models.formula import Atom, Formula, Not, World, atoms_of, format_formula, formula_size
from app.models.mln import EMPTY_EVIDENCE, EvidenceSet, TypedDomain
from app.models.theory import HARD, Level, PossFormula, PossTheory
from app.services.formula_service import FormulaService, evaluate, to_cnf
from app.services.grounding_service import fresh_domain, ground, ground_theory, injective_grounding

# Set up module logger
logger = logging.getLogger(__name__)


def lambda_cut(theory: PossTheory, level: Level) -> List[Formula]:
    """Formulas whose level is at least `level`."""
    return theory.cut(level)


class PossInferenceService:
    """
    Inconsistency-tolerant inference on a possibilistic theory.

    First-order theories are grounded over their own typed domain, extended
    by `domain` (typically the constants of the evidence and query). Clause
    sets and consistency levels are cached.
    """

    def __init__(
        self,
        theory: PossTheory,
        sat_client: Optional[BaseSatClient] = None,
        domain: Optional[TypedDomain] = None,
    ):
        if domain is not None:
            theory = PossTheory(theory.formulas, theory.domain.merged(domain), theory.scale)
        self.theory = ground_theory(theory)
        self.sat_client = sat_client or get_sat_client()
        self.levels: List[Level] = sorted(set(self.theory.levels()) | {HARD})
        self._cnf: Dict[Formula, ClauseSet] = {}
        self._consistency: Dict[FrozenSet[Formula], Level] = {}

    @property
    def atoms(self) -> Tuple[Atom, ...]:
        seen = {atom for pf in self.theory for atom in atoms_of(pf.formula)}
        return tuple(sorted(seen, key=str))

    def _clauses(self, formula: Formula) -> ClauseSet:
        if formula not in self._cnf:
            self._cnf[formula] = to_cnf(formula)
        return self._cnf[formula]

    def _satisfiable(self, formulas: Iterable[Formula]) -> bool:
        builder = CnfBuilder()
        for formula in formulas:
            builder.add_clause_set(self._clauses(formula))
        return self.sat_client.is_satisfiable(builder.build())

    def lambda_cut(self, level: Level) -> List[Formula]:
        return lambda_cut(self.theory, level)

    def consistency_level(self, evidence: EvidenceSet = EMPTY_EVIDENCE) -> Level:
        """
        Lowest level whose cut, together with the evidence at the hard level,
        is satisfiable. Satisfiability is monotone in the level, so the
        levels are binary searched.
        """
        key = evidence.key
        if key in self._consistency:
            return self._consistency[key]

        def consistent(index: int) -> bool:
            return self._satisfiable(self.lambda_cut(self.levels[index]) + list(evidence))

        high = len(self.levels) - 1
        if not consistent(high):
            raise AllStrataInconsistentException(
                "Even the hard stratum is inconsistent with the evidence",
                details={"evidence": [str(f) for f in evidence]},
            )
        low = 0
        while low < high:
            middle = (low + high) // 2
            if consistent(middle):
                high = middle
            else:
                low = middle + 1
        level = self.levels[low]
        logger.debug(f"Consistency level under {evidence}: {level}")
        self._consistency[key] = level
        return level

    def entails_at(
        self, query: Formula, level: Level, evidence: EvidenceSet = EMPTY_EVIDENCE
    ) -> bool:
        return not self._satisfiable(self.lambda_cut(level) + list(evidence) + [Not(query)])

    def poss_entails(self, evidence: EvidenceSet, query: Formula) -> bool:
        level = self.consistency_level(evidence)
        entailed = self.entails_at(query, level, evidence)
        logger.debug(f"poss {evidence} |- {query}: {entailed} at {level}")
        return entailed

    def least_specific_model(self, atoms: Optional[Sequence[Atom]] = None) -> Dict[World, Fraction]:
        """pi(w) = 1 - largest displayed level among the formulas w violates."""
        atoms = self.atoms if atoms is None else tuple(atoms)
        if len(atoms) > settings.POSSIBILITY_MODEL_MAX_ATOMS:
            raise CapExceededException(
                f"{len(atoms)} atoms exceed the possibility model cap of "
                f"{settings.POSSIBILITY_MODEL_MAX_ATOMS}"
            )
        scale = self.theory.scale
        distribution: Dict[World, Fraction] = {}
        for values in product((False, True), repeat=len(atoms)):
            world = World(atoms, values)
            violated = [
                scale.display(pf.level) for pf in self.theory if not evaluate(pf.formula, world)
            ]
            distribution[world] = 1 - max(violated, default=Fraction(0))
        return distribution


def _filter_order(pf: PossFormula) -> Tuple[int, str]:
    return (-formula_size(pf.formula), format_formula(pf.formula))


class _PremiseIndex:
    """
    Premises grounded once over a domain and loaded into one incremental
    session, each behind its own selector. An entailment check assumes the
    selectors of the premises it needs plus that of the negated conclusion.
    """

    def __init__(self, session: SatSession, domain: Optional[TypedDomain] = None):
        self.session = session
        self.domain = domain
        self.builder = CnfBuilder()
        self._loaded: Set[Hashable] = set()

    def _load(self, key: Hashable, formulas: Callable[[], Iterable[Formula]]) -> int:
        guard = self.builder.selector(key)
        if key not in self._loaded:
            start = len(self.builder.clauses)
            for formula in formulas():
                self.builder.add_clause_set(to_cnf(formula), guard)
            self.session.add_clauses(self.builder.clauses[start:])
            self._loaded.add(key)
        return guard

    def premise(self, formula: Formula) -> int:
        if self.domain is None:
            return self._load(("premise", formula), lambda: (formula,))
        return self._load(("premise", formula), lambda: ground(formula, self.domain))

    def entails(self, premises: Iterable[Formula], conclusion: Formula) -> bool:
        assumptions = [self.premise(formula) for formula in premises]
        assumptions.append(self._load(("negated", conclusion), lambda: (Not(conclusion),)))
        return not self.session.satisfiable(assumptions)


def filter_redundant(
    theory: PossTheory,
    mode: RedundancyFilter = RedundancyFilter.NONE,
    formula_service: Optional[FormulaService] = None,
) -> PossTheory:
    """
    Drop non-hard formulas entailed at their own level by what remains.

    `conservative` only uses remaining formulas that are not longer than the
    candidate; `aggressive` uses all of them. Non-ground candidates are
    checked on a single injective grounding. Each premise is grounded and
    encoded once per domain; checks share one incremental solver.
    """
    if mode == RedundancyFilter.NONE:
        return theory
    formula_service = formula_service or FormulaService()
    remaining: Dict[PossFormula, None] = dict.fromkeys(theory.formulas)

    with ExitStack() as stack:
        indexes: Dict[Optional[TypedDomain], _PremiseIndex] = {}

        def index_for(domain: Optional[TypedDomain]) -> _PremiseIndex:
            if domain not in indexes:
                session = stack.enter_context(formula_service.sat_client.session())
                indexes[domain] = _PremiseIndex(session, domain)
            return indexes[domain]

        for candidate in sorted((pf for pf in theory if not pf.level.is_hard), key=_filter_order):
            size = formula_size(candidate.formula)
            premises = [
                pf.formula
                for pf in remaining
                if pf != candidate
                and pf.level >= candidate.level
                and (mode == RedundancyFilter.AGGRESSIVE or formula_size(pf.formula) <= size)
            ]
            if theory.is_ground:
                index, conclusion = index_for(None), candidate.formula
            else:
                domain = theory.domain.merged(fresh_domain(premises + [candidate.formula]))
                index, conclusion = index_for(domain), injective_grounding(candidate.formula)
            if index.entails(premises, conclusion):
                logger.debug(f"Removing redundant {candidate}")
                del remaining[candidate]

    logger.info(
        f"Redundancy filter ({mode}) kept {len(remaining)} of {len(theory)} formulas "
        f"using {len(indexes)} solver sessions"
    )
    return theory.with_formulas(remaining)

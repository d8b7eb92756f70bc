"""
Independent cross-checks between the MAP engine, the compiled possibilistic
theories and a brute-force oracle.

The oracle evaluates every world directly and never touches the MaxSAT
based engine, so agreement between the two is meaningful.
"""
import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from app.core.config import settings
from app.core.constants import BlockingMode, VerifySuite
from app.core.exceptions import CapExceededException, ValidationException
from app.core.logging import log_context
from app.data import bundled_text
from app.formats.parser import parse_evidence_family, parse_mln, vocabulary_of
from app.models.formula import Atom, Formula, Literal, World, conj, disj
from app.models.mln import EvidenceSet, Mln, TypedDomain, WeightedFormula
from app.models.penalty import INFINITE, Penalty
from app.models.theory import Level, PossTheory
from app.schemas.report import EquivalenceReport
from app.services.formula_service import FormulaService, evaluate
from app.services.ground_transform_service import EvidenceFamily, GroundTransformService
from app.services.grounding_service import ground_mln, ground_theory
from app.services.lifted_transform_service import (
    LiftedTransformService,
    split_consequents,
    working_domain,
)
from app.services.map_service import MapInferenceService, normalize
from app.services.poss_service import PossInferenceService

# Set up module logger
logger = logging.getLogger(__name__)


def all_worlds(atoms: Sequence[Atom]) -> Iterator[World]:
    atoms = tuple(atoms)
    for values in product((False, True), repeat=len(atoms)):
        yield World(atoms, values)


def brute_penalties(mln: Mln) -> Dict[World, Penalty]:
    """
    Penalty of every world by direct evaluation: infinite when a hard rule
    fails, otherwise the violated soft weight minus the smallest such total.
    """
    if not mln.is_ground:
        raise ValidationException("The brute-force oracle needs a ground MLN")
    atoms = mln.atoms
    if len(atoms) > settings.BRUTE_FORCE_MAX_ATOMS:
        raise CapExceededException(
            f"{len(atoms)} atoms exceed the brute-force cap of {settings.BRUTE_FORCE_MAX_ATOMS}",
            details={"atoms": len(atoms), "cap": settings.BRUTE_FORCE_MAX_ATOMS},
        )

    costs: Dict[World, Optional[Fraction]] = {}
    for world in all_worlds(atoms):
        if not all(evaluate(f, world) for f in mln.hard):
            costs[world] = None
            continue
        costs[world] = sum(
            (wf.weight for wf in mln.soft if not evaluate(wf.formula, world)), Fraction(0)
        )

    finite = [cost for cost in costs.values() if cost is not None]
    best = min(finite, default=Fraction(0))
    return {
        world: INFINITE if cost is None else Penalty.finite(cost - best)
        for world, cost in costs.items()
    }


def literal_clauses(atoms: Sequence[Atom], max_size: int) -> Iterator[Formula]:
    """Non-tautological clauses over `atoms` with 1..max_size literals."""
    literals = sorted(Literal(atom, sign) for atom in atoms for sign in (True, False))
    for size in range(1, max_size + 1):
        for chosen in combinations(literals, size):
            if len({lit.atom for lit in chosen}) == size:
                yield disj(*(lit.to_formula() for lit in chosen))


@dataclass(frozen=True)
class QuerySpec:
    """
    Queries asked under each evidence set: explicit `formulas`, or every
    literal clause C with |E| + |C| <= `bound` (and |C| <= `max_clause_size`).
    """

    formulas: Optional[Tuple[Formula, ...]] = None
    bound: Optional[int] = None
    max_clause_size: Optional[int] = None

    def queries(self, atoms: Sequence[Atom], evidence: EvidenceSet) -> Iterator[Formula]:
        if self.formulas is not None:
            yield from self.formulas
            return
        if self.bound is None:
            size = self.max_clause_size or 1
        else:
            size = self.bound - len(evidence)
            if self.max_clause_size is not None:
                size = min(size, self.max_clause_size)
        yield from literal_clauses(atoms, size)


class VerificationService:
    """Runs the cross-checks and folds their answers into reports."""

    def __init__(
        self,
        ground_transform_service: Optional[GroundTransformService] = None,
        lifted_transform_service: Optional[LiftedTransformService] = None,
        formula_service: Optional[FormulaService] = None,
    ):
        self.ground_transform_service = ground_transform_service or GroundTransformService()
        self.lifted_transform_service = lifted_transform_service or LiftedTransformService()
        self.formula_service = formula_service or FormulaService()

    def _distribution(self, mln: Mln) -> Tuple[Dict[World, Penalty], Dict[World, Fraction], PossTheory]:
        grounded = ground_mln(mln)
        penalties = brute_penalties(grounded)
        theory = self.ground_transform_service.transform_exact(grounded)
        poss = PossInferenceService(theory)
        return penalties, poss.least_specific_model(grounded.atoms), theory

    def verify_prop1(self, mln: Mln) -> EquivalenceReport:
        """The least specific model of the exact encoding is 1 - display(pen) on every world."""
        report = EquivalenceReport(suite=VerifySuite.PROP1, subject=mln.name)
        penalties, distribution, theory = self._distribution(mln)
        for world, pen in penalties.items():
            expected = 1 - theory.scale.display(Level.from_penalty(pen))
            report.record(str(world), "pi", expected, distribution[world])
        return report

    def verify_ranking(self, mln: Mln) -> EquivalenceReport:
        """Worlds are ordered the same way by penalty and by possibility."""
        report = EquivalenceReport(suite=VerifySuite.RANKING, subject=mln.name)
        penalties, distribution, _ = self._distribution(mln)
        worlds = list(penalties)
        for w1, w2 in product(worlds, repeat=2):
            report.record(
                f"{w1} vs {w2}",
                "pen < pen iff pi > pi",
                penalties[w1] < penalties[w2],
                distribution[w1] > distribution[w2],
            )
        return report

    def verify_map_poss(
        self,
        mln: Mln,
        theory: PossTheory,
        family: EvidenceFamily,
        query_spec: QuerySpec,
    ) -> EquivalenceReport:
        """Compare MAP and possibilistic entailment for every evidence set and query."""
        report = EquivalenceReport(suite=VerifySuite.EQUIVALENCE, subject=mln.name)
        map_service = MapInferenceService(ground_mln(mln))
        poss_service = PossInferenceService(theory)
        atoms = map_service.atoms
        for evidence in family.evidence_sets(atoms):
            if map_service.penalty(evidence).is_infinite:
                continue
            for query in query_spec.queries(atoms, evidence):
                report.record(
                    str(evidence),
                    str(query),
                    map_service.map_entails(evidence, query),
                    poss_service.poss_entails(evidence, query),
                )
        logger.debug(f"MAP/poss check on {mln.name or 'mln'}: {report.checked} queries")
        return report

    def verify_default(self, mln: Mln, k: int, pruning: bool = True) -> EquivalenceReport:
        theory = self.ground_transform_service.transform_default(mln, k, pruning=pruning)
        return self.verify_map_poss(mln, theory, EvidenceFamily.up_to(k), QuerySpec(bound=k + 1))

    def verify_lifted_matches_ground(
        self,
        mln: Mln,
        k: int,
        domain: TypedDomain,
        blocking: BlockingMode = BlockingMode.FULL,
    ) -> EquivalenceReport:
        """
        The lifted theory grounded over `domain` against the default-rule
        theory of the grounded MLN, both with one consequent literal per rule:
        equal level sets and mutually entailing cuts at every level.
        """
        report = EquivalenceReport(suite=VerifySuite.LIFTED, subject=mln.name)
        lifted = self.lifted_transform_service.transform_lifted(
            mln, k, blocking=blocking, domain=domain
        )
        lifted_ground = ground_theory(lifted)
        reference = split_consequents(
            self.ground_transform_service.transform_default(ground_mln(mln, domain), k)
        )

        lifted_levels, reference_levels = lifted_ground.levels(), reference.levels()
        report.record(
            "",
            "level set",
            [str(level) for level in reference_levels],
            [str(level) for level in lifted_levels],
        )
        for level in sorted(set(lifted_levels) & set(reference_levels)):
            lifted_cut, reference_cut = lifted_ground.cut(level), reference.cut(level)
            report.record(
                "", f"cut {level} entails", True,
                self.formula_service.entails(lifted_cut, conj(*reference_cut)),
            )
            report.record(
                "", f"cut {level} entailed", True,
                self.formula_service.entails(reference_cut, conj(*lifted_cut)),
            )
        return report

    def verify_lifted_queries(
        self,
        mln: Mln,
        k: int,
        domain: TypedDomain,
        blocking: BlockingMode = BlockingMode.SHORT,
    ) -> EquivalenceReport:
        """MAP against the grounded lifted theory on literal queries within the size bound."""
        lifted = self.lifted_transform_service.transform_lifted(
            mln, k, blocking=blocking, domain=domain
        )
        return self.verify_map_poss(
            ground_mln(mln, domain),
            ground_theory(lifted),
            EvidenceFamily.up_to(k),
            QuerySpec(bound=k + 1, max_clause_size=1),
        )


def random_mln(
    seed: int,
    max_atoms: Optional[int] = None,
    max_formulas: Optional[int] = None,
    max_weight: Optional[int] = None,
    hard_probability: float = 0.2,
) -> Mln:
    """
    Reproducible ground MLN: clauses of one to three literals with integer
    weights, and sometimes one hard clause.
    """
    max_atoms = max_atoms or settings.VERIFY_MAX_ATOMS
    max_formulas = max_formulas or settings.VERIFY_MAX_FORMULAS
    max_weight = max_weight or settings.VERIFY_MAX_WEIGHT
    rng = random.Random(seed)
    atoms = [Atom(f"p{i}") for i in range(rng.randint(2, max_atoms))]

    def clause() -> Formula:
        chosen = rng.sample(atoms, rng.randint(1, min(3, len(atoms))))
        return disj(*(Literal(a, rng.random() < 0.5).to_formula() for a in chosen))

    soft = [
        WeightedFormula(clause(), Fraction(rng.randint(1, max_weight)))
        for _ in range(rng.randint(1, max_formulas))
    ]
    hard = [clause()] if rng.random() < hard_probability else []
    return Mln(tuple(soft), tuple(hard), name=f"random-{seed}")


def _bundled_mln(name: str) -> Mln:
    return parse_mln(bundled_text(f"{name}.mln"), name=name)


def bundled_checks(
    service: VerificationService, suite: VerifySuite, k: Optional[int] = None
) -> List[Callable[[], EquivalenceReport]]:
    """Checks over the bundled worked examples and the bundled first-order MLNs."""
    if suite == VerifySuite.EQUIVALENCE:
        example3, example4, example5 = (_bundled_mln(n) for n in ("example3", "example4", "example5"))
        family4 = parse_evidence_family(bundled_text("example4.family"), vocabulary_of(example4))
        return [
            lambda: service.verify_map_poss(
                example3,
                service.ground_transform_service.transform_exact(example3),
                EvidenceFamily.up_to(2),
                QuerySpec(max_clause_size=2),
            ),
            lambda: service.verify_map_poss(
                example4,
                service.ground_transform_service.transform_evidence(example4, family4),
                family4,
                QuerySpec(max_clause_size=2),
            ),
            lambda: service.verify_default(example5, 1),
        ]
    if suite == VerifySuite.LIFTED:
        k = settings.VERIFY_DEFAULT_K if k is None else k
        checks: List[Callable[[], EquivalenceReport]] = []
        for mln in (_bundled_mln("birds"), _bundled_mln("smokers")):
            domain = working_domain(normalize(mln), k, domain_size=2)
            checks.append(lambda m=mln, d=domain: service.verify_lifted_matches_ground(m, k, d))
            checks.append(lambda m=mln, d=domain: service.verify_lifted_queries(m, k, d))
        return checks
    return []


def _run_all(checks: Iterable[Callable[[], EquivalenceReport]]) -> List[EquivalenceReport]:
    # Executor.map keeps submission order, so merged reports are deterministic
    with ThreadPoolExecutor(max_workers=settings.MAX_WORKERS) as executor:
        return list(executor.map(lambda check: check(), checks))


def run_suite(
    suite: VerifySuite,
    seed: int = 0,
    count: Optional[int] = None,
    k: Optional[int] = None,
    service: Optional[VerificationService] = None,
) -> EquivalenceReport:
    """Run one named suite over the seeded random corpus and the bundled examples."""
    service = service or VerificationService()
    count = settings.VERIFY_RANDOM_MLNS if count is None else count
    k = settings.VERIFY_DEFAULT_K if k is None else k
    corpus = [random_mln(seed + i) for i in range(count)]

    with log_context(suite=str(suite), seed=seed):
        if suite == VerifySuite.PROP1:
            checks = [lambda m=m: service.verify_prop1(m) for m in corpus]
        elif suite == VerifySuite.RANKING:
            checks = [lambda m=m: service.verify_ranking(m) for m in corpus]
        elif suite == VerifySuite.EQUIVALENCE:
            checks = [lambda m=m: service.verify_default(m, k) for m in corpus]
            checks += [lambda m=m: service.verify_default(m, k, pruning=False) for m in corpus]
            checks += bundled_checks(service, VerifySuite.EQUIVALENCE)
        elif suite == VerifySuite.LIFTED:
            checks = bundled_checks(service, VerifySuite.LIFTED, k)
        else:
            raise ValidationException(f"Unknown verification suite {suite}")

        reports = _run_all(checks)
        merged = EquivalenceReport.merge(reports, suite=suite, subject=f"seed {seed}")
        logger.info(
            f"Suite {suite}: {merged.checked} checks, {len(merged.mismatches)} mismatches"
        )
        return merged

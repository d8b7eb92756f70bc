"""
Seeded randomized checks of the core invariants: solver answers against
truth tables, grounding counts, renaming invariance, the consistency level
search and the MAP agreement of the ground encodings.
"""
import random
from itertools import combinations, product
from math import perm

import pytest

from app.core.exceptions import AllStrataInconsistentException
from app.integrations.sat import PysatClient
from app.models.formula import (
    And,
    Atom,
    Distinct,
    Formula,
    Iff,
    Implies,
    Literal,
    Not,
    Or,
    Term,
    World,
    conj,
    conj_literals,
    disj,
    substitute,
)
from app.models.mln import EvidenceSet, TypedDomain
from app.models.theory import HARD, Level, PossFormula, PossTheory
from app.repositories.closed_set_repository import ClosedSetRepository
from app.services.formula_service import evaluate, simplify, to_nnf
from app.services.ground_transform_service import EvidenceFamily, literal_sets
from app.services.grounding_service import groundings, variabilize, variable_name
from app.services.isomorphism_service import IsomorphismService, fingerprint
from app.services.map_service import MapInferenceService
from app.services.poss_service import PossInferenceService
from app.services.verification_service import random_mln

SEEDS = range(8)
CONSTANTS = [Term.constant(f"c{i}") for i in range(4)]


def propositional_atoms(count):
    return [Atom(f"p{i}") for i in range(count)]


def random_clause(rng, atoms, max_size=3):
    chosen = rng.sample(atoms, rng.randint(1, min(max_size, len(atoms))))
    return disj(*(Literal(a, rng.random() < 0.5).to_formula() for a in chosen))


def random_formula(rng, atoms, depth=3) -> Formula:
    if depth == 0 or rng.random() < 0.3:
        return rng.choice(atoms)
    kind = rng.choice(["not", "and", "or", "implies", "iff"])
    if kind == "not":
        return Not(random_formula(rng, atoms, depth - 1))
    if kind in ("and", "or"):
        operands = tuple(random_formula(rng, atoms, depth - 1) for _ in range(rng.randint(2, 3)))
        return And(operands) if kind == "and" else Or(operands)
    left, right = random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1)
    return Implies(left, right) if kind == "implies" else Iff(left, right)


def truth(formula, values):
    """Reference semantics over a dict of atom values."""
    if isinstance(formula, Atom):
        return values[formula]
    if isinstance(formula, Not):
        return not truth(formula.operand, values)
    if isinstance(formula, And):
        return all(truth(op, values) for op in formula.operands)
    if isinstance(formula, Or):
        return any(truth(op, values) for op in formula.operands)
    if isinstance(formula, Implies):
        return not truth(formula.antecedent, values) or truth(formula.consequent, values)
    return truth(formula.left, values) == truth(formula.right, values)


def worlds(atoms):
    for values in product((False, True), repeat=len(atoms)):
        yield World(tuple(atoms), values)


def random_ground_literals(rng):
    by_atom = {}
    for _ in range(rng.randint(1, 4)):
        if rng.random() < 0.5:
            atom = Atom("p", (rng.choice(CONSTANTS),))
        else:
            atom = Atom("r", (rng.choice(CONSTANTS), rng.choice(CONSTANTS)))
        by_atom.setdefault(atom, Literal(atom, rng.random() < 0.5))
    return list(by_atom.values())


def random_theory(rng, atoms):
    formulas = []
    for _ in range(rng.randint(2, 7)):
        level = HARD if rng.random() < 0.1 else Level.finite(rng.randint(0, 5))
        formulas.append(PossFormula(random_clause(rng, atoms), level))
    return PossTheory.build(formulas)


@pytest.mark.unit
class TestSolverAgainstTruthTables:
    @pytest.mark.parametrize("seed", SEEDS)
    def test_enumeration_finds_every_model_once(self, seed, formula_service):
        rng = random.Random(seed)
        atoms = propositional_atoms(rng.randint(2, 8))
        clauses = [random_clause(rng, atoms) for _ in range(rng.randint(2, 10))]
        instance = formula_service.instance(clauses, atoms)
        enumeration = PysatClient().enumerate_models(instance, limit=2 ** len(atoms) + 1)
        expected = {w.values for w in worlds(atoms) if all(evaluate(c, w) for c in clauses)}
        found = [w.values for w in enumeration.models]
        assert not enumeration.truncated
        assert len(found) == len(set(found))
        assert set(found) == expected

    @pytest.mark.parametrize("seed", SEEDS)
    def test_evaluation_and_normal_forms_agree(self, seed, formula_service):
        rng = random.Random(seed)
        atoms = propositional_atoms(4)
        subject = random_formula(rng, atoms)
        nnf, simplified = to_nnf(subject), simplify(subject)
        for world in worlds(atoms):
            expected = truth(subject, dict(zip(world.atoms, world.values)))
            assert evaluate(subject, world) == expected
            assert evaluate(nnf, world) == expected
            assert evaluate(simplified, world) == expected
            units = [lit.to_formula() for lit in world.literals()]
            assert formula_service.is_satisfiable([subject] + units) == expected


@pytest.mark.unit
class TestGrounding:
    @pytest.mark.parametrize("size,arity", [(1, 1), (2, 2), (3, 2), (3, 3), (4, 2)])
    def test_one_grounding_per_assignment(self, size, arity):
        variables = [Term.variable(variable_name(i)) for i in range(arity)]
        body = Or((Atom("p", tuple(variables)), Not(Atom("q", (variables[0],)))))
        domain = TypedDomain.from_mapping({"obj": [f"c{i}" for i in range(size)]})
        assert len(list(groundings(body, domain))) == size ** arity

    @pytest.mark.parametrize("size,arity", [(2, 2), (3, 2), (3, 3), (4, 3)])
    def test_guards_keep_exactly_the_injective_assignments(self, size, arity):
        variables = [Term.variable(variable_name(i)) for i in range(arity)]
        guard = conj(*(Distinct(u, v) for u, v in combinations(variables, 2)))
        guarded = Implies(guard, Atom("p", tuple(variables)))
        domain = TypedDomain.from_mapping({"obj": [f"c{i}" for i in range(size)]})
        found = list(groundings(guarded, domain))
        assert len(found) == perm(size, arity)
        assert all(len({t.name for t in theta.values()}) == arity for theta, _ in found)


@pytest.mark.unit
class TestRenamingInvariance:
    @pytest.mark.parametrize("seed", SEEDS)
    def test_permuting_constants_keeps_the_class(self, seed):
        rng = random.Random(seed)
        evidence = conj_literals(random_ground_literals(rng))
        images = list(CONSTANTS)
        rng.shuffle(images)
        renamed = substitute(evidence, dict(zip(CONSTANTS, images)))
        lifted, lifted_renamed = variabilize(evidence), variabilize(renamed)
        assert fingerprint(lifted) == fingerprint(lifted_renamed)
        assert IsomorphismService().isomorphic(lifted, lifted_renamed)

    @pytest.mark.parametrize("seed", SEEDS)
    def test_closed_sets_hold_one_formula_per_class(self, seed):
        rng = random.Random(seed)
        isomorphism = IsomorphismService()
        lifted = [variabilize(conj_literals(random_ground_literals(rng))) for _ in range(12)]
        closed = ClosedSetRepository(isomorphism)
        added = [f for f in lifted if closed.add(f)]
        kept = closed.list()
        assert set(kept) == set(added)
        for f1, f2 in combinations(kept, 2):
            assert not isomorphism.isomorphic(f1, f2)
        for f in lifted:
            assert any(isomorphism.isomorphic(f, k) for k in kept)


@pytest.mark.unit
class TestConsistencyLevelSearch:
    @pytest.mark.parametrize("seed", SEEDS)
    def test_binary_search_matches_linear_scan(self, seed, formula_service):
        rng = random.Random(seed)
        atoms = propositional_atoms(4)
        theory = random_theory(rng, atoms)
        service = PossInferenceService(theory)
        chosen = rng.sample(atoms, rng.randint(0, 2))
        evidence = EvidenceSet.from_literals(Literal(a, rng.random() < 0.5) for a in chosen)

        expected = next(
            (
                level
                for level in service.levels
                if formula_service.is_satisfiable(theory.cut(level) + list(evidence))
            ),
            None,
        )
        if expected is None:
            with pytest.raises(AllStrataInconsistentException):
                service.consistency_level(evidence)
        else:
            assert service.consistency_level(evidence) == expected

    @pytest.mark.parametrize("seed", SEEDS)
    def test_cuts_shrink_and_stay_consistent_upwards(self, seed, formula_service):
        rng = random.Random(seed)
        theory = random_theory(rng, propositional_atoms(4))
        levels = sorted(set(theory.levels()) | {HARD})
        for low, high in zip(levels, levels[1:]):
            assert set(theory.cut(high)) <= set(theory.cut(low))
            if formula_service.is_satisfiable(theory.cut(low)):
                assert formula_service.is_satisfiable(theory.cut(high))


@pytest.mark.unit
class TestEncodingsAgainstMap:
    @pytest.mark.parametrize("seed", SEEDS)
    def test_evidence_encoding_on_its_family(self, seed, ground_transform_service):
        rng = random.Random(seed)
        mln = random_mln(seed, max_atoms=4, max_formulas=4)
        map_service = MapInferenceService(mln)
        candidates = [EvidenceSet.from_literals(c) for c in literal_sets(map_service.atoms, 2)]
        family = [
            ev
            for ev in rng.sample(candidates, min(5, len(candidates)))
            if not map_service.penalty(ev).is_infinite
        ]
        theory = ground_transform_service.transform_evidence(mln, EvidenceFamily.explicit(family))
        poss_service = PossInferenceService(theory)
        for ev in family:
            for atom in map_service.atoms:
                for sign in (True, False):
                    query = Literal(atom, sign).to_formula()
                    assert map_service.map_entails(ev, query) == poss_service.poss_entails(ev, query), (
                        f"{mln.name}: {ev} / {query}"
                    )

    @pytest.mark.parametrize("seed", SEEDS)
    def test_exact_encoding_with_compound_evidence_and_queries(self, seed, ground_transform_service):
        rng = random.Random(seed)
        mln = random_mln(seed, max_atoms=4, max_formulas=4)
        map_service = MapInferenceService(mln)
        poss_service = PossInferenceService(ground_transform_service.transform_exact(mln))
        atoms = list(map_service.atoms)
        for _ in range(6):
            ev = EvidenceSet.of(random_formula(rng, atoms, depth=2))
            if map_service.penalty(ev).is_infinite:
                continue
            query = random_formula(rng, atoms, depth=2)
            assert map_service.map_entails(ev, query) == poss_service.poss_entails(ev, query), (
                f"{mln.name}: {ev} / {query}"
            )

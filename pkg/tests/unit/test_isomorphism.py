import pytest

from app.models.formula import Term
from app.models.theory import Level, PossFormula
from app.repositories.closed_set_repository import ClosedSetRepository, RuleRepository
from app.services.isomorphism_service import IsomorphismService, fingerprint, prime_implicates
from tests.helpers import formula


@pytest.fixture
def isomorphism_service():
    return IsomorphismService()


@pytest.mark.unit
class TestFingerprint:
    def test_invariant_under_renaming_and_rewriting(self):
        assert fingerprint(formula("p(X) -> q(X)")) == fingerprint(formula("!p(Y) | q(Y)"))

    def test_distinguishes_variable_sharing(self):
        assert fingerprint(formula("p(X) -> q(X)")) != fingerprint(formula("p(X) -> q(Y)"))

    def test_types_are_part_of_the_fingerprint(self):
        assert fingerprint(formula("p(person:X)")) != fingerprint(formula("p(paper:X)"))

    def test_prime_implicates_drop_subsumed_clauses(self):
        assert len(prime_implicates(formula("(a | b) & a"))) == 1


@pytest.mark.unit
class TestIsomorphism:
    def test_bijection_maps_variables(self, isomorphism_service):
        theta = isomorphism_service.find_bijection(formula("p(X) -> q(X)"), formula("p(Y) -> q(Y)"))
        assert theta == {Term.variable("X"): Term.variable("Y")}

    def test_alldiff_is_symmetric(self, isomorphism_service):
        assert isomorphism_service.isomorphic(
            formula("alldiff(A, B) -> f(A, B)"), formula("alldiff(C, D) -> f(D, C)")
        )

    def test_argument_order_matters(self, isomorphism_service):
        assert not isomorphism_service.isomorphic(
            formula("f(A, B) & g(A)"), formula("f(A, B) & g(B)")
        )

    def test_ground_formulas_compare_by_equivalence(self, isomorphism_service):
        assert isomorphism_service.isomorphic(formula("a -> b"), formula("!b -> !a"))
        assert not isomorphism_service.isomorphic(formula("p(tweety)"), formula("p(opus)"))


@pytest.mark.unit
class TestRepositories:
    def test_closed_set_stores_one_per_class(self, isomorphism_service):
        closed = ClosedSetRepository(isomorphism_service)
        assert closed.add(formula("p(X) -> q(X)"))
        assert not closed.add(formula("p(Y) -> q(Y)"))
        assert closed.add(formula("p(X) & q(X)"))
        assert len(closed) == 2
        assert closed.find(formula("q(Z) | !p(Z)")) == formula("p(X) -> q(X)")

    def test_rule_repository_keeps_highest_level(self, isomorphism_service):
        rules = RuleRepository(isomorphism_service)
        assert rules.offer(PossFormula(formula("p(X)"), Level.finite(1)))
        assert not rules.offer(PossFormula(formula("p(Y)"), Level.finite(3)))
        assert not rules.offer(PossFormula(formula("p(Z)"), Level.finite(2)))
        assert rules.rules() == [PossFormula(formula("p(X)"), Level.finite(3))]

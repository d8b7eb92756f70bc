import pytest

from app.core.constants import ReportStatus, VerifySuite
from app.models.formula import Atom, World
from app.models.penalty import Penalty
from app.models.theory import Level, PossFormula, PossTheory
from app.schemas.report import EquivalenceReport
from app.services.ground_transform_service import EvidenceFamily
from app.services.map_service import MapInferenceService
from app.services.verification_service import (
    QuerySpec,
    VerificationService,
    brute_penalties,
    random_mln,
    run_suite,
)
from tests.helpers import evidence, formula

a, b, x, y = Atom("a"), Atom("b"), Atom("x"), Atom("y")


@pytest.fixture
def verification_service(ground_transform_service, lifted_transform_service):
    return VerificationService(ground_transform_service, lifted_transform_service)


@pytest.mark.unit
class TestBruteForceOracle:
    def test_penalties_of_worked_example(self, example3):
        penalties = brute_penalties(example3)
        atoms = example3.atoms
        assert len(penalties) == 2 ** len(atoms)
        assert penalties[World.from_true_atoms(atoms, ())] == Penalty.finite(0)
        assert penalties[World.from_true_atoms(atoms, (a, b, x, y))] == Penalty.finite(10)
        assert penalties[World.from_true_atoms(atoms, (a,))] == Penalty.finite(10)

    def test_oracle_never_uses_the_maxsat_engine(self, example3, mocker):
        spy = mocker.spy(MapInferenceService, "penalty")
        constructor = mocker.patch.object(
            MapInferenceService, "__init__", side_effect=AssertionError("engine used")
        )
        brute_penalties(example3)
        assert spy.call_count == 0
        assert constructor.call_count == 0


@pytest.mark.unit
class TestCorpus:
    def test_random_mln_is_reproducible(self):
        assert random_mln(7) == random_mln(7)
        assert random_mln(7).name == "random-7"
        assert random_mln(7).is_ground

    def test_random_mln_respects_bounds(self):
        mln = random_mln(3, max_atoms=3, max_formulas=2, max_weight=4)
        assert len(mln.atoms) <= 3
        assert 1 <= len(mln.soft) <= 2
        assert all(1 <= wf.weight <= 4 for wf in mln.soft)

    def test_query_spec_sizes(self):
        atoms = (a, b)
        assert len(list(QuerySpec().queries(atoms, evidence()))) == 4
        assert len(list(QuerySpec(bound=2).queries(atoms, evidence("a")))) == 4
        assert len(list(QuerySpec(bound=3).queries(atoms, evidence("a")))) == 4 + 4
        assert len(list(QuerySpec(bound=3, max_clause_size=1).queries(atoms, evidence()))) == 4
        assert list(QuerySpec(formulas=(x,)).queries(atoms, evidence())) == [x]


@pytest.mark.unit
class TestChecks:
    def test_exact_encoding_reproduces_the_distribution(self, example3, verification_service):
        report = verification_service.verify_prop1(example3)
        assert report.passed
        assert report.checked == 16

    def test_ranking_is_preserved(self, example3, verification_service):
        assert verification_service.verify_ranking(example3).passed

    def test_default_encoding_matches_map(self, example5, verification_service):
        report = verification_service.verify_default(example5, 1)
        assert report.passed
        assert report.checked > 0

    def test_disagreement_is_reported(self, example3, verification_service):
        wrong = PossTheory.build([PossFormula(formula("a -> !x"), Level.finite(1))])
        report = verification_service.verify_map_poss(
            example3,
            wrong,
            EvidenceFamily.explicit([evidence("a")]),
            QuerySpec(formulas=(x,)),
        )
        assert report.status == ReportStatus.FAIL
        assert report.mismatches[0].expected == "True"
        assert report.mismatches[0].actual == "False"

    def test_run_suite_merges_reports(self):
        report = run_suite(VerifySuite.PROP1, seed=0, count=2)
        assert report.suite == VerifySuite.PROP1
        assert report.subject == "seed 0"
        assert report.passed
        assert report.model_dump()["status"] == "pass"


@pytest.mark.unit
def test_merge_adds_counts():
    first, second = EquivalenceReport(), EquivalenceReport()
    first.record("", "q", True, True)
    second.record("e", "q", True, False)
    merged = EquivalenceReport.merge([first, second])
    assert merged.checked == 2
    assert len(merged.mismatches) == 1

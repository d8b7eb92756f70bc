"""
Seeded property suites: the compiled theories against the MAP engine and the
brute-force oracle. These run the full configured corpus and take minutes.
"""
import pytest

from app.core.constants import VerifySuite
from app.data import bundled_text
from app.formats import parse_mln
from app.services.lifted_transform_service import working_domain
from app.services.map_service import normalize
from app.services.verification_service import VerificationService, run_suite


@pytest.mark.integration
@pytest.mark.slow
@pytest.mark.parametrize(
    "suite", [VerifySuite.PROP1, VerifySuite.RANKING, VerifySuite.EQUIVALENCE, VerifySuite.LIFTED]
)
def test_suite_has_no_mismatches(suite):
    report = run_suite(suite, seed=0)
    assert report.checked > 0
    assert report.mismatches == []


@pytest.mark.integration
@pytest.mark.slow
def test_reduced_cora_lifted_matches_ground():
    mln = parse_mln(bundled_text("cora_reduced.mln"), name="cora_reduced")
    service = VerificationService()
    domain = working_domain(normalize(mln), 2)
    report = service.verify_lifted_matches_ground(mln, 2, domain)
    assert report.passed, report.mismatches[:5]


@pytest.mark.integration
def test_short_corpus_is_quick():
    report = run_suite(VerifySuite.EQUIVALENCE, seed=11, count=2, k=1)
    assert report.passed
    assert report.subject == "seed 11"

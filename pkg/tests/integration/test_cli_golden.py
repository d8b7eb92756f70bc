"""
Golden runs of the command line over the bundled worked examples.
Every command goes through `main`, so exit codes are checked as well.
"""
import re

import pytest

from app.cli import main
from app.data import bundled_path
from app.formats import parse_theory
from app.models.theory import HARD, Level
from app.services.isomorphism_service import IsomorphismService
from tests.helpers import formula

LEVEL = re.compile(r", (l[^,)]+|1)(?:, [^)]+)?\)$")


def data(name):
    return str(bundled_path(name))


def levels(theory_text):
    return sorted(
        LEVEL.search(line).group(1) for line in theory_text.splitlines() if line.startswith("(")
    )


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err



BIRDS_LISTING = [
    ("!antarctic(X) | !flies(X)", Level.finite(0)),
    ("!bird(X) | flies(X)", Level.finite(0)),
    ("!heavy(X) | !flies(X)", Level.finite(0)),
    ("flies(X) | !hasJetPack(X)", Level.finite(0)),
    ("!bird(X) | flies(X) | hasJetPack(X)", Level.finite(1)),
    ("!heavy(X) | antarctic(X) | !flies(X)", Level.finite(1)),
    ("!bird(X) | !heavy(X)", Level.finite(1)),
    ("!antarctic(X) | !heavy(X) | !flies(X)", Level.finite(10)),
    ("flies(X) | !hasJetPack(X) | bird(X)", Level.finite(11)),
    ("!bird(X) | flies(X) | !hasJetPack(X)", Level.finite(100)),
]

SMOKERS_LISTING = [
    ("s(B) | !f(A, B) | !s(A) | !alldiff(A, B)", Level.finite(0)),
    ("!s(A) | c(A)", Level.finite(0)),
    ("!f(C, B) | !f(A, B) | s(A) | s(C) | !alldiff(A, B, C) | !s(B)", Level.finite(10)),
    ("!f(C, B) | !s(A) | !f(A, C) | s(C) | !alldiff(A, B, C) | !s(B)", Level.finite(10)),
    ("!s(A) | !f(C, A) | s(C) | c(B) | !alldiff(A, B, C) | !s(B)", Level.finite(10)),
    ("!s(A) | c(A) | c(B) | !s(B) | !alldiff(A, B)", Level.finite(10)),
    ("s(B) | !f(A, B) | !s(A) | c(A) | !alldiff(A, B)", Level.finite(10)),
    ("!f(A, B) | f(B, A)", HARD),
    ("!f(A, A)", HARD),
]


def assert_matches_listing(theory_text, listing):
    """Pair every listed formula with one compiled formula of the same level, up to renaming."""
    theory = parse_theory(theory_text)
    isomorphism = IsomorphismService()
    unmatched = list(theory)
    for text, level in listing:
        expected = formula(text, theory)
        match = next(
            (pf for pf in unmatched if pf.level == level and isomorphism.isomorphic(pf.formula, expected)),
            None,
        )
        assert match is not None, f"({text}, {level}) missing"
        unmatched.remove(match)
    assert not unmatched, f"unexpected formulas: {[str(pf) for pf in unmatched]}"


@pytest.fixture
def compiled(tmp_path, capsys):
    """Compile a bundled MLN and return the path of the written theory."""

    def _compile(mln, *options):
        code, out, _ = run(capsys, "compile", data(mln), *options)
        assert code == 0
        path = tmp_path / f"{mln}.theory"
        path.write_text(out)
        return path, out

    return _compile


@pytest.mark.integration
class TestWorkedExampleThree:
    def test_exact_theory(self, compiled):
        _, out = compiled("example3.mln", "--method", "exact")
        assert out.splitlines()[0] == "@scale 0 21"
        assert levels(out) == sorted(["l5", "l5", "l10", "l10", "l15"])

    def test_both_engines_agree(self, compiled, capsys):
        theory, _ = compiled("example3.mln", "--method", "exact")
        for evidence, query in [("example3_a.ev", "x & y"), ("example3_ab.ev", "x & !y")]:
            code, out, _ = run(capsys, "query-poss", str(theory), "--evidence", data(evidence), "--query", query)
            assert code == 0, out
            code, out, _ = run(capsys, "query-map", data("example3.mln"), "--evidence", data(evidence), "--query", query)
            assert code == 0, out

    def test_map_output(self, capsys):
        code, out, _ = run(
            capsys, "query-map", data("example3.mln"), "--evidence", data("example3_ab.ev"), "--query", "y"
        )
        assert code == 1
        assert out == "entailed: false\npenalty: 5\n"

    def test_poss_output(self, compiled, capsys):
        theory, _ = compiled("example3.mln", "--method", "exact")
        code, out, _ = run(
            capsys, "query-poss", str(theory), "--evidence", data("example3_ab.ev"), "--query", "x & !y"
        )
        assert code == 0
        assert out == "entailed: true\nconsistency level: l10\n"


@pytest.mark.integration
class TestWorkedExampleFour:
    def test_evidence_theory(self, compiled):
        _, out = compiled(
            "example4.mln", "--method", "evidence", "--evidence-family", data("example4.family")
        )
        assert levels(out) == sorted(["l1", "l2", "l2", "l3", "l10", "l5", "l5", "l6", "l6", "l4"])

    def test_u_is_drowned_for_both_engines(self, compiled, capsys):
        theory, _ = compiled(
            "example4.mln", "--method", "evidence", "--evidence-family", data("example4.family")
        )
        evidence = data("example4_x.ev")
        assert run(capsys, "query-map", data("example4.mln"), "--evidence", evidence, "--query", "u")[0] == 1
        assert run(capsys, "query-poss", str(theory), "--evidence", evidence, "--query", "u")[0] == 1


@pytest.mark.integration
class TestWorkedExampleFive:
    def test_default_theory(self, compiled):
        _, out = compiled("example5.mln", "--method", "default", "-k", "1")
        assert levels(out) == ["l0", "l0", "l1", "l1", "l2"]

    def test_a_stays_open_under_not_b(self, compiled, capsys):
        theory, _ = compiled("example5.mln", "--method", "default", "-k", "1")
        evidence = data("example5_notb.ev")
        assert run(capsys, "query-map", data("example5.mln"), "--evidence", evidence, "--query", "a")[0] == 1
        assert run(capsys, "query-poss", str(theory), "--evidence", evidence, "--query", "a")[0] == 1


@pytest.mark.integration
class TestFirstOrderExamples:
    def test_smokers_theory(self, compiled):
        _, out = compiled("smokers.mln", "--method", "lifted", "-k", "2")
        lines = out.splitlines()
        assert lines[0] == "@type person: alice, bob, carol"
        assert "(!f(person:A, person:A), 1)" in lines
        assert sum(line.endswith(", 1)") for line in lines) == 2
        assert set(levels(out)) >= {"l0", "1"}

    @pytest.mark.slow
    def test_smokers_theory_with_four_literals(self, compiled):
        _, out = compiled("smokers.mln", "--method", "lifted", "-k", "4", "--filter", "conservative")
        assert_matches_listing(out, SMOKERS_LISTING)

    @pytest.mark.slow
    def test_birds_theory(self, compiled, capsys):
        theory, out = compiled(
            "birds.mln", "--method", "lifted", "-k", "3", "--blocking", "full",
            "--domain-size", "1", "--filter", "conservative",
        )
        assert_matches_listing(out, BIRDS_LISTING)
        evidence = data("birds_tweety.ev")
        for query in ("flies(tweety)", "!flies(tweety)"):
            assert run(capsys, "query-poss", str(theory), "--evidence", evidence, "--query", query)[0] == 1
            assert run(capsys, "query-map", data("birds.mln"), "--evidence", evidence, "--query", query)[0] == 1

    @pytest.mark.slow
    def test_single_constant_birds_theory_misses_interactions(self, compiled, tmp_path, capsys):
        # one bird that does not fly says nothing about another bird
        evidence = tmp_path / "two_birds.ev"
        evidence.write_text("bird(a)\nbird(b)\n!flies(a)\n")
        single = tmp_path / "single.theory"
        single.write_text("".join(f"({text}, {level.label()})\n" for text, level in BIRDS_LISTING))
        wide, _ = compiled("birds.mln", "--method", "lifted", "-k", "3", "--domain-size", "2")
        query = ("--evidence", str(evidence), "--query", "flies(b)")
        assert run(capsys, "query-map", data("birds.mln"), *query)[0] == 0
        assert run(capsys, "query-poss", str(single), *query)[0] == 1
        assert run(capsys, "query-poss", str(wide), *query)[0] == 0

    def test_partition(self, capsys):
        code, out, _ = run(capsys, "partition", data("smokers.mln"))
        assert code == 0
        assert out == "person: alice, bob, carol\n"


@pytest.mark.integration
class TestExitCodes:
    def test_missing_file(self, capsys):
        code, out, err = run(capsys, "compile", "--method", "exact", "/no/such/file.mln")
        assert code == 2
        assert out == ""
        assert err.startswith("error: Cannot read /no/such/file.mln")

    def test_usage_error(self, capsys):
        assert run(capsys, "compile", data("example3.mln"))[0] == 2

    def test_parse_error(self, tmp_path, capsys):
        broken = tmp_path / "broken.mln"
        broken.write_text("1 :: a\n2 :: (b\n")
        code, _, err = run(capsys, "compile", "--method", "exact", str(broken))
        assert code == 2
        assert "line 2" in err

    def test_inconsistent_evidence(self, tmp_path, capsys):
        mln, evidence = tmp_path / "hard.mln", tmp_path / "b.ev"
        mln.write_text("1 :: a\ninf :: !b\n")
        evidence.write_text("b\n")
        code, _, err = run(capsys, "query-map", str(mln), "--evidence", str(evidence), "--query", "a")
        assert code == 3
        assert err.startswith("error:")

    def test_exact_cap(self, tmp_path, capsys):
        mln = tmp_path / "wide.mln"
        mln.write_text("".join(f"1 :: p{i}\n" for i in range(21)))
        code, _, err = run(capsys, "compile", "--method", "exact", str(mln))
        assert code == 2
        assert "exceed the exact transformation cap of 20" in err

    def test_verify_reports_status(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "ranking", "--count", "1", "--seed", "5")
        assert code == 0
        assert "status: pass" in out.splitlines()

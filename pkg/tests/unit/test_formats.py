from fractions import Fraction

import pytest

from app.core.exceptions import MlnSyntaxException, ValidationException
from app.data import bundled_text
from app.formats import (
    parse_evidence,
    parse_evidence_family,
    parse_formula,
    parse_mln,
    parse_theory,
    render_mln,
    render_partition,
    render_theory,
)
from app.models.formula import And, Atom, Distinct, Implies, Not, Or, Term
from app.models.mln import TypedDomain
from app.models.theory import HARD, DisplayScale, Level, PossFormula, PossTheory
from tests.helpers import atom, formula


@pytest.mark.unit
class TestMlnParsing:
    def test_weights_are_exact(self):
        mln = parse_mln("0.39 :: a\n1/3 :: b\n-3 :: c\nINF :: d  # trailing comment")
        assert [wf.weight for wf in mln.soft] == [Fraction(39, 100), Fraction(1, 3), Fraction(-3)]
        assert mln.hard == (formula("d"),)

    def test_syntax_error_reports_line_and_column(self):
        with pytest.raises(MlnSyntaxException) as exc_info:
            parse_mln("# header\n1 :: a\n2 :: b |")
        assert exc_info.value.details["line"] == 3
        assert "column" in exc_info.value.details
        assert exc_info.value.message.startswith("line 3")

    def test_arity_conflict(self):
        with pytest.raises(ValidationException):
            parse_mln("1 :: p(a)\n1 :: p(a, b)")

    def test_unknown_type_tag(self):
        with pytest.raises(ValidationException):
            parse_mln("@type person: alice\n1 :: p(robot:X)")

    def test_types_propagate_by_position(self, smokers):
        assert smokers.domain.mapping == {"person": ("alice", "bob", "carol")}
        clause = smokers.soft[1].formula
        assert all(term.type_tag == "person" for term in clause.operands[1].args)

    def test_declared_constant_gets_its_type(self):
        mln = parse_mln("@type person: alice\n1 :: smokes(alice)")
        assert mln.soft[0].formula == atom("smokes", "alice")
        assert mln.soft[0].formula.args[0].type_tag == "person"

    def test_compound_rule_bodies_stay_whole(self):
        mln = parse_mln("10 :: bird(X) -> flies(X)\n1 :: !a | (b & c)\n2 :: a")
        first, second, third = (wf.formula for wf in mln.soft)
        assert isinstance(first, Implies)
        assert first.antecedent == formula("bird(X)", mln)
        assert isinstance(second, Or)
        assert isinstance(third, Atom)

    def test_cora_type_tags(self):
        cora = parse_mln(bundled_text("cora.mln"))
        assert set(cora.domain.type_tags) == {"per", "pap", "cat"}
        assert len(cora) == 15


@pytest.mark.unit
class TestFormulaParsing:
    def test_alldiff_expands_to_pairwise_guards(self):
        parsed = parse_formula("alldiff(A, B, C)")
        assert isinstance(parsed, And)
        assert len(parsed.operands) == 3
        assert all(isinstance(op, Distinct) for op in parsed.operands)

    def test_eq_is_a_negated_guard(self):
        assert parse_formula("eq(A, B)") == Not(Distinct(Term.variable("A"), Term.variable("B")))

    def test_alldiff_needs_two_terms(self):
        with pytest.raises(MlnSyntaxException):
            parse_formula("alldiff(A)")

    def test_implication_is_right_associative(self):
        assert parse_formula("a -> b -> c") == parse_formula("a -> (b -> c)")


@pytest.mark.unit
class TestEvidenceParsing:
    def test_literals(self):
        ev = parse_evidence("a\n!b\n")
        assert set(ev) == {formula("a"), formula("!b")}

    def test_non_ground_evidence_rejected(self):
        with pytest.raises(ValidationException):
            parse_evidence("bird(X)")

    def test_non_literal_evidence_rejected(self):
        with pytest.raises(ValidationException):
            parse_evidence("a & b")

    def test_family_separators(self):
        family = parse_evidence_family("a\n---\n!a\nb\n\nc\n")
        assert [len(member) for member in family.members] == [1, 2, 1]


@pytest.mark.unit
class TestRendering:
    def test_empty_theory_renders_nothing(self):
        assert render_theory(PossTheory()) == ""

    def test_hard_and_numeric_columns(self):
        theory = PossTheory.build(
            [PossFormula(formula("a"), HARD), PossFormula(formula("a -> b"), Level.finite(5))],
            scale=DisplayScale.for_weights(0, 20),
        )
        lines = render_theory(theory, numeric=True).splitlines()
        assert lines == ["@scale 0 21", "(a -> b, l5, 5/21)", "(a, 1, 1)"]

    def test_theory_reads_back(self, example3, ground_transform_service):
        theory = ground_transform_service.transform_exact(example3)
        text = render_theory(theory)
        assert text.startswith("@scale 0 21\n")
        assert parse_theory(text) == theory

    def test_typed_theory_reads_back(self, smokers, lifted_transform_service):
        theory = lifted_transform_service.transform_lifted(smokers, 1)
        again = parse_theory(render_theory(theory))
        assert {str(pf) for pf in again} == {str(pf) for pf in theory}

    def test_compound_theory_formulas_stay_whole(self):
        theory = parse_theory("(bird(X) -> flies(X), l10)\n(!a | (b & c), 1, 1)")
        kinds = {type(pf.formula) for pf in theory}
        assert kinds == {Implies, Or}

    def test_default_scale_keeps_finite_levels_below_one(self):
        theory = parse_theory("(a, l5)\n(b, l2)\n(c, lbot)\n(d, 1)")
        shown = {pf.formula: theory.scale.display(pf.level) for pf in theory}
        assert all(0 <= value < 1 for f, value in shown.items() if f != formula("d"))
        assert shown[formula("a")] > shown[formula("b")] > shown[formula("c")] == 0

    def test_bottom_level_label(self):
        theory = parse_theory("(a, lbot)\n(b, l0.5)")
        assert [pf.level.label() for pf in theory] == ["lbot", "l0.5"]

    def test_mln_reads_back(self, smokers):
        again = parse_mln(render_mln(smokers))
        assert again.soft == smokers.soft
        assert again.hard == smokers.hard

    def test_partition(self):
        partition = TypedDomain.from_mapping({"person": ["alice", "bob"], "obj1": ["opus"]})
        assert render_partition(partition) == "person: alice, bob\nobj1: opus\n"

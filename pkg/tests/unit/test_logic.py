from fractions import Fraction

import pytest

from app.core.exceptions import UnknownAtomException, ValidationException
from app.models.formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    Distinct,
    Implies,
    Literal,
    Not,
    Or,
    Term,
    World,
    conj,
    disj,
    format_formula,
    neg,
)
from app.models.penalty import INFINITE, ZERO, Penalty, format_rational
from app.models.theory import BOTTOM, HARD, DisplayScale, Level
from app.services.formula_service import evaluate, simplify, to_cnf
from tests.helpers import formula

a, b, x, y = Atom("a"), Atom("b"), Atom("x"), Atom("y")


@pytest.mark.unit
class TestFormulaModel:
    def test_constructors_flatten_and_drop_units(self):
        assert conj(a, TRUE, conj(b, x)) == And((a, b, x))
        assert disj(FALSE, a) == a
        assert conj() == TRUE
        assert disj() == FALSE

    def test_neg_removes_double_negation(self):
        assert neg(Not(a)) == a
        assert neg(TRUE) == FALSE

    def test_term_type_is_metadata(self):
        assert Term.variable("X", "person") == Term.variable("X", "obj")
        assert Term.variable("X") != Term.constant("X")

    def test_literal_order_puts_positive_first(self):
        assert sorted([Literal(a, False), Literal(a, True)]) == [Literal(a, True), Literal(a, False)]

    def test_world_lookup_outside_universe_fails(self):
        world = World.from_true_atoms((a, b), (a,))
        assert world[a] and not world[b]
        with pytest.raises(UnknownAtomException):
            world[x]

    def test_format_respects_precedence(self):
        f = Implies(And((a, Or((b, x)))), Not(y))
        assert format_formula(f) == "a & (b | x) -> !y"

    def test_format_merges_guard_clique_into_alldiff(self):
        A, B = Term.variable("A", "person"), Term.variable("B", "person")
        f = And((Distinct(A, B), Atom("f", (A, B))))
        assert format_formula(f) == "alldiff(A, B) & f(A, B)"
        assert format_formula(f, typed=True) == "alldiff(person:A, person:B) & f(person:A, person:B)"


@pytest.mark.unit
class TestEvaluation:
    def test_evaluate_connectives(self):
        world = World.from_true_atoms((a, b, x), (a, x))
        assert evaluate(formula("a -> x"), world)
        assert not evaluate(formula("a & b"), world)
        assert evaluate(formula("b <-> !x"), world)

    def test_non_ground_guard_cannot_be_evaluated(self):
        guard = Distinct(Term.variable("A"), Term.constant("c"))
        with pytest.raises(ValidationException):
            evaluate(guard, World((), ()))

    def test_simplify_evaluates_ground_guards(self):
        c, d = Term.constant("c"), Term.constant("d")
        assert simplify(Distinct(c, d), evaluate_guards=True) == TRUE
        assert simplify(Or((Not(Distinct(c, d)), a)), evaluate_guards=True) == a
        assert simplify(Distinct(c, c)) == FALSE


@pytest.mark.unit
class TestClausalForm:
    def test_tautology_and_contradiction(self):
        assert len(to_cnf(formula("a | !a"))) == 0
        assert to_cnf(FALSE).has_empty_clause

    def test_clause_is_kept_as_is(self):
        clauses = to_cnf(formula("!a | x")).clauses
        assert clauses == ((Literal(a, False), Literal(x, True)),)

    def test_nested_conjunction_gets_definition_atom(self):
        clause_set = to_cnf(formula("a | (b & x)"))
        assert clause_set.auxiliary
        assert set(clause_set.atoms()) == {a, b, x}

    def test_entailment_and_equivalence(self, formula_service):
        assert formula_service.entails([formula("a"), formula("a -> x")], x)
        assert not formula_service.entails([formula("a | b")], a)
        assert formula_service.equivalent(formula("a -> x"), formula("!x -> !a"))
        assert formula_service.is_tautology(formula("(a -> x) | (x -> a)"))

    def test_find_model_projects_onto_requested_atoms(self, formula_service):
        world = formula_service.find_model([formula("a & !b")], atoms=(a, b, x))
        assert world.atoms == (a, b, x)
        assert world[a] and not world[b]


@pytest.mark.unit
class TestPenaltiesAndLevels:
    def test_penalty_order_with_infinity(self):
        assert ZERO < Penalty.finite(3) < INFINITE
        assert not INFINITE < INFINITE
        assert str(INFINITE) == "inf"

    def test_negative_penalty_rejected(self):
        with pytest.raises(ValueError):
            Penalty.finite(-1)

    @pytest.mark.parametrize(
        "value, text",
        [(Fraction(5), "5"), (Fraction(39, 100), "0.39"), (Fraction(-3, 2), "-1.5"), (Fraction(1, 3), "1/3")],
    )
    def test_format_rational(self, value, text):
        assert format_rational(value) == text

    def test_level_order_and_labels(self):
        assert BOTTOM < Level.finite(0) < Level.finite(Fraction(1, 2)) < HARD
        assert [lvl.label() for lvl in (BOTTOM, Level.finite(10), HARD)] == ["lbot", "l10", "1"]
        assert Level.from_penalty(INFINITE) == HARD

    def test_display_scale(self):
        scale = DisplayScale.for_weights(1, 20)
        assert scale.display(Level.finite(5)) == Fraction(6, 22)
        assert scale.display(HARD) == 1
        assert scale.display(BOTTOM) == 0

"""Small builders shared by the test modules."""
from app.data import bundled_text
from app.formats import parse_evidence, parse_formula, parse_mln, vocabulary_of
from app.models.formula import Atom, Literal, Term
from app.models.mln import EvidenceSet, Mln


def atom(name: str, *args: str) -> Atom:
    """Atom over untyped constants, e.g. atom("bird", "tweety")."""
    return Atom(name, tuple(Term.constant(a) for a in args))


def evidence(*literals: str) -> EvidenceSet:
    """Propositional evidence from `a`, `!b` style strings."""
    return EvidenceSet.from_literals(
        Literal(Atom(text.lstrip("!")), not text.startswith("!")) for text in literals
    )


def load_mln(name: str) -> Mln:
    return parse_mln(bundled_text(f"{name}.mln"), name=name)


def load_evidence(name: str, mln: Mln) -> EvidenceSet:
    return parse_evidence(bundled_text(name), vocabulary_of(mln))


def formula(text: str, context=None):
    """Parse a formula, typing its terms from an MLN or theory when given."""
    return parse_formula(text, vocabulary_of(context) if context is not None else None)

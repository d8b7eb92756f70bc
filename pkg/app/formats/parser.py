"""
Text formats for MLNs, evidence, evidence families, formulas and theories.

    @type person: alice, bob          domain directive
    10 :: s(person:A) -> c(A)         soft rule, exact rational weight
    inf :: !f(A, A)                   hard rule
    (bird(X) -> flies(X), l10)        theory line; `1` is hard, `lbot` the bottom level

Identifiers starting with an uppercase letter are variables, all others are
constants. Types come from `type:Name` prefixes, from `@type` directives and
from the argument positions of predicates whose types are already known.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import pyparsing as pp

from app.core.constants import ALLDIFF_PREDICATE, EQUALITY_PREDICATE
from app.core.exceptions import MlnSyntaxException, ValidationException
from app.models.formula import (
    DEFAULT_TYPE,
    FALSE,
    TRUE,
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
    conj,
    is_ground,
    subformulas,
    substitute,
    terms_of,
)
from app.models.mln import EvidenceSet, Mln, TypedDomain, WeightedFormula
from app.models.theory import BOTTOM, HARD, DisplayScale, Level, PossFormula, PossTheory
from app.services.ground_transform_service import EvidenceFamily

# Set up module logger
logger = logging.getLogger(__name__)

pp.ParserElement.enable_packrat()

# Terms are parsed untyped first; this marker is replaced during type resolution
_UNTYPED = ""


def _make_term(tokens: pp.ParseResults) -> Term:
    type_tag = tokens.get("type", _UNTYPED)
    name = tokens["name"]
    if name[0].isupper():
        return Term.variable(name, type_tag)
    return Term.constant(name, type_tag)


def _make_atom(tokens: pp.ParseResults) -> Formula:
    predicate = tokens["predicate"]
    args = tuple(tokens.get("args", ()))
    if not args:
        if predicate == "true":
            return TRUE
        if predicate == "false":
            return FALSE
    if predicate == ALLDIFF_PREDICATE:
        if len(args) < 2:
            raise pp.ParseFatalException("", 0, "alldiff needs at least two terms")
        return conj(*(Distinct(a, b) for a, b in combinations(args, 2)))
    if predicate == EQUALITY_PREDICATE:
        if len(args) != 2:
            raise pp.ParseFatalException("", 0, "eq takes exactly two terms")
        return Not(Distinct(args[0], args[1]))
    return Atom(predicate, args)


def _unary(tokens: pp.ParseResults) -> Formula:
    operand = tokens[0][-1]
    for _ in tokens[0][:-1]:
        operand = Not(operand)
    return operand


def _left_binary(node_type):
    def action(tokens: pp.ParseResults) -> Formula:
        operands = tokens[0][::2]
        return node_type(tuple(operands))

    return action


def _implies(tokens: pp.ParseResults) -> Formula:
    operands = list(tokens[0][::2])
    result = operands[-1]
    for antecedent in reversed(operands[:-1]):
        result = Implies(antecedent, result)
    return result


def _iff(tokens: pp.ParseResults) -> Formula:
    operands = list(tokens[0][::2])
    result = operands[0]
    for right in operands[1:]:
        result = Iff(result, right)
    return result


def _build_grammar() -> Dict[str, pp.ParserElement]:
    identifier = pp.Word(pp.alphas + "_", pp.alphanums + "_")
    term = (
        pp.Optional(identifier("type") + pp.Suppress(":")) + identifier("name")
    ).set_parse_action(_make_term)
    args = pp.Suppress("(") + pp.Group(pp.DelimitedList(term))("args") + pp.Suppress(")")
    atom = (identifier("predicate") + pp.Optional(args)).set_parse_action(_make_atom)

    formula = pp.infix_notation(
        atom,
        [
            (pp.Literal("!"), 1, pp.OpAssoc.RIGHT, _unary),
            (pp.Literal("&"), 2, pp.OpAssoc.LEFT, _left_binary(And)),
            (pp.Literal("|"), 2, pp.OpAssoc.LEFT, _left_binary(Or)),
            (pp.Literal("->"), 2, pp.OpAssoc.RIGHT, _implies),
            (pp.Literal("<->"), 2, pp.OpAssoc.LEFT, _iff),
        ],
    )

    number = pp.Regex(r"[+-]?\d+(?:\.\d+)?(?:/\d+)?")
    weight = pp.CaselessKeyword("inf") | number
    rule = weight("weight") + pp.Suppress("::") + pp.Group(formula)("formula")

    type_directive = (
        pp.Suppress(pp.Keyword("@type"))
        + identifier("tag")
        + pp.Suppress(":")
        + pp.Group(pp.Optional(pp.DelimitedList(identifier)))("constants")
    )
    scale_directive = pp.Suppress(pp.Keyword("@scale")) + number("offset") + number("denominator")

    level = pp.Regex(r"lbot|l[+-]?\d+(?:\.\d+)?(?:/\d+)?|1")
    theory_line = (
        pp.Suppress("(")
        + pp.Group(formula)("formula")
        + pp.Suppress(",")
        + level("level")
        + pp.Optional(pp.Suppress(",") + number("numeric"))
        + pp.Suppress(")")
    )

    comment = pp.python_style_comment
    grammar = {
        "formula": formula,
        "rule": rule,
        "type": type_directive,
        "scale": scale_directive,
        "theory": theory_line,
    }
    for element in grammar.values():
        element.ignore(comment)
    return grammar


_GRAMMAR = _build_grammar()


@dataclass
class Vocabulary:
    """Predicate arities, argument types and declared constants collected while parsing."""

    arities: Dict[str, int] = field(default_factory=dict)
    positions: Dict[Tuple[str, int], str] = field(default_factory=dict)
    declared: Dict[str, List[str]] = field(default_factory=dict)

    def declare(self, type_tag: str, constants: Sequence[str]) -> None:
        names = self.declared.setdefault(type_tag, [])
        names.extend(c for c in constants if c not in names)

    def declared_type(self, constant: str) -> Optional[str]:
        for type_tag, names in self.declared.items():
            if constant in names:
                return type_tag
        return None

    @property
    def domain(self) -> TypedDomain:
        return TypedDomain.from_mapping(self.declared)

    @classmethod
    def of(cls, formulas: Sequence[Formula], domain: Optional[TypedDomain] = None) -> "Vocabulary":
        vocabulary = cls()
        if domain is not None:
            for type_tag, constants in domain.entries:
                vocabulary.declare(type_tag, constants)
        for formula in formulas:
            vocabulary.learn(formula)
        return vocabulary

    def learn(self, formula: Formula) -> None:
        """Record arities and argument types of a resolved formula."""
        for sub in subformulas(formula):
            if not isinstance(sub, Atom):
                continue
            arity = self.arities.setdefault(sub.predicate, sub.arity)
            if arity != sub.arity:
                raise ValidationException(
                    f"Predicate {sub.predicate} used with arity {sub.arity} and {arity}",
                    details={"predicate": sub.predicate},
                )
            for position, arg in enumerate(sub.args):
                if arg.type_tag != _UNTYPED:
                    self.positions.setdefault((sub.predicate, position), arg.type_tag)

    def resolve(self, formula: Formula) -> Formula:
        """Give every term of `formula` its type; one variable has one type per formula."""
        explicit: Dict[Term, str] = {}
        for sub in subformulas(formula):
            pairs: List[Tuple[Term, Optional[str]]] = []
            if isinstance(sub, Atom):
                pairs = [
                    (arg, self.positions.get((sub.predicate, i)))
                    for i, arg in enumerate(sub.args)
                ]
            elif isinstance(sub, Distinct):
                pairs = [(sub.left, None), (sub.right, None)]
            for arg, position_type in pairs:
                self._note(explicit, arg, position_type)

        # Guards share the type of their partner term
        for sub in subformulas(formula):
            if isinstance(sub, Distinct):
                left, right = explicit.get(sub.left), explicit.get(sub.right)
                if left and not right:
                    explicit[sub.right] = left
                elif right and not left:
                    explicit[sub.left] = right

        theta = {}
        for term in terms_of(formula):
            type_tag = explicit.get(term) or (
                None if term.is_variable else self.declared_type(term.name)
            )
            theta[term] = term.with_type(type_tag or DEFAULT_TYPE)
        return _retype(formula, theta)

    def _note(self, explicit: Dict[Term, str], arg: Term, position_type: Optional[str]) -> None:
        candidate = arg.type_tag if arg.type_tag != _UNTYPED else position_type
        if not arg.is_variable and candidate is None:
            candidate = self.declared_type(arg.name)
        if candidate is None:
            return
        if self.declared and arg.type_tag != _UNTYPED and arg.type_tag not in self.declared:
            raise ValidationException(
                f"Unknown type tag '{arg.type_tag}'", details={"type": arg.type_tag}
            )
        current = explicit.setdefault(arg, candidate)
        if current != candidate and arg.type_tag != _UNTYPED:
            raise ValidationException(
                f"Term {arg.name} is used with types {current} and {candidate}",
                details={"term": arg.name},
            )


def _retype(formula: Formula, theta: Dict[Term, Term]) -> Formula:
    # substitute() matches terms by kind and name, so it also rewrites type tags
    return substitute(formula, theta)


def _value(parsed: pp.ParseResults, name: str):
    """A named single value; grouped results are unwrapped."""
    value = parsed[name]
    return value[0] if isinstance(value, pp.ParseResults) else value


def _parse_line(element: pp.ParserElement, text: str, line_number: int) -> pp.ParseResults:
    try:
        return element.parse_string(text, parse_all=True)
    except (pp.ParseException, pp.ParseFatalException) as exc:
        raise MlnSyntaxException(exc.msg, line=line_number, column=exc.column) from exc


def _content_lines(text: str) -> List[Tuple[int, str]]:
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append((number, stripped))
    return lines


def _parse_weight(text: str) -> Optional[Fraction]:
    if text.lower() == "inf":
        return None
    return Fraction(text)


def _parse_type_directive(line: str, number: int, vocabulary: Vocabulary) -> None:
    parsed = _parse_line(_GRAMMAR["type"], line, number)
    vocabulary.declare(parsed["tag"], list(parsed["constants"]))


def parse_formula(text: str, vocabulary: Optional[Vocabulary] = None) -> Formula:
    vocabulary = vocabulary or Vocabulary()
    parsed = _parse_line(_GRAMMAR["formula"], text.strip(), 1)
    return vocabulary.resolve(parsed[0])


def parse_mln(text: str, name: str = "") -> Mln:
    """Parse an MLN document; weights stay exact, negative weights are kept as written."""
    vocabulary = Vocabulary()
    raw: List[Tuple[int, Optional[Fraction], Formula]] = []
    for number, line in _content_lines(text):
        if line.startswith("@type"):
            _parse_type_directive(line, number, vocabulary)
            continue
        parsed = _parse_line(_GRAMMAR["rule"], line, number)
        formula = _value(parsed, "formula")
        vocabulary.learn(formula)
        raw.append((number, _parse_weight(parsed["weight"]), formula))

    soft: List[WeightedFormula] = []
    hard: List[Formula] = []
    for number, weight, formula in raw:
        try:
            resolved = vocabulary.resolve(formula)
        except ValidationException as exc:
            raise ValidationException(f"line {number}: {exc.message}", details=exc.details) from exc
        if weight is None:
            hard.append(resolved)
        else:
            soft.append(WeightedFormula(resolved, weight))
    mln = Mln(tuple(soft), tuple(hard), vocabulary.domain, name)
    logger.debug(f"Parsed MLN {name or '<text>'}: {len(soft)} soft and {len(hard)} hard rules")
    return mln


def vocabulary_of(mln_or_theory) -> Vocabulary:
    if isinstance(mln_or_theory, Mln):
        return Vocabulary.of(list(mln_or_theory.formulas()), mln_or_theory.domain)
    return Vocabulary.of([pf.formula for pf in mln_or_theory], mln_or_theory.domain)


def _parse_literal_lines(
    lines: Sequence[Tuple[int, str]], vocabulary: Vocabulary
) -> EvidenceSet:
    formulas: List[Formula] = []
    for number, line in lines:
        formula = vocabulary.resolve(_parse_line(_GRAMMAR["formula"], line, number)[0])
        if Literal.from_formula(formula) is None:
            raise ValidationException(
                f"line {number}: evidence must be a literal, got {formula}", details={"line": number}
            )
        if not is_ground(formula):
            raise ValidationException(
                f"line {number}: evidence must be ground, got {formula}", details={"line": number}
            )
        formulas.append(formula)
    return EvidenceSet(tuple(formulas))


def parse_evidence(text: str, vocabulary: Optional[Vocabulary] = None) -> EvidenceSet:
    """One ground literal per line; `@type` directives and comments allowed."""
    vocabulary = vocabulary or Vocabulary()
    lines = []
    for number, line in _content_lines(text):
        if line.startswith("@type"):
            _parse_type_directive(line, number, vocabulary)
        else:
            lines.append((number, line))
    return _parse_literal_lines(lines, vocabulary)


def parse_evidence_family(text: str, vocabulary: Optional[Vocabulary] = None) -> EvidenceFamily:
    """Evidence sets separated by blank lines or `---`."""
    vocabulary = vocabulary or Vocabulary()
    groups: List[List[Tuple[int, str]]] = [[]]
    for number, raw in enumerate(text.splitlines(), start=1):
        if raw.strip().startswith("#"):
            continue
        line = raw.split("#", 1)[0].strip()
        if not line or line == "---":
            if groups[-1]:
                groups.append([])
            continue
        if line.startswith("@type"):
            _parse_type_directive(line, number, vocabulary)
            continue
        groups[-1].append((number, line))
    members = [_parse_literal_lines(group, vocabulary) for group in groups if group]
    return EvidenceFamily.explicit(members)


def _parse_level(text: str) -> Level:
    if text == "1":
        return HARD
    if text == "lbot":
        return BOTTOM
    return Level.finite(Fraction(text[1:]))


def parse_theory(text: str) -> PossTheory:
    """Theory lines `(formula, level)` with optional numeric column, `@type` and `@scale` directives."""
    vocabulary = Vocabulary()
    scale: Optional[DisplayScale] = None
    raw: List[Tuple[int, Formula, Level]] = []
    for number, line in _content_lines(text):
        if line.startswith("@type"):
            _parse_type_directive(line, number, vocabulary)
            continue
        if line.startswith("@scale"):
            parsed = _parse_line(_GRAMMAR["scale"], line, number)
            scale = DisplayScale(Fraction(parsed["offset"]), Fraction(parsed["denominator"]))
            continue
        parsed = _parse_line(_GRAMMAR["theory"], line, number)
        formula = _value(parsed, "formula")
        vocabulary.learn(formula)
        raw.append((number, formula, _parse_level(parsed["level"])))
    formulas = [PossFormula(vocabulary.resolve(formula), level) for _, formula, level in raw]
    return PossTheory.build(formulas, vocabulary.domain, scale)

from typing import List

from app.models.formula import format_formula
from app.models.mln import Mln, TypedDomain
from app.models.penalty import format_rational
from app.models.theory import PossFormula, PossTheory
from app.schemas.report import EquivalenceReport


def _type_directives(domain: TypedDomain) -> List[str]:
    return [f"@type {tag}: {', '.join(constants)}" for tag, constants in domain.entries]


def render_formula(formula, typed: bool = True) -> str:
    return format_formula(formula, typed=typed)


def render_poss_formula(pf: PossFormula, theory: PossTheory, numeric: bool = False) -> str:
    text = f"({render_formula(pf.formula)}, {pf.level.label()}"
    if numeric:
        text += f", {format_rational(theory.scale.display(pf.level))}"
    return text + ")"


def render_theory(theory: PossTheory, numeric: bool = False) -> str:
    """
    One `(formula, level)` line per formula, by level and then formula text,
    preceded by the `@type` and `@scale` directives needed to read it back.
    """
    if not len(theory):
        return ""
    lines = _type_directives(theory.domain)
    lines.append(
        f"@scale {format_rational(theory.scale.offset)} {format_rational(theory.scale.denominator)}"
    )
    lines.extend(render_poss_formula(pf, theory, numeric) for pf in theory)
    return "\n".join(lines) + "\n"


def render_mln(mln: Mln) -> str:
    lines = _type_directives(mln.domain)
    lines.extend(f"{format_rational(wf.weight)} :: {render_formula(wf.formula)}" for wf in mln.soft)
    lines.extend(f"inf :: {render_formula(f)}" for f in mln.hard)
    return "\n".join(lines) + "\n" if lines else ""


def render_partition(partition: TypedDomain) -> str:
    if not partition:
        return ""
    return "\n".join(f"{tag}: {', '.join(constants)}" for tag, constants in partition.entries) + "\n"


def render_report(report: EquivalenceReport) -> str:
    lines = [
        f"suite: {report.suite or '-'}",
        f"subject: {report.subject or '-'}",
        f"status: {report.status}",
        f"checked: {report.checked}",
        f"mismatches: {len(report.mismatches)}",
    ]
    for mismatch in report.mismatches:
        line = (
            f"  evidence={mismatch.evidence} query={mismatch.query} "
            f"expected={mismatch.expected} actual={mismatch.actual}"
        )
        if mismatch.context:
            line += f" ({mismatch.context})"
        lines.append(line)
    return "\n".join(lines) + "\n"

from app.formats.parser import (
    Vocabulary,
    parse_evidence,
    parse_evidence_family,
    parse_formula,
    parse_mln,
    parse_theory,
    vocabulary_of,
)
from app.formats.renderer import (
    render_mln,
    render_partition,
    render_report,
    render_theory,
)

__all__ = [
    "Vocabulary",
    "parse_evidence",
    "parse_evidence_family",
    "parse_formula",
    "parse_mln",
    "parse_theory",
    "render_mln",
    "render_partition",
    "render_report",
    "render_theory",
    "vocabulary_of",
]

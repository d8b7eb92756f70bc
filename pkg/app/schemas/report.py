# app/schemas/report.py
from typing import List, Optional

from pydantic import BaseModel, Field, computed_field

from app.core.constants import ReportStatus, VerifySuite


class Mismatch(BaseModel):
    """One disagreement between two engines on the same question."""

    evidence: str
    query: str
    expected: str
    actual: str
    context: Optional[str] = None


class EquivalenceReport(BaseModel):
    suite: Optional[VerifySuite] = None
    subject: str = ""
    checked: int = 0
    mismatches: List[Mismatch] = Field(default_factory=list)

    @computed_field
    @property
    def status(self) -> ReportStatus:
        return ReportStatus.FAIL if self.mismatches else ReportStatus.PASS

    @property
    def passed(self) -> bool:
        return self.status == ReportStatus.PASS

    def record(
        self,
        evidence: str,
        query: str,
        expected: object,
        actual: object,
        context: Optional[str] = None,
    ) -> bool:
        """Count one check; a differing answer becomes a mismatch. Returns agreement."""
        self.checked += 1
        if expected == actual:
            return True
        self.mismatches.append(
            Mismatch(
                evidence=evidence,
                query=query,
                expected=str(expected),
                actual=str(actual),
                context=context,
            )
        )
        return False

    @classmethod
    def merge(
        cls, reports: List["EquivalenceReport"], suite: Optional[VerifySuite] = None, subject: str = ""
    ) -> "EquivalenceReport":
        merged = cls(suite=suite, subject=subject)
        for report in reports:
            merged.checked += report.checked
            merged.mismatches.extend(report.mismatches)
        return merged

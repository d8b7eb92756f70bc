import logging
from typing import List, Optional

from app.models.formula import Formula
from app.models.theory import PossFormula
from app.repositories.base_repository import BaseRepository
from app.services.isomorphism_service import IsomorphismService, fingerprint

# Set up module logger
logger = logging.getLogger(__name__)


class ClosedSetRepository(BaseRepository[str, Formula]):
    """
    Already processed variabilized formulas, keyed by fingerprint.
    Entries under one key are pairwise non-isomorphic.
    """

    def __init__(self, isomorphism_service: Optional[IsomorphismService] = None):
        super().__init__()
        self.isomorphism_service = isomorphism_service or IsomorphismService()

    def find(self, formula: Formula) -> Optional[Formula]:
        """Stored formula isomorphic to `formula`, if any."""
        for stored in self.get(fingerprint(formula)):
            if self.isomorphism_service.isomorphic(stored, formula):
                return stored
        return None

    def add(self, formula: Formula) -> bool:
        """Store `formula` unless an isomorphic one is present; True when stored."""
        if self.find(formula) is not None:
            return False
        self.create(fingerprint(formula), formula)
        return True


class RuleRepository(BaseRepository[str, PossFormula]):
    """Emitted rules deduplicated by isomorphism; an isomorphic copy only raises the level."""

    def __init__(self, isomorphism_service: Optional[IsomorphismService] = None):
        super().__init__()
        self.isomorphism_service = isomorphism_service or IsomorphismService()

    def offer(self, rule: PossFormula) -> bool:
        key = fingerprint(rule.formula)
        for stored in self.get(key):
            if self.isomorphism_service.isomorphic(stored.formula, rule.formula):
                if stored.level < rule.level:
                    self.replace(key, stored, PossFormula(stored.formula, rule.level))
                    logger.debug(f"Raised {stored.formula} to {rule.level}")
                return False
        self.create(key, rule)
        return True

    def rules(self) -> List[PossFormula]:
        return self.list()

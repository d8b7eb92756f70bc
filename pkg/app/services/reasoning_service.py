"""
Entry points shared by the command line and the HTTP routes: compile an MLN
into a possibilistic theory, answer MAP and possibilistic queries, and list
interchangeable constants.
"""
import logging
from typing import Optional, Tuple

from app.core.config import settings
from app.core.constants import BlockingMode, RedundancyFilter, TransformMethod
from app.core.exceptions import ValidationException
from app.core.logging import log_context
from app.models.formula import Formula, Term
from app.models.mln import EvidenceSet, Mln, TypedDomain
from app.models.penalty import Penalty
from app.models.theory import Level, PossTheory
from app.services.ground_transform_service import EvidenceFamily, GroundTransformService
from app.services.grounding_service import domain_of, ground_mln
from app.services.isomorphism_service import IsomorphismService
from app.services.lifted_transform_service import (
    LiftedTransformService,
    interchangeable_partition,
    working_domain,
)
from app.services.map_service import MapInferenceService, normalize
from app.services.poss_service import PossInferenceService, filter_redundant

# Set up module logger
logger = logging.getLogger(__name__)


class ReasoningService:
    def __init__(
        self,
        ground_transform_service: Optional[GroundTransformService] = None,
        lifted_transform_service: Optional[LiftedTransformService] = None,
        isomorphism_service: Optional[IsomorphismService] = None,
    ):
        self.isomorphism_service = isomorphism_service or IsomorphismService()
        self.ground_transform_service = ground_transform_service or GroundTransformService()
        self.lifted_transform_service = lifted_transform_service or LiftedTransformService(
            isomorphism_service=self.isomorphism_service,
            ground_transform_service=self.ground_transform_service,
        )

    def compile(
        self,
        mln: Mln,
        method: TransformMethod,
        k: Optional[int] = None,
        evidence_family: Optional[EvidenceFamily] = None,
        blocking: BlockingMode = BlockingMode.FULL,
        redundancy_filter: RedundancyFilter = RedundancyFilter.NONE,
        domain_size: Optional[int] = None,
        pruning: bool = True,
        omit_entailed_blocking: bool = False,
    ) -> PossTheory:
        """
        Compile `mln` with the chosen encoding, then apply the redundancy
        filter. Ground encodings ground the MLN over its declared domain first.
        """
        k = settings.COMPILE_DEFAULT_K if k is None else k
        if k < 0:
            raise ValidationException(f"k must be nonnegative, got {k}", details={"k": k})

        with log_context(method=str(method), mln=mln.name or "<text>"):
            if method == TransformMethod.EXACT:
                theory = self.ground_transform_service.transform_exact(ground_mln(mln))
            elif method == TransformMethod.EVIDENCE:
                if evidence_family is None:
                    raise ValidationException("The evidence method needs an evidence family")
                theory = self.ground_transform_service.transform_evidence(
                    ground_mln(mln), evidence_family
                )
            elif method == TransformMethod.DEFAULT:
                theory = self.ground_transform_service.transform_default(
                    ground_mln(mln),
                    k,
                    pruning=pruning,
                    omit_entailed_blocking=omit_entailed_blocking,
                )
            elif method == TransformMethod.LIFTED:
                theory = self.lifted_transform_service.transform_lifted(
                    mln, k, blocking=blocking, domain_size=domain_size, pruning=pruning
                )
            else:
                raise ValidationException(f"Unknown transformation method {method}")

            theory = filter_redundant(theory, redundancy_filter)
            logger.info(f"Compiled {len(mln)} rules into {len(theory)} formulas ({method})")
            return theory

    def query_map(self, mln: Mln, evidence: EvidenceSet, query: Formula) -> Tuple[bool, Penalty]:
        """MAP entailment over the MLN grounded on its domain plus the query constants."""
        domain = mln.domain.merged(domain_of(list(evidence) + [query]))
        service = MapInferenceService(ground_mln(mln, domain))
        entailed = service.map_entails(evidence, query)
        return entailed, service.penalty(evidence)

    def query_poss(
        self, theory: PossTheory, evidence: EvidenceSet, query: Formula
    ) -> Tuple[bool, Level]:
        service = PossInferenceService(theory, domain=domain_of(list(evidence) + [query]))
        level = service.consistency_level(evidence)
        return service.entails_at(query, level, evidence), level

    def partition(self, mln: Mln, domain_size: Optional[int] = None) -> TypedDomain:
        """Interchangeability classes over the working domain of `mln`."""
        mln = normalize(mln)
        domain = working_domain(mln, 0, domain_size)
        constants = [Term.constant(name, tag) for tag, names in domain.entries for name in names]
        return interchangeable_partition(mln, constants, self.isomorphism_service)

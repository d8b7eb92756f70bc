import logging

from fastapi import APIRouter, Depends

from app.api.deps import get_reasoning_service
from app.core.logging import log_context
from app.formats import parse_evidence, parse_formula, parse_mln, parse_theory, vocabulary_of
from app.schemas.reasoning import (
    MapQueryRequest,
    MapQueryResponse,
    PossQueryRequest,
    PossQueryResponse,
)
from app.services.reasoning_service import ReasoningService
from app.utils.timeout import with_timeout

# Set up logger
logger = logging.getLogger(__name__)

router = APIRouter()


def _query_map(data: MapQueryRequest, service: ReasoningService) -> MapQueryResponse:
    mln = parse_mln(data.mln)
    vocabulary = vocabulary_of(mln)
    entailed, penalty = service.query_map(
        mln, parse_evidence(data.evidence, vocabulary), parse_formula(data.query, vocabulary)
    )
    return MapQueryResponse(entailed=entailed, penalty=str(penalty))


def _query_poss(data: PossQueryRequest, service: ReasoningService) -> PossQueryResponse:
    theory = parse_theory(data.theory)
    vocabulary = vocabulary_of(theory)
    entailed, level = service.query_poss(
        theory, parse_evidence(data.evidence, vocabulary), parse_formula(data.query, vocabulary)
    )
    return PossQueryResponse(entailed=entailed, consistency_level=level.label())


@router.post("/map", response_model=MapQueryResponse)
async def query_map(
    data: MapQueryRequest,
    service: ReasoningService = Depends(get_reasoning_service()),
) -> MapQueryResponse:
    """MAP entailment of a query under evidence"""
    with log_context(action="query_map"):
        return await with_timeout(_query_map, data, service)


@router.post("/poss", response_model=PossQueryResponse)
async def query_poss(
    data: PossQueryRequest,
    service: ReasoningService = Depends(get_reasoning_service()),
) -> PossQueryResponse:
    """Possibilistic entailment of a query under evidence"""
    with log_context(action="query_poss"):
        return await with_timeout(_query_poss, data, service)

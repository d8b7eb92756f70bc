import logging

from fastapi import APIRouter, Depends

from app.api.deps import get_reasoning_service
from app.core.logging import log_context
from app.formats import parse_evidence_family, parse_mln, render_theory, vocabulary_of
from app.schemas.reasoning import CompileRequest, CompileResponse
from app.services.reasoning_service import ReasoningService
from app.utils.timeout import with_timeout

# Set up logger
logger = logging.getLogger(__name__)

router = APIRouter()


def _compile(data: CompileRequest, service: ReasoningService) -> CompileResponse:
    mln = parse_mln(data.mln)
    family = None
    if data.evidence_family is not None:
        family = parse_evidence_family(data.evidence_family, vocabulary_of(mln))
    theory = service.compile(
        mln,
        data.method,
        k=data.k,
        evidence_family=family,
        blocking=data.blocking,
        redundancy_filter=data.redundancy_filter,
        domain_size=data.domain_size,
        pruning=data.pruning,
        omit_entailed_blocking=data.omit_entailed_blocking,
    )
    return CompileResponse(
        theory=render_theory(theory, numeric=data.numeric),
        formula_count=len(theory),
        levels=[level.label() for level in theory.levels()],
    )


@router.post("", response_model=CompileResponse)
async def compile_mln(
    data: CompileRequest,
    service: ReasoningService = Depends(get_reasoning_service()),
) -> CompileResponse:
    """Compile an MLN document into a possibilistic theory"""
    with log_context(action="compile", method=str(data.method), k=data.k):
        logger.info(f"Compiling with {data.method}")
        return await with_timeout(_compile, data, service)

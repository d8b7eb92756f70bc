import logging

from fastapi import APIRouter, Depends

from app.api.deps import get_verification_service
from app.core.logging import log_context
from app.schemas.reasoning import VerifyRequest
from app.schemas.report import EquivalenceReport
from app.services.verification_service import VerificationService, run_suite
from app.utils.timeout import with_timeout

# Set up logger
logger = logging.getLogger(__name__)

router = APIRouter()


@router.post("", response_model=EquivalenceReport)
async def verify(
    data: VerifyRequest,
    service: VerificationService = Depends(get_verification_service()),
) -> EquivalenceReport:
    """Run a verification suite and return its report"""
    with log_context(action="verify", suite=str(data.suite), seed=data.seed):
        logger.info(f"Running suite {data.suite}")
        return await with_timeout(
            run_suite, data.suite, seed=data.seed, count=data.count, service=service
        )

from fastapi import APIRouter, Depends

from app.api.deps import get_cached_reasoning_service
from app.formats import parse_mln
from app.schemas.reasoning import PartitionRequest, PartitionResponse
from app.services.reasoning_service import ReasoningService
from app.utils.timeout import with_timeout

router = APIRouter()


def _partition(data: PartitionRequest, service: ReasoningService) -> PartitionResponse:
    partition = service.partition(parse_mln(data.mln), domain_size=data.domain_size)
    return PartitionResponse(classes={tag: list(names) for tag, names in partition.entries})


@router.post("", response_model=PartitionResponse)
async def partition_constants(
    data: PartitionRequest,
    service: ReasoningService = Depends(get_cached_reasoning_service()),
) -> PartitionResponse:
    """Interchangeability classes of the MLN's constants"""
    return await with_timeout(_partition, data, service)

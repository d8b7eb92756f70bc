from app.schemas.reasoning import (
    CompileRequest,
    CompileResponse,
    MapQueryRequest,
    MapQueryResponse,
    PartitionRequest,
    PartitionResponse,
    PossQueryRequest,
    PossQueryResponse,
    VerifyRequest,
)
from app.schemas.report import EquivalenceReport, Mismatch

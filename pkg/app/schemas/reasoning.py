from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from app.core.constants import BlockingMode, RedundancyFilter, TransformMethod, VerifySuite


# Compile Schemas
class CompileRequest(BaseModel):
    mln: str  # MLN document text
    method: TransformMethod = TransformMethod.DEFAULT
    k: Optional[int] = Field(default=None, ge=0)
    blocking: BlockingMode = BlockingMode.FULL
    evidence_family: Optional[str] = None  # evidence family text, needed by the evidence method
    redundancy_filter: RedundancyFilter = RedundancyFilter.NONE
    numeric: bool = False
    domain_size: Optional[int] = Field(default=None, ge=1)
    pruning: bool = True
    omit_entailed_blocking: bool = False


class CompileResponse(BaseModel):
    theory: str  # rendered theory text
    formula_count: int
    levels: List[str]


# Query Schemas
class MapQueryRequest(BaseModel):
    mln: str
    evidence: str = ""
    query: str


class MapQueryResponse(BaseModel):
    entailed: bool
    penalty: str


class PossQueryRequest(BaseModel):
    theory: str
    evidence: str = ""
    query: str


class PossQueryResponse(BaseModel):
    entailed: bool
    consistency_level: str


# Partition Schemas
class PartitionRequest(BaseModel):
    mln: str
    domain_size: Optional[int] = Field(default=None, ge=1)


class PartitionResponse(BaseModel):
    classes: Dict[str, List[str]]


# Verify Schemas
class VerifyRequest(BaseModel):
    suite: VerifySuite
    seed: int = 0
    count: Optional[int] = Field(default=None, ge=0)  # random MLNs; defaults to the configured corpus size

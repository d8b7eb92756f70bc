# app/api/api.py
from fastapi import APIRouter

from app.api.routes import compilation, partitions, queries, verification

api_router = APIRouter()
api_router.include_router(compilation.router, prefix="/compile", tags=["compile"])
api_router.include_router(queries.router, prefix="/query", tags=["query"])
api_router.include_router(partitions.router, prefix="/partition", tags=["partition"])
api_router.include_router(verification.router, prefix="/verify", tags=["verify"])

# app/api/deps.py
from app.services.reasoning_service import ReasoningService
from app.services.verification_service import VerificationService
from app.utils.dependencies import cached_service, get_service


# Service dependencies - defined as functions that will be called at runtime
# These will only be evaluated after services have been registered
def get_reasoning_service():
    return get_service(ReasoningService)


def get_verification_service():
    return get_service(VerificationService)


# Cached version
def get_cached_reasoning_service():
    return cached_service(ReasoningService)

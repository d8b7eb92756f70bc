"""
Service registry module.

This module registers the reasoning services with the dependency injection system.
"""


def register_services():
    """Register all services with the dependency injection system."""
    # Late imports: the format parsers import service modules of this package
    from app.integrations.sat import get_maxsat_client
    from app.services.ground_transform_service import GroundTransformService
    from app.services.lifted_transform_service import LiftedTransformService
    from app.services.reasoning_service import ReasoningService
    from app.services.verification_service import VerificationService
    from app.utils.dependencies import register_service

    register_service(
        GroundTransformService, lambda: GroundTransformService(get_maxsat_client())
    )
    register_service(
        LiftedTransformService, lambda: LiftedTransformService(get_maxsat_client())
    )
    register_service(ReasoningService, lambda: ReasoningService())
    register_service(VerificationService, lambda: VerificationService())

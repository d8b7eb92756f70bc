from app.integrations.sat.base import (
    BaseMaxSatClient,
    BaseSatClient,
    ClauseSet,
    CnfBuilder,
    CnfInstance,
    MaxSatResult,
    ModelEnumeration,
    OptimalModels,
    SatSession,
)
from app.integrations.sat.maxsat_client import Rc2MaxSatClient
from app.integrations.sat.pysat_client import PysatClient, PysatSession


def get_sat_client() -> PysatClient:
    """
    Provides a satisfiability backend for dependency injection.
    """
    return PysatClient()


def get_maxsat_client() -> Rc2MaxSatClient:
    """
    Provides a MaxSAT backend for dependency injection.
    """
    return Rc2MaxSatClient()

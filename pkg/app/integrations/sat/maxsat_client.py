import logging
import math
from fractions import Fraction
from typing import List, Optional, Tuple

from pysat.examples.rc2 import RC2
from pysat.formula import WCNF

from app.core.config import settings
from app.integrations.sat.base import (
    BaseMaxSatClient,
    CnfInstance,
    MaxSatResult,
    OptimalModels,
)
from app.integrations.sat.pysat_client import PysatClient
from app.models.formula import World

# Set up module logger
logger = logging.getLogger(__name__)


class Rc2MaxSatClient(BaseMaxSatClient):
    """
    Weighted partial MaxSAT through pysat's RC2 core-guided solver.

    Soft weights are exact rationals; they are scaled to integers by the
    least common multiple of their denominators and the cost scaled back.
    """

    def __init__(self, solver_name: Optional[str] = None):
        self.solver_name = solver_name or settings.SAT_SOLVER_NAME
        self.sat_client = PysatClient(self.solver_name)

    def _wcnf(self, instance: CnfInstance) -> Tuple[WCNF, int]:
        scale = math.lcm(*(weight.denominator for _, weight in instance.soft))
        wcnf = WCNF()
        for clause in instance.clauses:
            wcnf.append(clause)
        for clause, weight in instance.soft:
            wcnf.append(clause, weight=int(weight * scale))
        return wcnf, scale

    def minimize(self, instance: CnfInstance) -> Optional[MaxSatResult]:
        if instance.inconsistent:
            return None
        if not instance.soft:
            model = self.sat_client.solve(instance)
            return None if model is None else MaxSatResult(Fraction(0), model)

        wcnf, scale = self._wcnf(instance)
        with RC2(wcnf, solver=self.solver_name) as rc2:
            model = rc2.compute()
            if model is None:
                return None
            return MaxSatResult(Fraction(rc2.cost, scale), instance.decode(model))

    def enumerate_optimal(
        self, instance: CnfInstance, limit: Optional[int] = None
    ) -> Optional[OptimalModels]:
        limit = settings.ENUMERATION_LIMIT if limit is None else limit
        if instance.inconsistent:
            return None
        if not instance.soft:
            enumeration = self.sat_client.enumerate_models(instance, limit)
            if not enumeration.models:
                return None
            return OptimalModels(Fraction(0), enumeration.models, enumeration.truncated)

        wcnf, scale = self._wcnf(instance)
        models: List[World] = []
        truncated = False
        with RC2(wcnf, solver=self.solver_name) as rc2:
            model = rc2.compute()
            if model is None:
                return None
            best = rc2.cost
            while model is not None and rc2.cost == best:
                if len(models) >= limit:
                    truncated = True
                    break
                world = instance.decode(model)
                models.append(world)
                if not instance.projectable:
                    break
                rc2.add_clause(instance.blocking_clause(world))
                model = rc2.compute()

        if truncated:
            logger.warning(f"Optimal model enumeration stopped at the limit of {limit} models")
        models.sort(key=lambda w: w.values)
        return OptimalModels(Fraction(best, scale), models, truncated)

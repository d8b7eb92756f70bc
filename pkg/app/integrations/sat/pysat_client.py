import logging
from typing import Iterable, List, Optional, Sequence

from pysat.solvers import Solver

from app.core.config import settings
from app.integrations.sat.base import BaseSatClient, CnfInstance, ModelEnumeration, SatSession
from app.models.formula import World

# Set up module logger
logger = logging.getLogger(__name__)


class PysatSession(SatSession):
    def __init__(self, solver_name: str):
        self.solver = Solver(name=solver_name)

    def add_clauses(self, clauses: Iterable[Sequence[int]]) -> None:
        for clause in clauses:
            self.solver.add_clause(list(clause))

    def satisfiable(self, assumptions: Sequence[int] = ()) -> bool:
        return bool(self.solver.solve(assumptions=list(assumptions)))

    def close(self) -> None:
        self.solver.delete()


class PysatClient(BaseSatClient):
    """
    Satisfiability backend on top of a pysat CDCL solver.
    """

    def __init__(self, solver_name: Optional[str] = None):
        self.solver_name = solver_name or settings.SAT_SOLVER_NAME

    def session(self) -> PysatSession:
        return PysatSession(self.solver_name)

    def solve(self, instance: CnfInstance) -> Optional[World]:
        if instance.inconsistent:
            return None
        with Solver(name=self.solver_name, bootstrap_with=instance.clauses) as solver:
            if not solver.solve():
                return None
            return instance.decode(solver.get_model())

    def enumerate_models(
        self, instance: CnfInstance, limit: Optional[int] = None
    ) -> ModelEnumeration:
        limit = settings.ENUMERATION_LIMIT if limit is None else limit
        models: List[World] = []
        truncated = False
        if instance.inconsistent:
            return ModelEnumeration(models)

        with Solver(name=self.solver_name, bootstrap_with=instance.clauses) as solver:
            while solver.solve():
                if len(models) >= limit:
                    truncated = True
                    break
                world = instance.decode(solver.get_model())
                models.append(world)
                if not instance.projectable:
                    break
                solver.add_clause(instance.blocking_clause(world))

        if truncated:
            logger.warning(f"Model enumeration stopped at the limit of {limit} models")
        models.sort(key=lambda w: w.values)
        return ModelEnumeration(models, truncated)

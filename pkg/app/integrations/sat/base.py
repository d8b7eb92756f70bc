from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from pysat.formula import IDPool

from app.models.formula import Atom, Literal, World


@dataclass(frozen=True)
class ClauseSet:
    """
    Clausal form of a formula over literals.

    Auxiliary atoms come from the definitional encoding and are never
    projected into returned worlds.
    """

    clauses: Tuple[Tuple[Literal, ...], ...] = ()
    auxiliary: FrozenSet[Atom] = frozenset()

    @property
    def has_empty_clause(self) -> bool:
        return any(len(clause) == 0 for clause in self.clauses)

    def atoms(self) -> Tuple[Atom, ...]:
        seen: Dict[Atom, None] = {}
        for clause in self.clauses:
            for lit in clause:
                if lit.atom not in self.auxiliary:
                    seen.setdefault(lit.atom)
        return tuple(seen)

    def __len__(self) -> int:
        return len(self.clauses)


@dataclass
class CnfInstance:
    """
    Integer clause set ready for a pysat backend.

    `variables` maps every atom (projectable or auxiliary) to its variable id.
    Worlds are decoded over `projectable`, in that order; variables missing
    from a solver model are read as false.
    """

    variables: Dict[Atom, int]
    clauses: List[List[int]]
    projectable: Tuple[Atom, ...]
    soft: List[Tuple[List[int], Fraction]] = field(default_factory=list)
    inconsistent: bool = False

    def decode(self, model: Optional[Sequence[int]]) -> World:
        positive = {v for v in (model or ()) if v > 0}
        return World(
            self.projectable,
            tuple(self.variables[atom] in positive for atom in self.projectable),
        )

    def blocking_clause(self, world: World) -> List[int]:
        return [
            -self.variables[atom] if value else self.variables[atom]
            for atom, value in zip(world.atoms, world.values)
        ]


class CnfBuilder:
    """
    Incrementally collects hard clauses, selector-guarded clauses and soft
    units, allocating variable ids from a pysat IDPool.
    """

    def __init__(self, atoms: Iterable[Atom] = ()):
        self.pool = IDPool()
        self.clauses: List[List[int]] = []
        self.soft: List[Tuple[List[int], Fraction]] = []
        self._projectable: Dict[Atom, None] = {}
        self._inconsistent = False
        for atom in atoms:
            self.var(atom)

    def var(self, atom: Atom, projectable: bool = True) -> int:
        if projectable:
            self._projectable.setdefault(atom)
        return self.pool.id(atom)

    def selector(self, key: object) -> int:
        return self.pool.id(("selector", key))

    def literal(self, lit: Literal, auxiliary: FrozenSet[Atom] = frozenset()) -> int:
        var = self.var(lit.atom, projectable=lit.atom not in auxiliary)
        return var if lit.sign else -var

    def add_clause(self, clause: Sequence[int]) -> None:
        if not clause:
            self._inconsistent = True
            return
        self.clauses.append(list(clause))

    def add_clause_set(self, clause_set: ClauseSet, guard: Optional[int] = None) -> None:
        """Add clauses; with a guard g each clause C becomes (not g or C)."""
        for clause in clause_set.clauses:
            ints = [self.literal(lit, clause_set.auxiliary) for lit in clause]
            if guard is not None:
                ints = [-guard] + ints
            self.add_clause(ints)

    def add_soft(self, clause: Sequence[int], weight: Fraction) -> None:
        self.soft.append((list(clause), Fraction(weight)))

    def build(self) -> CnfInstance:
        return CnfInstance(
            variables={atom: self.pool.id(atom) for atom in self.pool.obj2id if isinstance(atom, Atom)},
            clauses=[list(c) for c in self.clauses],
            projectable=tuple(self._projectable),
            soft=list(self.soft),
            inconsistent=self._inconsistent,
        )


@dataclass
class ModelEnumeration:
    """Projected models in lexicographic order; `truncated` when the limit was hit."""

    models: List[World]
    truncated: bool = False

    def __len__(self) -> int:
        return len(self.models)


@dataclass
class MaxSatResult:
    cost: Fraction
    model: World


@dataclass
class OptimalModels:
    cost: Fraction
    models: List[World]
    truncated: bool = False


class SatSession(ABC):
    """
    Incremental solver that keeps learned clauses between calls. Clauses
    guarded by selector variables are switched on through assumptions.
    """

    @abstractmethod
    def add_clauses(self, clauses: Iterable[Sequence[int]]) -> None:
        pass

    @abstractmethod
    def satisfiable(self, assumptions: Sequence[int] = ()) -> bool:
        pass

    @abstractmethod
    def close(self) -> None:
        pass

    def __enter__(self) -> "SatSession":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


class BaseSatClient(ABC):
    """
    Abstract base class for complete satisfiability backends
    """

    @abstractmethod
    def solve(self, instance: CnfInstance) -> Optional[World]:
        """
        Decide satisfiability

        Returns:
            A model projected onto the instance's projectable atoms, or None when unsatisfiable
        """
        pass

    @abstractmethod
    def enumerate_models(
        self, instance: CnfInstance, limit: Optional[int] = None
    ) -> ModelEnumeration:
        """
        Enumerate distinct projected models with blocking clauses
        """
        pass

    @abstractmethod
    def session(self) -> SatSession:
        """
        Open an empty incremental session; callers close it
        """
        pass

    def is_satisfiable(self, instance: CnfInstance) -> bool:
        return self.solve(instance) is not None


class BaseMaxSatClient(ABC):
    """
    Abstract base class for weighted partial MaxSAT backends
    """

    @abstractmethod
    def minimize(self, instance: CnfInstance) -> Optional[MaxSatResult]:
        """
        Minimum total weight of falsified soft clauses subject to the hard ones

        Returns:
            The optimum and one optimal model, or None when the hard clauses are unsatisfiable
        """
        pass

    @abstractmethod
    def enumerate_optimal(
        self, instance: CnfInstance, limit: Optional[int] = None
    ) -> Optional[OptimalModels]:
        """
        All projected models attaining the optimum
        """
        pass

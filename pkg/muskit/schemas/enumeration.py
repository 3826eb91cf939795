import enum
from typing import Iterable, List, Optional

from pydantic import BaseModel, ConfigDict, Field, PositiveInt

from muskit.schemas.heuristics import BundleSummary


class Engine(str, enum.Enum):
    ASP_ROUTE = "asp-route"
    SEED_SHRINK = "seed-shrink"
    HYBRID = "hybrid"
    ORACLE = "oracle"


class EnumerationBudget(BaseModel):
    model_config = ConfigDict(frozen=True)

    timeout: Optional[float] = Field(default=None, gt=0)
    max_muses: Optional[PositiveInt] = None


class HybridPolicy(BaseModel):
    model_config = ConfigDict(frozen=True)

    clause_threshold: PositiveInt = 5000


def normalize_sets(sets: Iterable[Iterable[int]]) -> List[List[int]]:
    return sorted(sorted(s) for s in sets)


class EnumerationResult(BaseModel):
    muses: List[List[int]] = []
    complete: bool
    count: int
    elapsed: float = 0.0
    engine: Engine
    satisfiable: Optional[bool] = None
    bundle_summary: Optional[BundleSummary] = None

    def mus_sets(self) -> set[frozenset[int]]:
        return {frozenset(m) for m in self.muses}

    def payload(self) -> dict:
        """The published JSON result schema."""
        return {
            "engine": self.engine.value,
            "complete": self.complete,
            "count": self.count,
            "muses": self.muses,
            "elapsed_ms": round(self.elapsed * 1000, 3),
            "bundle_summary": self.bundle_summary.model_dump() if self.bundle_summary else None,
        }


class OracleReport(BaseModel):
    cores: List[List[int]]
    mcses: List[List[int]]
    muses: List[List[int]]

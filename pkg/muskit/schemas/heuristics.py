from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, model_validator


class CoverRule(BaseModel):
    model_config = ConfigDict(frozen=True)

    trigger: int
    literal: int
    candidates: Tuple[int, ...]

    @property
    def is_exclusion(self) -> bool:
        return not self.candidates


class BundleSummary(BaseModel):
    kernel_size: Optional[int] = None
    card_bounds: Optional[Tuple[int, int]] = None
    component_count: Optional[int] = None
    largest_component: Optional[int] = None
    mcs_count: Optional[int] = None
    mcs_complete: Optional[bool] = None
    cover_rule_count: Optional[int] = None
    exclusions: Optional[int] = None


class HeuristicBundle(BaseModel):
    """Artifacts behind the five search-space heuristics; `None` means not computed."""

    model_config = ConfigDict(frozen=True)

    ncl: int
    union_overapprox: Optional[frozenset[int]] = None
    card_bounds: Optional[Tuple[int, int]] = None
    components: Optional[List[frozenset[int]]] = None
    mcses: Optional[List[frozenset[int]]] = None
    mcs_complete: bool = False
    cover_rules: Optional[List[CoverRule]] = None

    @model_validator(mode="after")
    def check_bounds(self):
        if self.card_bounds is not None:
            lb, ub = self.card_bounds
            if not 0 <= lb <= ub <= self.ncl:
                raise ValueError(f"Cardinality bounds ({lb}, {ub}) violate 0 <= lb <= ub <= {self.ncl}")
        return self

    def component_of(self) -> dict[int, int]:
        return {i: k for k, comp in enumerate(self.components or []) for i in comp}

    def summary(self) -> BundleSummary:
        return BundleSummary(
            kernel_size=len(self.union_overapprox) if self.union_overapprox is not None else None,
            card_bounds=self.card_bounds,
            component_count=len(self.components) if self.components is not None else None,
            largest_component=max((len(c) for c in self.components), default=0) if self.components is not None else None,
            mcs_count=len(self.mcses) if self.mcses is not None else None,
            mcs_complete=self.mcs_complete if self.mcses is not None else None,
            cover_rule_count=len(self.cover_rules) if self.cover_rules is not None else None,
            exclusions=sum(1 for r in self.cover_rules if r.is_exclusion) if self.cover_rules is not None else None,
        )

    def only(self, flags) -> "HeuristicBundle":
        """Copy keeping just the artifacts of the heuristics enabled in `flags`."""
        return self.model_copy(update={
            "union_overapprox": self.union_overapprox if flags.h1 else None,
            "card_bounds": self.card_bounds if flags.h2 else None,
            "components": self.components if flags.h3 else None,
            "mcses": self.mcses if flags.h4 else None,
            "cover_rules": self.cover_rules if flags.h5 else None,
        })

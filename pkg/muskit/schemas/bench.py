from typing import List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt, PositiveInt, field_validator, model_validator

from muskit.schemas.encoding import HeuristicFlags
from muskit.schemas.enumeration import Engine

TIE_RULE = "mean-of-positions"
WEIGHTING = "uniform"


class BenchConfigSpec(BaseModel):
    """One named solver configuration of a benchmark run."""

    model_config = ConfigDict(frozen=True)

    name: str = Field(min_length=1)
    engine: Engine = Engine.HYBRID
    # a preset name ("h1..5") or an explicit flag set
    heuristics: Union[str, HeuristicFlags] = "none"
    threshold: Optional[PositiveInt] = None

    @field_validator("heuristics")
    @classmethod
    def known_preset(cls, value):
        if isinstance(value, str):
            HeuristicFlags.preset(value)
        return value

    @property
    def flags(self) -> HeuristicFlags:
        if isinstance(self.heuristics, str):
            return HeuristicFlags.preset(self.heuristics)
        return self.heuristics


class BenchConfigFile(BaseModel):
    configs: List[BenchConfigSpec] = Field(min_length=1)

    @model_validator(mode="after")
    def unique_names(self):
        names = [c.name for c in self.configs]
        if len(names) != len(set(names)):
            raise ValueError(f"Duplicate config names in {names}")
        return self


class RunRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    instance: str
    config: str
    mus_count: NonNegativeInt
    solved: bool
    elapsed: float = Field(ge=0)
    timeout: float = Field(gt=0)
    engine: Optional[Engine] = None
    error: str = ""

    @model_validator(mode="after")
    def solved_within_timeout(self):
        if self.solved and self.elapsed > self.timeout:
            raise ValueError(f"Solved run took {self.elapsed}s, above timeout {self.timeout}s")
        return self


class ConfigScore(BaseModel):
    config: str
    average_rank: float
    solved: int
    par2: float


class Scoreboard(BaseModel):
    instances: int
    timeout: float
    tie_rule: str = TIE_RULE
    weighting: str = WEIGHTING
    scores: List[ConfigScore]

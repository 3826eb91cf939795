from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, PositiveInt

from muskit.schemas.encoding import HeuristicFlags


class GlobalConfig(BaseModel):
    """Options shared by every subcommand, validated once per invocation."""

    model_config = ConfigDict(frozen=True)

    timeout: Optional[float] = Field(default=None, gt=0)
    # None lets the engine pick its default set
    heuristics: Optional[HeuristicFlags] = None
    threshold: PositiveInt = 5000
    output_format: Literal["human", "json"] = "human"
    seed: int = 0
    asp_cap: PositiveInt = 24
    oracle_cap: PositiveInt = 20

import enum
from typing import Iterable, List, Optional

from pydantic import BaseModel, ConfigDict

from muskit.schemas.heuristics import HeuristicBundle


class Heuristic(str, enum.Enum):
    H1 = "h1"
    H2 = "h2"
    H3 = "h3"
    H4 = "h4"
    H5 = "h5"


class HeuristicFlags(BaseModel):
    model_config = ConfigDict(frozen=True)

    h1: bool = False
    h2: bool = False
    h3: bool = False
    h4: bool = False
    h5: bool = False

    def enabled(self) -> List[Heuristic]:
        return [h for h in Heuristic if getattr(self, h.value)]

    def any(self) -> bool:
        return bool(self.enabled())

    def label(self) -> str:
        names = [h.value for h in self.enabled()]
        return "+".join(names) if names else "none"

    @classmethod
    def of(cls, heuristics: Iterable[Heuristic | str]) -> "HeuristicFlags":
        return cls(**{Heuristic(h).value: True for h in heuristics})

    @classmethod
    def all(cls) -> "HeuristicFlags":
        return cls.of(Heuristic)

    @classmethod
    def preset(cls, name: str) -> "HeuristicFlags":
        """Cumulative presets: none, h1..2, h1..3, h1..5."""
        try:
            upto = PRESETS[name]
        except KeyError:
            raise ValueError(f"Unknown heuristic preset '{name}' (known: {', '.join(PRESETS)})")
        return cls.of(list(Heuristic)[:upto])

    @classmethod
    def subsets(cls) -> List["HeuristicFlags"]:
        members = list(Heuristic)
        return [
            cls.of(h for bit, h in enumerate(members) if mask >> bit & 1)
            for mask in range(1 << len(members))
        ]


PRESETS = {"none": 0, "h1..2": 2, "h1..3": 3, "h1..5": 5}


class EncodingOptions(BaseModel):
    model_config = ConfigDict(frozen=True)

    heuristics_enabled: HeuristicFlags = HeuristicFlags()
    bundle: Optional[HeuristicBundle] = None
    emit_show_directive: bool = True
    emit_domain_heuristic: bool = True

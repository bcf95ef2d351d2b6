from __future__ import annotations

from dataclasses import dataclass, field

from ..circuit import Circuit
from .layout import Layout

ROUTERS = ("basic", "sabre")
OPT_LEVELS = (0, 1, 2, 3)
LAYOUT_STRATEGIES = ("auto", "trivial", "sabre")


@dataclass(frozen=True)
class SabreParams:
    ext_size: int = 20
    ext_weight: float = 0.5
    decay_delta: float = 0.001
    decay_reset: int = 5

    def as_kwargs(self) -> dict:
        return {"ext_size": self.ext_size, "ext_weight": self.ext_weight,
                "decay_delta": self.decay_delta, "decay_reset": self.decay_reset}


@dataclass(frozen=True)
class TranspileConfig:
    router: str = "sabre"
    opt_level: int = 1
    seed: int = 0
    sabre: SabreParams = field(default_factory=SabreParams)
    # auto: trivial placement at level 0, SABRE-refined above
    layout: str = "auto"

    def __post_init__(self):
        if self.router not in ROUTERS:
            raise ValueError(f"unknown router {self.router!r}; choose from {', '.join(ROUTERS)}")
        if self.opt_level not in OPT_LEVELS:
            raise ValueError(f"opt_level must be one of {OPT_LEVELS}, got {self.opt_level}")
        if self.layout not in LAYOUT_STRATEGIES:
            raise ValueError(f"unknown layout strategy {self.layout!r}")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")

    @property
    def layout_strategy(self) -> str:
        if self.layout != "auto":
            return self.layout
        return "trivial" if self.opt_level == 0 else "sabre"


@dataclass(frozen=True)
class TranspileOutcome:
    circuit: Circuit
    initial_layout: Layout
    final_layout: Layout
    t_trans: float
    config: TranspileConfig
    num_swaps: int = 0

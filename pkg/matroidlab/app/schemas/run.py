from __future__ import annotations

from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt


class RunConfig(BaseModel):
    """Effective configuration of one CLI invocation (settings + flags)."""

    subcommand: str
    inputs: List[str] = Field(default_factory=list)
    output: Optional[str] = None
    solver: Optional[str] = None
    seed: int = Field(ge=0, lt=2**64)
    workers: PositiveInt = 1
    time_limit_s: PositiveFloat = 60.0
    caps: Dict[str, PositiveInt] = Field(default_factory=dict)

    model_config = ConfigDict(extra="forbid")

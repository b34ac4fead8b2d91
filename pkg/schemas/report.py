from typing import Any, List, Tuple

from pydantic import BaseModel, ConfigDict, Field


class Report(BaseModel):
    """Tabular command output with a fixed column order."""

    model_config = ConfigDict(frozen=True)

    title: str
    columns: Tuple[str, ...]
    rows: List[Tuple[Any, ...]] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)


class CommandResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    report: Report
    exit_code: int = 0

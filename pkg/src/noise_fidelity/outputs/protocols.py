"""Protocols and value types for output writers."""

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any, Literal, Protocol


@dataclass(frozen=True)
class PlotSpec:
    """How to render a table as a quick-look plot."""

    x: str
    y: tuple[str, ...]
    xlabel: str = ""
    ylabel: str = ""
    title: str = ""
    style: Literal["line", "step", "points"] = "line"
    logx: bool = False
    logy: bool = False


@dataclass(frozen=True)
class Table:
    """A named table of rows with a fixed column order."""

    name: str
    columns: tuple[str, ...]
    rows: Sequence[Mapping[str, Any]]
    meta: Mapping[str, Any] = field(default_factory=dict)
    plot: PlotSpec | None = None


class OutputWriter(Protocol):
    """Protocol for output writers."""

    def write_table(self, table: Table) -> None:
        """Write a table to the output."""
        ...

    def flush(self) -> None:
        """Flush any buffered data."""
        ...

    def close(self) -> None:
        """Close the writer and clean up resources."""
        ...

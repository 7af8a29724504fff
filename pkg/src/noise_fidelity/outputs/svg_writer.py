"""Quick-look SVG rendering of result tables."""

import logging
import math
from pathlib import Path
from typing import Any

from .protocols import Table

logger = logging.getLogger(__name__)

HASH_SALT = "noise-fidelity"


def _column(table: Table, name: str) -> list[float]:
    values: list[float] = []
    for row in table.rows:
        value = row.get(name)
        values.append(math.nan if value is None else float(value))
    return values


class SVGWriter:
    """Renders tables that carry a PlotSpec to ``<output_dir>/<name>.svg``.

    matplotlib is imported on first use with the Agg backend. The hash salt is
    fixed and the date metadata omitted, so identical tables give identical files.
    """

    def __init__(self, output_dir: Path, pyplot: Any | None = None) -> None:
        """Initialize SVG writer.

        Args:
            output_dir: Directory receiving the SVG files.
            pyplot: Optional pyplot module for testing.
        """
        self._output_dir = Path(output_dir)
        self._output_dir.mkdir(parents=True, exist_ok=True)
        self._pyplot = pyplot

    @property
    def pyplot(self) -> Any:
        """Lazy-initialize matplotlib."""
        if self._pyplot is None:
            import matplotlib  # pylint: disable=import-outside-toplevel

            matplotlib.use("Agg")
            matplotlib.rcParams["svg.hashsalt"] = HASH_SALT
            from matplotlib import pyplot  # pylint: disable=import-outside-toplevel

            self._pyplot = pyplot
        return self._pyplot

    def write_table(self, table: Table) -> None:
        """Render a table if it has a plot specification."""
        spec = table.plot
        if spec is None or not table.rows:
            return
        plt = self.pyplot
        fig, ax = plt.subplots(figsize=(6, 4))
        x = _column(table, spec.x)
        for name in spec.y:
            y = _column(table, name)
            if spec.style == "step":
                ax.step(x, y, where="mid", label=name)
            elif spec.style == "points":
                ax.plot(x, y, "o", markersize=3, label=name)
            else:
                ax.plot(x, y, label=name)
        if spec.logx:
            ax.set_xscale("log")
        if spec.logy:
            ax.set_yscale("log")
        ax.set_xlabel(spec.xlabel or spec.x)
        ax.set_ylabel(spec.ylabel)
        if spec.title:
            ax.set_title(spec.title)
        if len(spec.y) > 1:
            ax.legend()
        fig.tight_layout()
        path = self._output_dir / f"{table.name}.svg"
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
        logger.info("Rendered %s", path)

    def flush(self) -> None:
        """Figures are written whole; nothing is buffered."""

    def close(self) -> None:
        """Nothing to release."""

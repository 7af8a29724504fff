"""CSV writer for result tables."""

import csv
import logging
import math
from pathlib import Path
from typing import Any

import numpy as np

from .protocols import Table

logger = logging.getLogger(__name__)


def format_value(value: Any) -> str:
    """Render a cell so files are byte-stable: floats via repr, missing as empty."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        number = float(value)
        return "" if math.isnan(number) else repr(number)
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


class CSVWriter:
    """Writes each table to ``<output_dir>/<name>.csv``."""

    def __init__(self, output_dir: Path) -> None:
        """Initialize CSV writer.

        Args:
            output_dir: Directory receiving the CSV files.
        """
        self._output_dir = Path(output_dir)
        self._output_dir.mkdir(parents=True, exist_ok=True)
        self._written: list[Path] = []

    @property
    def written(self) -> list[Path]:
        """Paths of the files written so far."""
        return list(self._written)

    def write_table(self, table: Table) -> None:
        """Write a table, replacing any previous file of the same name.

        Args:
            table: Table to write.
        """
        path = self._output_dir / f"{table.name}.csv"
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.DictWriter(
                f, fieldnames=list(table.columns), extrasaction="ignore", lineterminator="\n"
            )
            writer.writeheader()
            for row in table.rows:
                writer.writerow({c: format_value(row.get(c)) for c in table.columns})
        self._written.append(path)
        logger.info("Wrote %d rows to %s", len(table.rows), path)

    def flush(self) -> None:
        """Tables are written whole; nothing is buffered."""

    def close(self) -> None:
        """Nothing to release."""

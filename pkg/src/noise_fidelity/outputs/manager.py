"""Output manager that routes tables to writers and records provenance."""

import json
import logging
import math
from collections.abc import Mapping, Sequence
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np

from .csv_writer import CSVWriter
from .protocols import OutputWriter, Table
from .svg_writer import SVGWriter

logger = logging.getLogger(__name__)


def to_jsonable(value: Any) -> Any:
    """Convert numpy values, enums, paths and non-finite floats for JSON output."""
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        number = float(value)
        return number if math.isfinite(number) else None
    return value


def dump_json(payload: Any) -> str:
    return json.dumps(to_jsonable(payload), indent=2, sort_keys=True) + "\n"


class OutputManager:
    """Manages the writers of one run directory.

    Every table goes to all writers and gets a ``<name>.json`` sidecar holding
    the run provenance (config hash, seed, experiment) and the table metadata.
    """

    def __init__(
        self,
        run_dir: Path,
        provenance: Mapping[str, Any],
        plots: bool = False,
        writers: Sequence[OutputWriter] | None = None,
    ) -> None:
        """Initialize output manager.

        Args:
            run_dir: Directory of this run.
            provenance: Config hash, seed and experiment kind copied into sidecars.
            plots: Also render quick-look SVGs.
            writers: Optional list of writers for testing (overrides defaults).
        """
        self._run_dir = Path(run_dir)
        self._run_dir.mkdir(parents=True, exist_ok=True)
        self._provenance = dict(provenance)
        self._tables: list[str] = []

        if writers is not None:
            self._writers = list(writers)
        else:
            self._writers = [CSVWriter(self._run_dir)]
            if plots:
                self._writers.append(SVGWriter(self._run_dir))
                logger.info("SVG output enabled")
        logger.info("Writing results to %s", self._run_dir)

    @property
    def run_dir(self) -> Path:
        return self._run_dir

    @property
    def writers(self) -> list[OutputWriter]:
        """Get list of active writers."""
        return self._writers

    @property
    def tables(self) -> list[str]:
        """Names of the tables written so far."""
        return list(self._tables)

    def subdir(self, name: str) -> Path:
        """Create and return a subdirectory of the run directory."""
        path = self._run_dir / name
        path.mkdir(parents=True, exist_ok=True)
        return path

    def write_json(self, name: str, payload: Any) -> Path:
        """Write ``<name>.json`` with sorted keys."""
        path = self._run_dir / f"{name}.json"
        path.write_text(dump_json(payload), encoding="utf-8")
        return path

    def write_config(self, resolved: Mapping[str, Any]) -> Path:
        """Write config.json with the resolved configuration and provenance."""
        return self.write_json("config", {**self._provenance, "config": resolved})

    def write_table(self, table: Table) -> None:
        """Write a table to all writers plus its JSON sidecar.

        Args:
            table: Table to write.
        """
        for writer in self._writers:
            writer.write_table(table)
        self.write_json(
            table.name,
            {
                **self._provenance,
                "table": table.name,
                "columns": list(table.columns),
                "n_rows": len(table.rows),
                "meta": dict(table.meta),
            },
        )
        self._tables.append(table.name)

    def flush(self) -> None:
        """Flush all output buffers."""
        for writer in self._writers:
            writer.flush()

    def close(self) -> None:
        """Close all writers."""
        for writer in self._writers:
            writer.close()

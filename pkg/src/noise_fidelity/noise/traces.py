"""Trace file format shared by simulation and experiment replay.

A trace file is CSV text. The first line is ``# `` followed by a JSON header::

    {"format": "noise-fidelity-trace/1", "dt": ..., "kind": "wn", "seed": ...,
     "realization": 7, "params": {...NoiseParams...}}

followed by a ``index,dX,dQV`` header row and one row per step. Floats are
written with ``repr`` so a write/read cycle is exact.
"""

import csv
import json
import logging
from pathlib import Path
from typing import Any

import numpy as np

from ..errors import InvalidArgumentError
from ..schemas import NoiseKind, NoiseParams
from .generation import NoiseTrace

logger = logging.getLogger(__name__)

TRACE_FORMAT = "noise-fidelity-trace/1"
TRACE_COLUMNS = ["index", "dX", "dQV"]


def trace_filename(realization: int) -> str:
    return f"trace-{realization:06d}.csv"


def write_trace(trace: NoiseTrace, path: Path, realization: int | None = None) -> None:
    """Write a trace to ``path`` in the documented CSV format."""
    header: dict[str, Any] = {
        "format": TRACE_FORMAT,
        "dt": trace.dt,
        "kind": trace.kind.value,
        "seed": trace.seed,
        "realization": realization,
        "params": trace.params.model_dump(mode="json") if trace.params else None,
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        f.write("# " + json.dumps(header, sort_keys=True) + "\n")
        writer = csv.DictWriter(f, fieldnames=TRACE_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for k, (dx, dqv) in enumerate(zip(trace.dx, trace.dqv, strict=True)):
            writer.writerow({"index": k, "dX": repr(float(dx)), "dQV": repr(float(dqv))})


def _read(path: Path) -> tuple[dict[str, Any], NoiseTrace]:
    with open(path, newline="", encoding="utf-8") as f:
        first = f.readline()
        if not first.startswith("# "):
            raise InvalidArgumentError(f"{path} has no trace header")
        header: dict[str, Any] = json.loads(first[2:])
        if header.get("format") != TRACE_FORMAT:
            raise InvalidArgumentError(f"{path} is not a {TRACE_FORMAT} file")
        dx: list[float] = []
        dqv: list[float] = []
        for k, row in enumerate(csv.DictReader(f)):
            if int(row["index"]) != k:
                raise InvalidArgumentError(f"{path}: row {k} has index {row['index']}")
            dx.append(float(row["dX"]))
            dqv.append(float(row["dQV"]))
    params = NoiseParams(**header["params"]) if header.get("params") else None
    trace = NoiseTrace(
        dt=float(header["dt"]),
        dx=np.asarray(dx),
        dqv=np.asarray(dqv),
        kind=NoiseKind(header["kind"]),
        seed=int(header["seed"]),
        params=params,
    )
    return header, trace


def read_trace(path: Path) -> NoiseTrace:
    """Read a trace written by :func:`write_trace`."""
    return _read(path)[1]


def load_trace_dir(directory: Path) -> dict[int, NoiseTrace]:
    """Load every trace file in a directory keyed by realization ID."""
    traces: dict[int, NoiseTrace] = {}
    for path in sorted(directory.glob("trace-*.csv")):
        header, trace = _read(path)
        realization = header.get("realization")
        if realization is None:
            raise InvalidArgumentError(f"{path} has no realization ID")
        traces[int(realization)] = trace
    logger.info("Loaded %d traces from %s", len(traces), directory)
    return traces

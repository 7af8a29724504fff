"""Output writers for result tables."""

from .csv_writer import CSVWriter
from .manager import OutputManager, dump_json, to_jsonable
from .protocols import OutputWriter, PlotSpec, Table
from .svg_writer import SVGWriter

__all__ = [
    "CSVWriter",
    "OutputManager",
    "OutputWriter",
    "PlotSpec",
    "SVGWriter",
    "Table",
    "dump_json",
    "to_jsonable",
]

"""
Deterministic renderers shared by the subcommands.

CSV uses an explicit header, '.' decimals and 17 significant digits; JSON is
pydantic's serialization, which re-parses to the same bytes.
"""
import csv
from typing import Iterable, Optional, TextIO

from pydantic import BaseModel

from pspin.schemas.phase import PhasePoint

PHASE_HEADER = ["p", "beta", "phase", "m", "q", "max_f_violation", "parisi_value"]


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.17g}"
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def write_json(model: BaseModel, out: TextIO) -> None:
    out.write(model.model_dump_json())
    out.write("\n")


def write_json_lines(models: Iterable[BaseModel], out: TextIO) -> None:
    for model in models:
        write_json(model, out)


def write_text(model: BaseModel, out: TextIO, fields: Optional[list[str]] = None) -> None:
    """Aligned 'name  value' lines."""
    fields = fields or list(type(model).model_fields)
    width = max(len(name) for name in fields)
    for name in fields:
        out.write(f"{name.ljust(width)}  {format_value(getattr(model, name))}\n")


def write_phase_csv(points: Iterable[PhasePoint], out: TextIO) -> int:
    """Write PhasePoint rows under the fixed header; returns the number of rows."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(PHASE_HEADER)
    count = 0
    for point in points:
        writer.writerow([format_value(getattr(point, name)) for name in PHASE_HEADER])
        count += 1
    return count


def write_phase_table(points: Iterable[PhasePoint], out: TextIO) -> None:
    rows = [PHASE_HEADER] + [
        [format_value(getattr(point, name)) for name in PHASE_HEADER] for point in points
    ]
    widths = [max(len(row[i]) for row in rows) for i in range(len(PHASE_HEADER))]
    for row in rows:
        out.write("  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() + "\n")


def write_model_csv(model: BaseModel, out: TextIO) -> None:
    """One header row of field names and one row of values."""
    fields = list(type(model).model_fields)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(fields)
    writer.writerow([format_value(getattr(model, name)) for name in fields])

"""Result-table writers."""

from __future__ import annotations

from cvarkit.config import OutputFormat
from cvarkit.writers.base import BaseWriter
from cvarkit.writers.csv_writer import CsvWriter
from cvarkit.writers.json_writer import JsonWriter, dumps, to_records


def get_writer(output_format: OutputFormat, single: bool = False) -> BaseWriter:
    """Get the writer for the output format."""
    if OutputFormat(output_format) is OutputFormat.JSON:
        return JsonWriter(single=single)
    return CsvWriter()


__all__ = ["BaseWriter", "CsvWriter", "JsonWriter", "dumps", "get_writer", "to_records"]

"""CSV writer."""

from __future__ import annotations

import logging
from pathlib import Path

import pandas as pd

from cvarkit.writers.base import BaseWriter

logger = logging.getLogger(__name__)


class CsvWriter(BaseWriter):
    """Comma-separated table, header row first, ``\\n`` line endings.

    Floats use pandas' shortest round-trip formatting, so equal tables
    give byte-identical files.
    """

    def write(self, frame: pd.DataFrame, output_path: Path, name: str) -> Path:
        target = self.output_file(output_path, name)
        frame.to_csv(target, index=False, lineterminator="\n")
        logger.info("Wrote %d rows to %s", len(frame), target)
        return target

    def file_extension(self) -> str:
        return "csv"

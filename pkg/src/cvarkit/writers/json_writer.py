"""JSON writer."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from cvarkit.writers.base import BaseWriter

logger = logging.getLogger(__name__)


def _native(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"Cannot serialize {type(value).__name__}")


def dumps(data: Any) -> str:
    """Serialize with ``repr``-exact floats, keys in insertion order."""
    return json.dumps(data, indent=2, default=_native)


def to_records(frame: pd.DataFrame, single: bool = False) -> Any:
    """Row records with missing cells as ``None``; one object when ``single`` and one row."""
    records = frame.astype(object).where(frame.notna(), None).to_dict(orient="records")
    return records[0] if single and len(records) == 1 else records


class JsonWriter(BaseWriter):
    """List of row records; a single-row table is written as one object when ``single``."""

    def __init__(self, single: bool = False) -> None:
        self.single = single

    def write(self, frame: pd.DataFrame, output_path: Path, name: str) -> Path:
        target = self.output_file(output_path, name)
        target.write_text(dumps(to_records(frame, self.single)) + "\n", encoding="utf-8")
        logger.info("Wrote %d records to %s", len(frame), target)
        return target

    def file_extension(self) -> str:
        return "json"

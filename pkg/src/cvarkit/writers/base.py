"""Abstract base class for result-table writers."""

from __future__ import annotations

from abc import ABC, abstractmethod
from pathlib import Path

import pandas as pd


class BaseWriter(ABC):
    """Abstract writer interface for all result formats."""

    @abstractmethod
    def write(self, frame: pd.DataFrame, output_path: Path, name: str) -> Path:
        """Write a result table to an output file.

        Args:
            frame: The result table.
            output_path: Directory or file path for the output.
            name: File stem used when output_path is a directory.

        Returns:
            Path to the written file.
        """

    @abstractmethod
    def file_extension(self) -> str:
        """Return the file extension for this writer's output."""

    def output_file(self, output_path: Path, name: str) -> Path:
        """Compute the full output file path.

        If output_path is a directory, the file is named after ``name``.
        """
        output_path = Path(output_path)
        if output_path.is_dir() or not output_path.suffix:
            output_path.mkdir(parents=True, exist_ok=True)
            return output_path / f"{name}.{self.file_extension()}"
        output_path.parent.mkdir(parents=True, exist_ok=True)
        return output_path

"""Tests for the CSV and JSON result writers."""

import json

import numpy as np
import pandas as pd
import pytest

from cvarkit.config import OutputFormat
from cvarkit.writers import CsvWriter, JsonWriter, dumps, get_writer, to_records


@pytest.fixture
def frame() -> pd.DataFrame:
    return pd.DataFrame({"required_return": [0.006, 0.02], "sigma": [0.0123, None]})


class TestCsvWriter:
    def setup_method(self):
        self.writer = CsvWriter()

    def test_directory_output(self, tmp_path, frame):
        path = self.writer.write(frame, tmp_path / "results", "frontier")
        assert path == tmp_path / "results" / "frontier.csv"
        lines = path.read_text(encoding="utf-8").split("\n")
        assert lines[0] == "required_return,sigma"
        assert lines[1] == "0.006,0.0123"
        assert lines[2] == "0.02,"

    def test_file_output_creates_parent(self, tmp_path, frame):
        path = self.writer.write(frame, tmp_path / "nested" / "out.csv", "ignored")
        assert path == tmp_path / "nested" / "out.csv"
        assert path.exists()

    def test_identical_tables_identical_bytes(self, tmp_path, frame):
        a = self.writer.write(frame, tmp_path / "a.csv", "x")
        b = self.writer.write(frame.copy(), tmp_path / "b.csv", "x")
        assert a.read_bytes() == b.read_bytes()


class TestJsonWriter:
    def test_records(self, tmp_path, frame):
        path = JsonWriter().write(frame, tmp_path, "frontier")
        data = json.loads(path.read_text(encoding="utf-8"))
        assert data == [
            {"required_return": 0.006, "sigma": 0.0123},
            {"required_return": 0.02, "sigma": None},
        ]

    def test_single_row_object(self, tmp_path):
        path = JsonWriter(single=True).write(pd.DataFrame([{"var": 800.0, "cvar": 860.0}]), tmp_path, "risk")
        assert json.loads(path.read_text(encoding="utf-8")) == {"var": 800.0, "cvar": 860.0}

    def test_single_with_many_rows_stays_list(self, frame):
        assert isinstance(to_records(frame, single=True), list)

    def test_numpy_values(self):
        assert json.loads(dumps({"n": np.int64(3), "v": np.array([0.1, 0.2])})) == {"n": 3, "v": [0.1, 0.2]}

    def test_floats_round_trip_exactly(self):
        value = 0.1 + 0.2
        assert json.loads(dumps([value]))[0] == value


class TestGetWriter:
    def test_formats(self):
        assert isinstance(get_writer(OutputFormat.CSV), CsvWriter)
        assert isinstance(get_writer(OutputFormat.JSON), JsonWriter)
        assert get_writer("json", single=True).single
        assert get_writer(OutputFormat.CSV).file_extension() == "csv"

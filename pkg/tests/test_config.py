"""Tests for environment configuration and seeded random streams."""

from pathlib import Path

import numpy as np
import pytest
from pydantic import ValidationError

from cvarkit.config import DEFAULT_SEED, Config, LpMethod, OutputFormat, SolverConfig
from cvarkit.rng import Stream, stream


class TestConfig:
    def test_defaults_without_environment(self, monkeypatch):
        for var in ("CVARKIT_SEED", "CVARKIT_THREADS", "CVARKIT_OUTPUT_DIR", "CVARKIT_FORMAT", "CVARKIT_LP_METHOD"):
            monkeypatch.delenv(var, raising=False)
        config = Config.from_env()
        assert config.seed == DEFAULT_SEED
        assert config.threads >= 1
        assert config.output_dir == Path("./output")
        assert config.output_format is OutputFormat.CSV
        assert config.solver.method is LpMethod.AUTO

    def test_environment_overrides(self, monkeypatch):
        monkeypatch.setenv("CVARKIT_SEED", "7")
        monkeypatch.setenv("CVARKIT_THREADS", "3")
        monkeypatch.setenv("CVARKIT_FORMAT", "json")
        monkeypatch.setenv("CVARKIT_LP_METHOD", "primal")
        monkeypatch.setenv("CVARKIT_LP_MAX_ITER", "1000")
        config = Config.from_env()
        assert config.seed == 7
        assert config.threads == 3
        assert config.output_format is OutputFormat.JSON
        assert config.solver.method is LpMethod.PRIMAL
        assert config.solver.max_iterations == 1000

    def test_bad_format_rejected(self, monkeypatch):
        monkeypatch.setenv("CVARKIT_FORMAT", "xml")
        with pytest.raises(ValueError):
            Config.from_env()

    def test_run_config_prefers_flags(self):
        config = Config(seed=11, threads=2)
        run = config.run_config(seed=5, output=Path("out.csv"), threads=4)
        assert run.seed == 5
        assert run.threads == 4
        assert run.output == Path("output") / "out.csv"
        assert run.output_format is OutputFormat.CSV

    def test_output_paths_with_directories_kept(self, tmp_path):
        config = Config(output_dir=Path("results"))
        assert config.run_config(output=tmp_path / "a.csv").output == tmp_path / "a.csv"
        assert config.run_config(output=Path("sub/a.csv")).output == Path("sub/a.csv")
        assert config.run_config(output=Path("a.csv")).output == Path("results/a.csv")
        assert config.run_config(output=Path("out")).output == Path("out")

    def test_run_config_falls_back(self):
        config = Config(seed=11, threads=2, output_format=OutputFormat.JSON)
        run = config.run_config()
        assert run.seed == 11
        assert run.threads == 2
        assert run.output_format is OutputFormat.JSON

    def test_negative_seed_rejected(self):
        with pytest.raises(ValidationError):
            Config(seed=-1)


class TestSolverConfig:
    def test_tolerances(self):
        cfg = SolverConfig()
        assert cfg.pivot_tol == 1e-9
        assert cfg.feasibility_tol == 1e-8
        assert cfg.refactor_every == 50
        assert cfg.degenerate_run == 50
        assert cfg.qp_max_iterations == 500


class TestStreams:
    def test_same_key_same_draws(self):
        a = stream(42, Stream.PHI, 10, 3).standard_normal(5)
        b = stream(42, Stream.PHI, 10, 3).standard_normal(5)
        np.testing.assert_array_equal(a, b)

    def test_streams_are_independent(self):
        a = stream(42, Stream.PHI, 10, 3).standard_normal(5)
        b = stream(42, Stream.SIGNAL, 10, 3).standard_normal(5)
        c = stream(42, Stream.PHI, 10, 4).standard_normal(5)
        assert not np.allclose(a, b)
        assert not np.allclose(a, c)

    def test_seed_changes_draws(self):
        a = stream(1, Stream.SCENARIOS).standard_normal(5)
        b = stream(2, Stream.SCENARIOS).standard_normal(5)
        assert not np.allclose(a, b)

    def test_negative_seed(self):
        with pytest.raises(ValueError):
            stream(-3, Stream.PRICES)

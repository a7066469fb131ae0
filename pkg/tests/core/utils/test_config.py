import tempfile
from pathlib import Path
from unittest import TestCase

import pytest

from arbor.core.model.errors import ErrorCode, WorkbenchError
from arbor.core.utils.config import RunConfig, default_workers, load_config, save_config
from arbor.core.utils.constants import WORKERS_ENV_VAR, ReportFormat


class TestLoadConfig(TestCase):
    """
    A class to test the functionality of the load_config function with different scenarios.

    Attributes:
        config_path (Path): The path to the test config file.
        config_data (dict): The expected configuration data.

    Methods:
        setUp() -> None:
            Set up the necessary attributes for testing.

        tearDown() -> None:
            Clean up the test environment after testing.

        test_load_config_with_valid_yaml() -> None:
            Test the load_config function with a valid YAML file.

        test_load_config_with_invalid_yaml() -> None:
            Test that a file that is not YAML is a PARSE_ERROR.

        test_load_config_with_scalar_yaml() -> None:
            Test that YAML holding anything but a mapping is a PARSE_ERROR.

        test_load_config_with_nonexistent_file() -> None:
            Test that a missing file raises FileNotFoundError.

        test_save_then_load() -> None:
            Test that a saved configuration loads back unchanged.
    """

    def setUp(self) -> None:
        self.test_dir = tempfile.TemporaryDirectory()
        self.config_path = Path(self.test_dir.name) / "test_config.yaml"
        self.config_data = {"seed": 7, "horizon": 12}

    def tearDown(self) -> None:
        self.test_dir.cleanup()

    def test_load_config_with_valid_yaml(self) -> None:
        with self.config_path.open("w", encoding="utf-8") as f:
            f.write("seed: 7\nhorizon: 12\n")

        config_data = load_config(self.config_path)
        self.assertEqual(config_data, self.config_data)

    def test_load_config_with_invalid_yaml(self) -> None:
        with self.config_path.open("w", encoding="utf-8") as f:
            f.write("key: value\ninvalid")

        with self.assertRaises(WorkbenchError) as context:
            load_config(self.config_path)
        self.assertEqual(context.exception.code, ErrorCode.PARSE_ERROR)

    def test_load_config_with_scalar_yaml(self) -> None:
        with self.config_path.open("w", encoding="utf-8") as f:
            f.write("just a string")

        with self.assertRaises(WorkbenchError) as context:
            load_config(self.config_path)
        self.assertEqual(context.exception.code, ErrorCode.PARSE_ERROR)

    def test_load_config_with_nonexistent_file(self) -> None:
        nonexistent_path = Path(self.test_dir.name) / "nonexistent_config.yaml"
        with self.assertRaises(FileNotFoundError):
            load_config(nonexistent_path)

    def test_save_then_load(self) -> None:
        save_config(self.config_path, self.config_data)
        self.assertEqual(load_config(self.config_path), self.config_data)


def test_run_config_defaults() -> None:
    """
    Test the default run configuration.
    """
    config = RunConfig()
    assert config.seed == 0
    assert config.format is ReportFormat.json
    assert config.schedule == "default"
    assert config.to_dict()["out"] == "."


def test_run_config_overrides(tmp_path: Path) -> None:
    """
    Test that flags override the file and unset flags fall through to it.

    Args:
        tmp_path: Temporary directory.
    """
    path = tmp_path / "arbor.yml"
    save_config(path, {"seed": 3, "trials": 500, "format": "csv"})
    config = RunConfig.load(path, seed=9, trials=None)
    assert config.seed == 9
    assert config.trials == 500
    assert config.format is ReportFormat.csv


@pytest.mark.parametrize(
    "overrides",
    [
        {"seed": -1},
        {"horizon": 0},
        {"trials": 0},
        {"schedule": "greedy"},
    ],
)
def test_run_config_rejects_bad_values(overrides: dict) -> None:
    """
    Test that invalid settings are BAD_PARAMS.

    Args:
        overrides: The invalid settings.
    """
    with pytest.raises(WorkbenchError) as excinfo:
        RunConfig.load(None, **overrides)
    assert excinfo.value.code == ErrorCode.BAD_PARAMS


def test_run_config_rejects_unknown_keys(tmp_path: Path) -> None:
    """
    Test that a file with unknown keys is refused.

    Args:
        tmp_path: Temporary directory.
    """
    path = tmp_path / "arbor.yml"
    save_config(path, {"seeds": 3})
    with pytest.raises(WorkbenchError) as excinfo:
        RunConfig.load(path)
    assert excinfo.value.code == ErrorCode.BAD_PARAMS


def test_check_bench() -> None:
    """
    Test the minimum number of bench trials.
    """
    RunConfig(trials=100).check_bench()
    with pytest.raises(WorkbenchError):
        RunConfig(trials=99).check_bench()


def test_workers_from_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    """
    Test the worker count taken from the environment.

    Args:
        monkeypatch: Pytest monkeypatch fixture.
    """
    monkeypatch.setenv(WORKERS_ENV_VAR, "3")
    assert default_workers() == 3
    assert RunConfig().pool_size() == 3
    assert RunConfig(workers=5).pool_size() == 5

    monkeypatch.setenv(WORKERS_ENV_VAR, "many")
    with pytest.raises(WorkbenchError) as excinfo:
        default_workers()
    assert excinfo.value.code == ErrorCode.BAD_PARAMS

    monkeypatch.delenv(WORKERS_ENV_VAR)
    assert default_workers() >= 1

"""
Arbor Configuration Utilities.

YAML configuration files and the run configuration collected from them and from the global CLI flags. A key given on
the command line overrides the same key in the file, which overrides the default.

Imports:
    - os: The worker-count environment variable.
    - yaml: YAML parsing and dumping.
    - typing_extensions.Self: Return type of the alternate constructor.

Classes:
    - RunConfig: Settings shared by the workbench commands.

Functions:
    - load_config: Load a YAML config file and return its contents as a dictionary.
    - save_config: Save a dictionary as a YAML config file.
"""

import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any

import yaml
from typing_extensions import Self

from arbor.core.model.errors import ErrorCode, WorkbenchError
from arbor.core.utils.constants import MIN_BENCH_TRIALS, WORKERS_ENV_VAR, ReportFormat


def load_config(config_path: str | Path) -> dict[str, Any]:
    """
    Load a YAML config file.

    Args:
        config_path: The path to the config file.

    Returns:
        The config data as a dictionary.

    Raises:
        FileNotFoundError: If the config file does not exist.
        WorkbenchError: PARSE_ERROR if the file is not a YAML mapping.
    """
    config_path = Path(config_path)

    with Path.open(config_path, encoding="utf-8") as file:
        try:
            data = yaml.safe_load(file)
        except yaml.YAMLError as e:
            raise WorkbenchError(ErrorCode.PARSE_ERROR, f"{config_path} is not valid YAML: {e}") from e

        if not isinstance(data, dict):
            raise WorkbenchError(ErrorCode.PARSE_ERROR, f"{config_path} must hold a mapping")

    return data


def save_config(config_path: str | Path, config_data: dict[Any, Any]) -> None:
    """
    Save a YAML config file.

    Args:
        config_path: The path to the config file.
        config_data: The config data as a dictionary.
    """
    config_path = Path(config_path)

    with config_path.open("w", encoding="utf-8") as f:
        yaml.safe_dump(config_data, f, sort_keys=True)


def default_workers() -> int:
    """
    The bench pool size: `WORKBENCH_WORKERS` when set, else the number of logical processors.

    Raises:
        WorkbenchError: BAD_PARAMS if the variable is not a positive integer.
    """
    value = os.environ.get(WORKERS_ENV_VAR)
    if value is None:
        return os.cpu_count() or 1
    try:
        workers = int(value)
    except ValueError as e:
        raise WorkbenchError(ErrorCode.BAD_PARAMS, f"{WORKERS_ENV_VAR}={value!r} is not an integer") from e
    if workers < 1:
        raise WorkbenchError(ErrorCode.BAD_PARAMS, f"{WORKERS_ENV_VAR} must be positive, got {workers}")
    return workers


@dataclass
class RunConfig:
    """
    Settings shared by the workbench commands.

    Attributes:
        seed: Base seed; trial `i` of a bench uses `seed + i`.
        horizon: Horizon of generated instances.
        trials: Number of bench trials.
        rounds: Rounds of the antichain solvers.
        schedule: Size schedule of the antichain solvers, `default` or `shifted`.
        schedule_n: The shift `n` of the shifted schedule.
        out: Output directory.
        format: Report format.
        workers: Bench pool size.
    """

    seed: int = 0
    horizon: int = 8
    trials: int = 2000
    rounds: int = 6
    schedule: str = "default"
    schedule_n: int = 1
    out: Path = Path()
    format: ReportFormat = ReportFormat.json
    workers: int | None = None

    def __post_init__(self) -> None:
        self.out = Path(self.out)
        self.format = ReportFormat(self.format)
        if self.seed < 0:
            raise WorkbenchError(ErrorCode.BAD_PARAMS, f"seed must be non-negative, got {self.seed}")
        if self.horizon < 1:
            raise WorkbenchError(ErrorCode.BAD_PARAMS, f"horizon must be at least 1, got {self.horizon}")
        if self.trials < 1 or self.rounds < 0:
            raise WorkbenchError(ErrorCode.BAD_PARAMS, "trials must be positive and rounds non-negative")
        if self.schedule not in ("default", "shifted"):
            raise WorkbenchError(ErrorCode.BAD_PARAMS, f"unknown schedule {self.schedule!r}")

    @classmethod
    def load(cls, config_path: str | Path | None = None, **overrides: Any) -> Self:  # noqa: ANN401
        """
        Build a configuration from an optional YAML file and explicit overrides.

        Overrides set to None are ignored, so unset CLI flags fall through to the file and then to the defaults.

        Raises:
            WorkbenchError: BAD_PARAMS for unknown keys or invalid values, PARSE_ERROR for a bad file.
        """
        known = {field.name for field in fields(cls)}
        data: dict[str, Any] = load_config(config_path) if config_path is not None else {}
        unknown = sorted(set(data) - known)
        if unknown:
            raise WorkbenchError(ErrorCode.BAD_PARAMS, f"unknown configuration keys: {', '.join(unknown)}")
        data.update({key: value for key, value in overrides.items() if value is not None and key in known})
        return cls(**data)

    def check_bench(self) -> None:
        """
        Raises:
            WorkbenchError: BAD_PARAMS if fewer trials than a bench needs are configured.
        """
        if self.trials < MIN_BENCH_TRIALS:
            raise WorkbenchError(ErrorCode.BAD_PARAMS, f"a bench needs at least {MIN_BENCH_TRIALS} trials")

    def pool_size(self) -> int:
        return self.workers if self.workers is not None else default_workers()

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["out"] = str(self.out)
        data["format"] = self.format.value
        return data

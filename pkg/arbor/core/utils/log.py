"""
Arbor Logging Utilities.

Every workbench component logs through one global Rich handler, so the CLI sets verbosity in a single place. A run can
be mirrored to a plain-text file, and console lines can carry a run tag such as the seed of a solver run.

Imports:
    - logging: Loggers, handlers and formatters.
    - contextlib.contextmanager: The tagged run context.
    - enum.Enum: Log level choices of the CLI.
    - pathlib.Path: Log file locations.
    - rich.console.Console: Rendering markup to plain text for log files.
    - rich.logging.RichHandler: The console handler.

Classes:
    - RunTagRichHandler: Console handler that prefixes records with the current run tag.
    - NoRichFileHandler: File handler that writes messages without Rich markup.
    - LogLevel: Log levels accepted by `--level`.
    - LogMixin: Adds a lazily created, class-named `logger` property.

Functions:
    - get_logger: A named logger attached to the console handler.
    - get_rich_handler: The global console handler.
    - get_file_handler: A plain-text handler writing `<name>.log` in an existing directory.
    - configure_logging: Apply the `--level` and `--log-dir` options.
    - tagged_run: Tag console lines for the duration of a block.
"""

import logging
from collections.abc import Iterator
from contextlib import contextmanager
from enum import Enum
from pathlib import Path
from typing import Any

from rich.console import Console
from rich.logging import RichHandler

FILE_FORMAT = "%(asctime)s %(levelname)-8s %(name)s: %(message)s"


class RunTagRichHandler(RichHandler):
    """
    Console handler that prefixes each message with a run tag.

    Attributes:
        run_tag: The tag, or None when lines are untagged.
    """

    def __init__(self, run_tag: str | None = None, **kwargs: Any) -> None:  # noqa: ANN401
        super().__init__(**kwargs)
        self.run_tag = run_tag

    def set_run_tag(self, run_tag: str | None) -> None:
        self.run_tag = run_tag

    def render_message(self, record: logging.LogRecord, message: str) -> Any:  # noqa: ANN401
        if self.run_tag:
            message = f"[dim]\\[{self.run_tag}][/dim] {message}"
        return super().render_message(record, message)


rich_handler = RunTagRichHandler(
    level=logging.WARNING,
    log_time_format="%H:%M:%S",
    markup=True,
    show_path=False,
    rich_tracebacks=True,
)


class NoRichFileHandler(logging.FileHandler):
    """
    File handler writing the plain text of messages that contain Rich markup.
    """

    def format(self, record: logging.LogRecord) -> str:
        plain = logging.makeLogRecord(record.__dict__)
        plain.msg = Console().render_str(record.getMessage()).plain
        plain.args = ()
        return super().format(plain)


def get_logger(name: str, level: int = logging.DEBUG) -> logging.Logger:
    """
    Get a named logger that writes to the global console handler.

    Args:
        name: Logger name, usually `__name__` or a class name.
        level: Logger level. The handler level decides what is shown.

    Returns:
        The logger.
    """
    logger = logging.getLogger(name)
    logger.setLevel(level)
    if rich_handler not in logger.handlers:
        logger.addHandler(rich_handler)
    return logger


def get_rich_handler() -> RunTagRichHandler:
    return rich_handler


def get_file_handler(output_dir: str | Path, name: str, level: int = logging.DEBUG) -> logging.FileHandler:
    """
    Get a handler writing plain text to `output_dir/<name>.log`.

    Args:
        output_dir: Existing directory of the log file.
        name: File stem.
        level: Handler level.

    Returns:
        The file handler.

    Raises:
        FileNotFoundError: If `output_dir` is not a directory.
    """
    output_dir = Path(output_dir)
    if not output_dir.is_dir():
        raise FileNotFoundError(f"Output directory {output_dir} does not exist")

    handler = NoRichFileHandler(str((output_dir / f"{name}.log").absolute()))
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(FILE_FORMAT))
    return handler


class LogLevel(str, Enum):
    """
    Log levels accepted by `--level`.
    """

    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"

    @property
    def number(self) -> int:
        return int(logging.getLevelName(self.value))


def configure_logging(level: LogLevel, log_dir: Path | None = None) -> None:
    """
    Set the console level and, with `log_dir`, mirror every record of the run to `log_dir/arbor.log`.

    The directory is created when missing.
    """
    rich_handler.setLevel(level.number)
    if log_dir is not None:
        log_dir.mkdir(parents=True, exist_ok=True)
        logging.getLogger().addHandler(get_file_handler(log_dir, "arbor"))


@contextmanager
def tagged_run(run_tag: str) -> Iterator[None]:
    """
    Tag console lines with `run_tag` inside the block, then restore the previous tag.
    """
    previous = rich_handler.run_tag
    rich_handler.set_run_tag(run_tag)
    try:
        yield
    finally:
        rich_handler.set_run_tag(previous)


class LogMixin:
    """
    Mixin adding a `logger` property, named after the class and created on first use.
    """

    @property
    def logger(self) -> logging.Logger:
        logger = self.__dict__.get("_logger")
        if logger is None:
            logger = get_logger(type(self).__name__)
            object.__setattr__(self, "_logger", logger)
        return logger  # type: ignore[no-any-return]

"""
Arbor Rich Utilities.

Console output built on Rich: result panels, markup for commands, entities, strings and counterexamples, and the
progress columns of the bench.

Imports:
    - rich.panel: Result panels.
    - rich.progress: Progress bar columns.

Functions:
    - success_panel, warning_panel, error_panel: Bordered panels for results.
    - verdict_panel: A success or error panel depending on a check.
    - format_command: Markup for a command name.
    - format_entity: Markup for an entity name.
    - format_string: Markup for a string of naturals.
    - format_counterexample: A counterexample, with its strings spelled out.
    - get_default_columns: The default progress columns.
"""

from typing import Any

from rich.markup import escape
from rich.panel import Panel
from rich.progress import (
    BarColumn,
    ProgressColumn,
    TaskProgressColumn,
    TextColumn,
    TimeElapsedColumn,
    TimeRemainingColumn,
)

from arbor.core.model.strings import pretty

ARBOR = "[bold][dark_sea_green4]Arbor[/dark_sea_green4][/bold]"


def success_panel(message: str, title: str = "Success") -> Panel:
    return Panel(message, title=title, title_align="left", border_style="green")


def warning_panel(message: str, title: str = "Warning") -> Panel:
    return Panel(message, title=title, title_align="left", border_style="yellow")


def error_panel(message: str, title: str = "Error") -> Panel:
    return Panel(message, title=title, title_align="left", border_style="red")


def verdict_panel(passed: bool, message: str, title: str = "Verdict") -> Panel:
    """
    A green panel when `passed`, a red one otherwise.
    """
    return success_panel(message, title) if passed else error_panel(message, title)


def format_command(command_name: str) -> str:
    return f"[steel_blue3]{command_name}[/steel_blue3]"


def format_entity(entity_name: str) -> str:
    return f"[light_pink3]{entity_name}[/light_pink3]"


def format_string(sigma: tuple[int, ...]) -> str:
    return format_entity(escape(pretty(sigma)))


def _is_string(value: Any) -> bool:  # noqa: ANN401
    return isinstance(value, tuple) and all(isinstance(item, int) for item in value)


def format_counterexample(counterexample: Any) -> str:  # noqa: ANN401
    """
    Render a counterexample, spelling out the strings inside it.

    Args:
        counterexample: A tuple of witnesses, each a string or any other value.

    Returns:
        Rich markup; an empty string for None.
    """
    if counterexample is None:
        return ""
    if isinstance(counterexample, tuple):
        parts = [format_string(item) if _is_string(item) else escape(repr(item)) for item in counterexample]
        return ", ".join(parts)
    return escape(repr(counterexample))


def get_default_columns() -> tuple[ProgressColumn, ...]:
    """
    Get the default progress columns.

    Returns:
        The default progress columns.
    """
    return (
        TextColumn("[bold]{task.description}", justify="left"),
        BarColumn(bar_width=None),
        TaskProgressColumn(),
        TimeRemainingColumn(),
        TimeElapsedColumn(),
    )

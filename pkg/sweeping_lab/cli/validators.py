"""
Scenario loading with field-level diagnostics.
"""

import logging
from pathlib import Path

from pydantic import ValidationError

from ..errors import ScenarioError
from .models import Scenario

logger = logging.getLogger(__name__)


def error_location(loc: tuple[int | str, ...]) -> str | None:
    """Dotted path of a pydantic error location, list indices in brackets."""
    if not loc:
        return None
    path = ""
    for part in loc:
        path += f"[{part}]" if isinstance(part, int) else (f".{part}" if path else str(part))
    return path


def scenario_error(e: ValidationError) -> ScenarioError:
    """First validation error as a ScenarioError; invalid JSON keeps pydantic's line/column."""
    errors = e.errors(include_url=False)
    first = errors[0]
    message = first["msg"]
    if len(errors) > 1:
        message += f" (and {len(errors) - 1} more errors)"
    return ScenarioError(message, location=error_location(first["loc"]))


def parse_scenario(text: str | bytes) -> Scenario:
    """
    Raises:
        ScenarioError: If ``text`` is not valid JSON or does not match the schema
    """
    try:
        return Scenario.model_validate_json(text)
    except ValidationError as e:
        raise scenario_error(e) from e


def load_scenario(path: str | Path) -> Scenario:
    """
    Read and validate a scenario file.

    Raises:
        ScenarioError: If the file cannot be read or parsed
    """
    path = Path(path)
    try:
        text = path.read_bytes()
    except OSError as e:
        raise ScenarioError(f"cannot read scenario file: {e.strerror}", location=str(path)) from e
    scenario = parse_scenario(text)
    logger.info(f"loaded scenario {scenario.name!r} from {path}")
    return scenario

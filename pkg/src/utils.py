import json
import logging
import time
from functools import wraps
from pathlib import Path
from typing import Any, Callable, TypeVar, cast

from pydantic import BaseModel

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"

F = TypeVar("F", bound=Callable[..., Any])

logger = logging.getLogger(__name__)


def clean_family_name(name: str) -> str:
    """Normalizes a family alias: ' Odd-A ' -> 'odd_a'."""
    return name.strip().lower().replace(" ", "_").replace("-", "_")


def configure_logging(verbose: bool = False) -> None:
    """Configures root logging once for CLI runs (stderr)."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format=LOG_FORMAT,
        force=True,
    )


def log_execution_time(func: F) -> F:
    """Decorator that logs how long the wrapped computation took."""

    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        start = time.perf_counter()
        result = func(*args, **kwargs)
        end = time.perf_counter()
        logger.debug(
            f"[Telemetry] '{func.__name__}' took {end - start:.4f} seconds."
        )
        return result

    return cast(F, wrapper)


class JsonReportMixin:
    """Adds deterministic JSON rendering and saving to pydantic reports."""

    def render_json(self) -> str:
        model = cast(BaseModel, self)
        payload = model.model_dump(mode="json")
        # sort_keys keeps bytes identical across runs
        return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False)

    def save_json(self, path: str) -> None:
        """Writes the report as UTF-8 JSON."""
        Path(path).write_text(self.render_json() + "\n", encoding="utf-8")
        logger.info(f"[I/O] Report written to: {path}")

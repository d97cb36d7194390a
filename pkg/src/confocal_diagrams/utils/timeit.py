"""Wall-clock timing helpers used for CLI telemetry."""
import time
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator, Optional

from ..core.logging_config import get_logger

logger = get_logger(__name__)


@dataclass
class Timer:
    """Elapsed seconds of a `timed` block, filled in when the block exits."""

    label: str
    seconds: float = 0.0


@contextmanager
def timed(label: str, log: Optional[bool] = True) -> Iterator[Timer]:
    """Time a block and log its duration at INFO level."""
    timer = Timer(label)
    start = time.perf_counter()
    try:
        yield timer
    finally:
        timer.seconds = time.perf_counter() - start
        if log:
            logger.info("%s finished in %.3f s", label, timer.seconds)

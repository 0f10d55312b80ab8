"""Logging configuration utilities."""

import sys
import time
from contextlib import contextmanager
from typing import Iterator, Optional, Union
from pathlib import Path

from loguru import logger

CONSOLE_FORMAT = (
    "<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | "
    "<cyan>{extra[scenario]}</cyan> | <level>{message}</level>"
)
FILE_FORMAT = (
    "{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {extra[scenario]} | "
    "{name}:{function}:{line} | {message}"
)


def setup_logging(
    level: str = "INFO",
    log_file: Optional[Union[str, Path]] = None,
) -> None:
    """
    Configure the loguru sinks used by spinorgp.

    Every record carries a ``scenario`` tag; outside a :func:`scenario_context`
    it reads ``-``.

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR)
        log_file: Optional path to a rotating log file
    """
    logger.remove()
    logger.configure(extra={"scenario": "-"})

    logger.add(sys.stderr, format=CONSOLE_FORMAT, level=level, colorize=True)

    if log_file:
        logger.add(log_file, format=FILE_FORMAT, level=level, rotation="10 MB")


@contextmanager
def scenario_context(name: str) -> Iterator[None]:
    """Tag every record emitted inside the block with a scenario name."""
    with logger.contextualize(scenario=name):
        yield


@contextmanager
def timed(stage: str) -> Iterator[None]:
    """Log the wall time of a stage at DEBUG level."""
    start = time.perf_counter()
    try:
        yield
    finally:
        logger.debug(f"{stage} took {time.perf_counter() - start:.3f} s")

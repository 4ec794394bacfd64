import logging
import sys
from typing import Optional, Union

from src.config import log_level

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def init_logging(level: Optional[Union[str, int]] = None) -> None:
    """Configure the root logger to write to stderr; stdout is reserved for emitted documents."""
    if level is None:
        level = log_level()
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.WARNING

    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)

import logging
from functools import reduce
from typing import Iterable, Set

import numpy as np

from src.exceptions import InvalidTimeError

logger = logging.getLogger(__name__)


def bits_to_mask(bits: Iterable[int]) -> int:
    return reduce(lambda x, y: x | y, (1 << b for b in bits), 0)


def mask_to_bits(mask: int) -> Set[int]:
    return {d for d in range(mask.bit_length()) if (mask >> d) & 1}


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def lowest_bit(mask: int) -> int:
    """Index of the lowest set bit of a non-zero mask."""
    return (mask & -mask).bit_length() - 1


def format_number(value: float, digits: int = 12) -> str:
    """Fixed significant-digit rendering so reports are byte-stable across platforms."""
    text = f"{float(value):.{digits}g}"
    return "0" if text == "-0" else text


def parse_time_grid(spec: str) -> np.ndarray:
    """
    Parse 'start:stop:step' (hours) into an inclusive ascending grid.

    Args:
        spec: e.g. '0:10000:100'

    Returns:
        numpy array of times; stop is included when it lies on the grid
    """
    parts = spec.split(":")
    if len(parts) != 3:
        raise InvalidTimeError(f"Time grid must look like start:stop:step, got {spec!r}")

    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise InvalidTimeError(f"Time grid has non-numeric parts: {spec!r}")

    if not np.all(np.isfinite([start, stop, step])):
        raise InvalidTimeError(f"Time grid parts must be finite, got {spec!r}")

    if start < 0:
        raise InvalidTimeError(f"Time grid starts at negative time {start}")
    if step <= 0:
        raise InvalidTimeError(f"Time grid step must be positive, got {step}")
    if stop < start:
        raise InvalidTimeError(f"Time grid stop {stop} is before start {start}")

    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    grid = start + step * np.arange(count, dtype=float)
    logger.debug(f"Parsed time grid {spec!r} into {count} points")
    return grid


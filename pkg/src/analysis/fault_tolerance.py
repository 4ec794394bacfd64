import logging
from functools import lru_cache
from itertools import combinations
from typing import List, Tuple

import numpy as np

from src.analysis.decoder import is_fully_recoverable_mask
from src.config import max_exact_disks
from src.exceptions import InvalidFailureCountError, TooLargeForExactError
from src.models.analysis_results import AliveSet, CoverageReport, FtDegree
from src.models.layout import Layout
from src.utils.helpers import bits_to_mask

logger = logging.getLogger(__name__)


def check_exact_capacity(layout: Layout) -> None:
    limit = max_exact_disks()
    if layout.n_disks > limit:
        raise TooLargeForExactError(
            f"{layout.name} has {layout.n_disks} disks; exhaustive enumeration is limited to {limit} "
            f"(set RAIDLAY_MAX_EXACT_DISKS or use the Monte Carlo 'mc' command)")


def _check_failures(layout: Layout, f: int) -> None:
    if not 0 <= f <= layout.n_disks:
        raise InvalidFailureCountError(f"Failure count {f} outside [0, {layout.n_disks}] for {layout.name}")


def failed_masks(n_disks: int, f: int) -> List[int]:
    """All failed-disk bitsets of size f in ascending integer order."""
    return sorted(bits_to_mask(c) for c in combinations(range(n_disks), f))


def coverage(layout: Layout, f: int) -> CoverageReport:
    """Judge all C(n, f) failure scenarios with f failed disks."""
    _check_failures(layout, f)
    check_exact_capacity(layout)

    everything = layout.all_disks_mask
    failing: List[AliveSet] = []
    scenarios = failed_masks(layout.n_disks, f)
    for failed in scenarios:
        alive_mask = everything & ~failed
        if not is_fully_recoverable_mask(layout, alive_mask):
            failing.append(AliveSet(n_disks=layout.n_disks, mask=alive_mask))

    report = CoverageReport(layout_name=layout.name, n_disks=layout.n_disks, f=f, total=len(scenarios),
                            recovered=len(scenarios) - len(failing), failing=failing)
    logger.debug(f"{layout.name} f={f}: {report.recovered}/{report.total} scenarios recoverable")
    return report


def coverage_profile(layout: Layout) -> List[CoverageReport]:
    return [coverage(layout, f) for f in range(layout.n_disks + 1)]


def ft_degree(layout: Layout) -> FtDegree:
    """Largest f such that every scenario with up to f failed disks is fully recoverable."""
    check_exact_capacity(layout)
    degree = -1
    for f in range(layout.n_disks + 1):
        if not coverage(layout, f).is_total:
            break
        degree = f

    if degree < 0:
        logger.warning(f"{layout.name}: not every block is recoverable even with all disks alive")
        degree = 0
    logger.info(f"{layout.name}: degree of fault tolerance {degree}")
    return FtDegree(layout_name=layout.name, degree=degree)


def ft_table(layout: Layout, f: int) -> List[Tuple[AliveSet, bool]]:
    """Scenario rows with alive sets as ascending combinations (D0 D1, D0 D2, ...)."""
    _check_failures(layout, f)
    check_exact_capacity(layout)
    rows = []
    for disks in combinations(range(layout.n_disks), layout.n_disks - f):
        alive = AliveSet.of(layout.n_disks, disks)
        rows.append((alive, is_fully_recoverable_mask(layout, alive.mask)))
    return rows


def recoverability_table(layout: Layout) -> np.ndarray:
    """table[mask] is True when alive set `mask` recovers every block (read-only array)."""
    check_exact_capacity(layout)
    return _recoverability_table(layout)


@lru_cache(maxsize=64)
def _recoverability_table(layout: Layout) -> np.ndarray:
    size = 1 << layout.n_disks
    table = np.zeros(size, dtype=bool)
    for mask in range(size):
        table[mask] = is_fully_recoverable_mask(layout, mask)
    table.setflags(write=False)
    logger.debug(f"{layout.name}: {int(table.sum())}/{size} alive sets recoverable")
    return table

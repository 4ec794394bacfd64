"""
System reliability of a stripe layout with i.i.d. disks.

exact_reliability sums the probabilities of every recoverable alive set and
is the reference value. koon_reliability credits only "at least k disks
alive", and naive_parallel_series is the textbook parallel-of-series formula
R = 1 - prod_i (1 - prod_j rho_ij), exact only when paths share no
components.
"""
import logging
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np
from scipy.stats import binom

from src.analysis.decoder import is_fully_recoverable_mask
from src.analysis.fault_tolerance import check_exact_capacity, ft_degree, recoverability_table
from src.config import max_exact_disks
from src.exceptions import (ConfigError, InvalidKooNError, InvalidProbabilityError, InvalidStructureError,
                            InvalidTimeError, InvalidTrialsError)
from src.models.analysis_results import (AliveSet, CurveMode, DiskModel, MonteCarloResult, PathSet,
                                         ReliabilityCurve)
from src.models.layout import Layout
from src.utils.helpers import bits_to_mask, popcount

logger = logging.getLogger(__name__)

Probability = Union[float, np.ndarray]

MONTE_CARLO_CHUNK = 100_000
# widest alive set that still packs into a non-negative int64 mask
PACKED_MASK_DISKS = 62


def _check_probability(p: Probability) -> np.ndarray:
    values = np.asarray(p, dtype=float)
    if np.any(np.isnan(values)) or np.any((values < 0.0) | (values > 1.0)):
        raise InvalidProbabilityError(f"Probability outside [0, 1]: {p}")
    return values


def _like_input(p: Probability, result: np.ndarray) -> Probability:
    return float(result) if np.ndim(p) == 0 else result


# --- RBD structures ---------------------------------------------------------

def series_reliability(components: Sequence[float]) -> float:
    """All components must work."""
    if len(components) == 0:
        raise InvalidStructureError("A series structure needs at least one component")
    return float(np.prod(_check_probability(components)))


def parallel_reliability(components: Sequence[float]) -> float:
    """At least one component must work."""
    if len(components) == 0:
        raise InvalidStructureError("A parallel structure needs at least one component")
    return float(1.0 - np.prod(1.0 - _check_probability(components)))


def series_parallel(blocks: Sequence[Sequence[float]]) -> float:
    """Series chain of parallel blocks: prod_i (1 - prod_j (1 - rho_ij))."""
    if len(blocks) == 0:
        raise InvalidStructureError("A series-parallel structure needs at least one block")
    return float(np.prod([parallel_reliability(block) for block in blocks]))


def naive_parallel_series(paths: Union[PathSet, Sequence[Sequence[float]]]) -> float:
    """
    R = 1 - prod_i (1 - prod_j rho_ij) over parallel paths i of series items j.

    Exact only for paths with disjoint components; with shared disks it
    overestimates (it treats every path as independent).
    """
    if not isinstance(paths, PathSet):
        paths = PathSet.of(paths)
    path_reliabilities = [float(np.prod(path)) for path in paths.paths]
    return parallel_reliability(path_reliabilities)


def koon_reliability(k: int, n: int, p: Probability) -> Probability:
    """Probability that at least k of n i.i.d. components with reliability p work."""
    if k > n:
        raise InvalidKooNError(f"k-out-of-n needs k <= n, got k={k}, n={n}")
    if k < 0 or n < 0:
        raise InvalidKooNError(f"k-out-of-n needs non-negative k and n, got k={k}, n={n}")
    values = _check_probability(p)
    result = binom.sf(k - 1, n, values)
    return _like_input(p, np.asarray(result, dtype=float))


# --- Exact reliability from scenario enumeration ----------------------------

def reliability_polynomial(layout: Layout) -> Tuple[int, ...]:
    """N_j = number of recoverable alive sets with exactly j alive disks, j = 0..n."""
    table = recoverability_table(layout)
    counts = [0] * (layout.n_disks + 1)
    for mask in np.flatnonzero(table):
        counts[popcount(int(mask))] += 1
    return tuple(counts)


def exact_reliability(layout: Layout, p: Probability) -> Probability:
    """
    Sum of p^|S| (1-p)^(n-|S|) over every alive set S that recovers all blocks.

    Raises:
        TooLargeForExactError: more disks than the exact-enumeration limit
    """
    check_exact_capacity(layout)
    values = _check_probability(p)
    n = layout.n_disks
    weights = reliability_polynomial(layout)

    result = np.zeros_like(values, dtype=float)
    for j, count in enumerate(weights):
        if count:
            result = result + count * values ** j * (1.0 - values) ** (n - j)
    return _like_input(p, result)


def minimal_path_sets(layout: Layout) -> List[AliveSet]:
    """Recoverable alive sets that stop being recoverable when any one disk is removed."""
    table = recoverability_table(layout)
    minimal = []
    for mask in np.flatnonzero(table):
        mask = int(mask)
        if all(not table[mask & ~(1 << d)] for d in range(layout.n_disks) if (mask >> d) & 1):
            minimal.append(AliveSet(n_disks=layout.n_disks, mask=mask))
    minimal.sort(key=lambda a: (popcount(a.mask), a.disks))
    return minimal


def naive_rbd_reliability(layout: Layout, p: Probability) -> Probability:
    """Parallel-series formula over the layout's minimal path sets, each path a chain of p's."""
    values = _check_probability(p)
    path_sizes = [popcount(path.mask) for path in minimal_path_sets(layout)]
    if not path_sizes:
        return _like_input(p, np.zeros_like(values, dtype=float))

    unreliability = np.ones_like(values, dtype=float)
    for size in path_sizes:
        unreliability = unreliability * (1.0 - values ** size)
    return _like_input(p, 1.0 - unreliability)


def resolve_mode(layout: Layout, mode: CurveMode) -> CurveMode:
    """Turn 'guaranteed' into koon(n - ft_degree) for this layout."""
    if mode.kind == "guaranteed":
        return CurveMode("koon", layout.n_disks - ft_degree(layout).degree)
    return mode


def reliability_at(layout: Layout, p: Probability, mode: CurveMode) -> Probability:
    mode = resolve_mode(layout, mode)
    if mode.kind == "exact":
        return exact_reliability(layout, p)
    if mode.kind == "koon":
        return koon_reliability(mode.k, layout.n_disks, p)
    if mode.kind == "naive-rbd":
        return naive_rbd_reliability(layout, p)
    raise InvalidStructureError(f"Unsupported reliability mode {mode.label}")


def reliability_curve(layout: Layout, model: DiskModel, t_grid: Sequence[float],
                      mode: Union[CurveMode, str] = "exact") -> ReliabilityCurve:
    """System reliability at each mission time of an ascending, non-negative grid."""
    if isinstance(mode, str):
        mode = CurveMode.parse(mode)

    times = np.asarray(t_grid, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise InvalidTimeError("Time grid must be a non-empty sequence of times")
    if not np.all(np.isfinite(times)):
        raise InvalidTimeError("Mission times must be finite")
    if np.any(times < 0):
        raise InvalidTimeError(f"Mission time must be >= 0, got {times.min()}")
    if np.any(np.diff(times) < 0):
        raise InvalidTimeError("Time grid must be ascending")

    resolved = resolve_mode(layout, mode)
    survival = model.survival(times)
    values = np.asarray(reliability_at(layout, survival, resolved), dtype=float)
    values = np.clip(values, 0.0, 1.0)

    logger.info(f"{layout.name} {resolved.label}: R({times[-1]:g} h) = {values[-1]:.6f}")
    return ReliabilityCurve(layout_name=layout.name, mode=resolved.label,
                            t_grid=tuple(float(t) for t in times), values=tuple(float(v) for v in values))


# --- Monte Carlo ------------------------------------------------------------

def monte_carlo_reliability(layout: Layout, p: float, trials: int, seed: int) -> MonteCarloResult:
    """
    Fraction of random disk-survival draws whose alive set recovers every block.

    Draws come from a Philox (counter-based) generator seeded with `seed`,
    in fixed-size chunks, so identical arguments give identical results.
    Above the exact limit, or past the width of an int64 mask, each distinct
    alive set is judged once by the decoder.
    """
    if trials < 1:
        raise InvalidTrialsError(f"Monte Carlo needs at least one trial, got {trials}")
    if seed < 0:
        raise ConfigError(f"Monte Carlo seed must be non-negative, got {seed}")
    _check_probability(p)

    n = layout.n_disks
    rng = np.random.Generator(np.random.Philox(seed))
    exact_lookup = n <= min(max_exact_disks(), PACKED_MASK_DISKS)
    table = recoverability_table(layout) if exact_lookup else None
    weights = np.left_shift(np.ones(n, dtype=np.int64), np.arange(n, dtype=np.int64)) if exact_lookup else None
    verdicts: Dict[int, bool] = {}

    successes = 0
    remaining = trials
    while remaining:
        size = min(remaining, MONTE_CARLO_CHUNK)
        alive_bits = rng.random((size, n)) < p

        if table is not None:
            masks = alive_bits.astype(np.int64) @ weights
            successes += int(np.count_nonzero(table[masks]))
        else:
            rows, counts = np.unique(alive_bits, axis=0, return_counts=True)
            for row, count in zip(rows, counts.tolist()):
                mask = bits_to_mask(np.flatnonzero(row).tolist())
                if mask not in verdicts:
                    verdicts[mask] = is_fully_recoverable_mask(layout, mask)
                if verdicts[mask]:
                    successes += count
        remaining -= size

    estimate = successes / trials
    stderr = float(np.sqrt(estimate * (1.0 - estimate) / trials))
    logger.info(f"{layout.name}: Monte Carlo p={p} trials={trials} seed={seed} -> {estimate:.6f} +/- {stderr:.2e}")
    return MonteCarloResult(estimate=estimate, stderr=stderr)

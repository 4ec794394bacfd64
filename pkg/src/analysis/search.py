"""
Exhaustive searches over cell orderings.

PP and RP searches walk the rotational offset families; the replication
search walks every balanced replication-only placement on five disks
(three copies per block on distinct disks, three cells per disk) up to
disk and block relabelling.
"""
import logging
from itertools import combinations, combinations_with_replacement, permutations
from typing import List, Optional, Sequence, Set, Tuple

from tqdm import tqdm

from src.analysis.fault_tolerance import check_exact_capacity, coverage, ft_degree
from src.exceptions import UnsupportedSizeError
from src.layouts.generators import MIN_DISKS, generate_pp, generate_rp
from src.models.analysis_results import CandidateScore, ReplicationSearchResult
from src.models.layout import Cell, Layout
from src.utils.helpers import mask_to_bits

logger = logging.getLogger(__name__)

REPLICATION_DISKS = 5
COPIES = 3


def score_layout(layout: Layout, descriptor: Tuple[int, ...], key: Optional[Tuple[int, ...]] = None) -> CandidateScore:
    """ft degree plus coverage at degree + 1 (taken as complete when degree + 1 exceeds the disk count)."""
    check_exact_capacity(layout)
    degree = ft_degree(layout).degree
    if degree + 1 <= layout.n_disks:
        report = coverage(layout, degree + 1)
        recovered, total = report.recovered, report.total
    else:
        recovered, total = 1, 1

    score = CandidateScore(descriptor=tuple(descriptor), layout=layout, ft_degree=degree,
                           recovered=recovered, total=total, key=tuple(key if key is not None else descriptor))
    logger.debug(f"{layout.name}: degree {degree}, {score.coverage_label} at f={degree + 1}")
    return score


def rank(scores: Sequence[CandidateScore]) -> List[CandidateScore]:
    return sorted(scores, key=lambda s: s.rank_key)


def _check_family_size(n: int) -> None:
    if n < MIN_DISKS:
        raise UnsupportedSizeError(f"Offset searches need at least {MIN_DISKS} disks, got {n}")


def search_pp_offsets(n: int) -> List[CandidateScore]:
    """
    Rank every parity-parity offset tuple (a1, b1, a2, b2) modulo n.

    Member order inside a parity row and the order of the two parity rows do
    not matter, so each candidate is a sorted pair of sorted offset pairs.
    """
    _check_family_size(n)
    pairs = list(combinations(range(n), 2))
    scores = []
    for first, second in combinations_with_replacement(pairs, 2):
        descriptor = first + second
        scores.append(score_layout(generate_pp(n, *descriptor), descriptor))

    ranked = rank(scores)
    logger.info(f"PP search on {n} disks: {len(ranked)} candidates, best {ranked[0].layout.name} "
                f"(degree {ranked[0].ft_degree}, {ranked[0].coverage_label})")
    return ranked


def search_rp_offsets(n: int) -> List[CandidateScore]:
    """Rank every replica-parity tuple (rho, a, b) with rho in 1..n-1 and a < b."""
    _check_family_size(n)
    scores = []
    for rho in range(1, n):
        for a, b in combinations(range(n), 2):
            descriptor = (rho, a, b)
            scores.append(score_layout(generate_rp(n, *descriptor), descriptor))

    ranked = rank(scores)
    logger.info(f"RP search on {n} disks: {len(ranked)} candidates, best {ranked[0].layout.name} "
                f"(degree {ranked[0].ft_degree}, {ranked[0].coverage_label})")
    return ranked


# --- balanced replication placements -----------------------------------------

Placement = Tuple[int, ...]


def _enumerate_placements(n: int, pbar: tqdm) -> List[Placement]:
    """Every assignment of a COPIES-subset of blocks to each disk using each block exactly COPIES times."""
    subsets = [sum(1 << b for b in c) for c in combinations(range(n), COPIES)]
    placements: List[Placement] = []
    counts = [0] * n
    chosen: List[int] = []

    def extend(disk: int) -> None:
        if disk == n:
            placements.append(tuple(chosen))
            pbar.update(1)
            return
        for subset in subsets:
            blocks = mask_to_bits(subset)
            if any(counts[b] == COPIES for b in blocks):
                continue
            for b in blocks:
                counts[b] += 1
            chosen.append(subset)
            extend(disk + 1)
            chosen.pop()
            for b in blocks:
                counts[b] -= 1

    extend(0)
    return placements


def _permute_mask(mask: int, perm: Sequence[int]) -> int:
    return sum(1 << perm[b] for b in mask_to_bits(mask))


def canonical_placement(placement: Placement, block_perms: Sequence[Sequence[int]]) -> Placement:
    """Smallest sorted row-mask tuple over all block relabellings; sorting absorbs disk relabelling."""
    return min(tuple(sorted(_permute_mask(mask, perm) for mask in placement)) for perm in block_perms)


def placement_layout(placement: Placement) -> Layout:
    n = len(placement)
    grid = tuple(tuple(Cell.of(b) for b in sorted(mask_to_bits(mask))) for mask in placement)
    name = "REPL_" + "_".join(format(mask, "x") for mask in placement)
    return Layout(name=name, n_disks=n, n_blocks=n, grid=grid)


def search_replication_placements(n: int = REPLICATION_DISKS, progress: bool = False) -> ReplicationSearchResult:
    """
    Exhaust balanced replication-only placements and certify the best fault tolerance they reach.

    Raises:
        UnsupportedSizeError: n other than five disks
    """
    if n != REPLICATION_DISKS:
        raise UnsupportedSizeError(
            f"Replication search is exhaustive only on {REPLICATION_DISKS} disks, got {n}")

    with tqdm(desc="placements", unit="placement", disable=not progress) as pbar:
        placements = _enumerate_placements(n, pbar)

    block_perms = list(permutations(range(n)))
    classes: Set[Placement] = set()
    for placement in placements:
        classes.add(canonical_placement(placement, block_perms))
    logger.info(f"Replication search: {len(placements)} placements in {len(classes)} classes")

    scores = []
    pair_reports = []
    for canonical in tqdm(sorted(classes), desc="classes", unit="class", disable=not progress):
        layout = placement_layout(canonical)
        scores.append(score_layout(layout, canonical))
        pair_reports.append(coverage(layout, n - 2))

    ranked = rank(scores)
    best_pairs = max(pair_reports, key=lambda r: r.recovered)
    result = ReplicationSearchResult(
        best=ranked[0],
        ranked=ranked,
        placements_enumerated=len(placements),
        distinct_classes=len(classes),
        max_ft_degree=max(s.ft_degree for s in scores),
        max_pair_recovered=best_pairs.recovered,
        pair_total=best_pairs.total,
        reaches_full_pair_coverage=any(r.is_total for r in pair_reports),
    )
    logger.info(f"Replication search: max degree {result.max_ft_degree}, "
                f"max f={n - 2} coverage {result.max_pair_recovered}/{result.pair_total}")
    return result

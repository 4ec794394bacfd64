"""
Recoverability of data blocks from the cells of surviving disks.

Each cell is a vector over GF(2) (one bit per block). A block is
recoverable exactly when its unit vector lies in the span of the alive
cell vectors; elimination runs on int bitsets.
"""
import logging
from typing import Dict, Iterable, List, Optional, Set, Tuple, Union

from src.exceptions import IndexOutOfRangeError, NotRecoverableError
from src.models.analysis_results import AliveSet, RecoveryPlan, RecoveryStep
from src.models.layout import BlockId, Cell, Layout
from src.utils.helpers import lowest_bit, mask_to_bits, popcount

logger = logging.getLogger(__name__)

AliveLike = Union[AliveSet, Iterable[int]]


class GF2Basis:
    """
    Incremental echelon basis over GF(2).

    Rows are keyed by their lowest set bit. Alongside each row the basis
    keeps the combination (bitset over insertion indices) of input vectors
    that produced it, and every input that reduced to zero is recorded as a
    linear dependency.
    """

    def __init__(self):
        self._rows: Dict[int, Tuple[int, int]] = {}
        self.dependencies: List[int] = []
        self._inserted = 0

    @property
    def rank(self) -> int:
        return len(self._rows)

    def _reduce(self, vector: int, combination: int) -> Tuple[int, int]:
        while vector:
            row = self._rows.get(lowest_bit(vector))
            if row is None:
                break
            vector ^= row[0]
            combination ^= row[1]
        return vector, combination

    def add(self, vector: int) -> bool:
        """Insert a vector; False when it was already in the span."""
        index = self._inserted
        self._inserted += 1
        residue, combination = self._reduce(vector, 1 << index)
        if residue == 0:
            self.dependencies.append(combination)
            return False
        self._rows[lowest_bit(residue)] = (residue, combination)
        return True

    def express(self, vector: int) -> Optional[int]:
        """Combination of inserted vectors summing to `vector`, or None if outside the span."""
        residue, combination = self._reduce(vector, 0)
        return combination if residue == 0 else None

    def shorten(self, combination: int) -> int:
        """Greedily XOR recorded dependencies into a combination while that drops terms."""
        improved = True
        while improved:
            improved = False
            for dependency in self.dependencies:
                candidate = combination ^ dependency
                if popcount(candidate) < popcount(combination):
                    combination = candidate
                    improved = True
        return combination


def as_alive_set(layout: Layout, alive: AliveLike) -> AliveSet:
    if isinstance(alive, AliveSet):
        if alive.n_disks != layout.n_disks:
            raise IndexOutOfRangeError(
                f"Alive set is over {alive.n_disks} disks, layout {layout.name} has {layout.n_disks}")
        return alive
    return AliveSet.of(layout.n_disks, alive)


def _basis_for(layout: Layout, alive_mask: int) -> Tuple[GF2Basis, List[Tuple[int, int, Cell]]]:
    cells = layout.alive_cells(alive_mask)
    basis = GF2Basis()
    for _, _, cell in cells:
        basis.add(cell.mask)
    return basis, cells


def recoverable_blocks(layout: Layout, alive: AliveLike) -> Set[BlockId]:
    """Blocks whose unit vector lies in the GF(2) span of the cells on alive disks."""
    alive = as_alive_set(layout, alive)
    basis, _ = _basis_for(layout, alive.mask)
    recovered = {b for b in range(layout.n_blocks) if basis.express(1 << b) is not None}
    logger.debug(f"{layout.name} alive {alive.label}: rank {basis.rank}, recovered {sorted(recovered)}")
    return recovered


def is_fully_recoverable_mask(layout: Layout, alive_mask: int) -> bool:
    """Full rank over the alive cells means every block is in the span."""
    rank = 0
    basis = GF2Basis()
    for _, _, cell in layout.alive_cells(alive_mask):
        if basis.add(cell.mask):
            rank += 1
            if rank == layout.n_blocks:
                return True
    return False


def is_fully_recoverable(layout: Layout, alive: AliveLike) -> bool:
    alive = as_alive_set(layout, alive)
    return is_fully_recoverable_mask(layout, alive.mask)


def _chain_order(steps: List[RecoveryStep]) -> Tuple[RecoveryStep, ...]:
    """Order steps so the running XOR stays as small as possible, ties by (disk, row)."""
    remaining = sorted(steps, key=lambda s: (s.disk, s.row))
    ordered: List[RecoveryStep] = []
    running = frozenset()
    while remaining:
        best = min(remaining, key=lambda s: (len(running ^ s.cell.members), s.disk, s.row))
        remaining.remove(best)
        ordered.append(best)
        running = running ^ best.cell.members
    return tuple(ordered)


def recovery_plan(layout: Layout, alive: AliveLike, target: BlockId) -> RecoveryPlan:
    """
    XOR recipe for one block from the alive cells.

    The combination comes from the elimination's row bookkeeping and is then
    shortened with the recorded dependencies among alive cells; steps are
    listed as an XOR chain.

    Raises:
        IndexOutOfRangeError: target outside [0, n_blocks)
        NotRecoverableError: target not in the span of the alive cells
    """
    if not 0 <= target < layout.n_blocks:
        raise IndexOutOfRangeError(f"Block {target} outside [0, {layout.n_blocks})")

    alive = as_alive_set(layout, alive)
    basis, cells = _basis_for(layout, alive.mask)
    combination = basis.express(1 << target)
    if combination is None:
        raise NotRecoverableError(f"{layout.name}: block {target} cannot be recovered from disks {alive.label}")

    combination = basis.shorten(combination)
    steps = [RecoveryStep(disk=cells[i][0], row=cells[i][1], cell=cells[i][2])
             for i in sorted(mask_to_bits(combination))]
    plan = RecoveryPlan(target=target, steps=_chain_order(steps))
    logger.debug(f"{layout.name}: plan for B_{target} from {alive.label} uses {len(plan.steps)} cells")
    return plan


def chaining_recoverable_blocks(layout: Layout, alive: AliveLike) -> Set[BlockId]:
    """
    Pairwise XOR chaining: learn the one unknown member of any alive cell
    whose other members are already known, until nothing changes.
    """
    alive = as_alive_set(layout, alive)
    cells = [cell for _, _, cell in layout.alive_cells(alive.mask)]
    known: Set[BlockId] = set()
    progress = True
    while progress:
        progress = False
        for cell in cells:
            unknown = cell.members - known
            if len(unknown) == 1:
                known |= unknown
                progress = True
    return known

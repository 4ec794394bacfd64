from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, Iterator, List, Sequence, Set, Tuple

from src.exceptions import DegenerateCellError, IndexOutOfRangeError

BlockId = int


@dataclass(frozen=True)
class Cell:
    """
    One stored slot of a stripe.

    A singleton is a copy of a data block (B_i, M_i or M'_i); two or more
    members form a parity cell holding the XOR of those blocks.
    """
    members: FrozenSet[BlockId]

    def __post_init__(self):
        if not self.members:
            raise DegenerateCellError("A cell must hold at least one block")
        if any(b < 0 for b in self.members):
            raise IndexOutOfRangeError(f"Negative block index in cell {sorted(self.members)}")

    @classmethod
    def of(cls, *blocks: BlockId) -> 'Cell':
        """Build a cell from block indices, rejecting repeats (B_i xor B_i is not a cell)."""
        members = frozenset(blocks)
        if len(members) != len(blocks):
            raise DegenerateCellError(f"Cell repeats a block: {list(blocks)}")
        return cls(members)

    @property
    def is_parity(self) -> bool:
        return len(self.members) > 1

    @property
    def sorted_members(self) -> Tuple[BlockId, ...]:
        return tuple(sorted(self.members))

    @property
    def mask(self) -> int:
        """Characteristic GF(2) vector as an int bitset."""
        vector = 0
        for b in self.members:
            vector |= 1 << b
        return vector

    @property
    def token(self) -> str:
        """Layout-file spelling: B3 or X(1,2)."""
        if not self.is_parity:
            return f"B{self.sorted_members[0]}"
        return "X(" + ",".join(str(b) for b in self.sorted_members) + ")"

    def __str__(self) -> str:
        return self.token


@dataclass(frozen=True)
class Layout:
    """
    One stripe of n_blocks data blocks spread over n_disks disks.

    grid[d] lists the cells of disk d in row order. The name is a label
    only and does not take part in equality.
    """
    name: str = field(compare=False)
    n_disks: int
    n_blocks: int
    grid: Tuple[Tuple[Cell, ...], ...]

    def __post_init__(self):
        if self.n_disks < 1:
            raise IndexOutOfRangeError(f"Layout needs at least one disk, got {self.n_disks}")
        if self.n_blocks < 1:
            raise IndexOutOfRangeError(f"Layout needs at least one block, got {self.n_blocks}")
        if len(self.grid) != self.n_disks:
            raise IndexOutOfRangeError(f"Grid has {len(self.grid)} disks, declared {self.n_disks}")

        for disk, cells in enumerate(self.grid):
            for row, cell in enumerate(cells):
                if max(cell.members) >= self.n_blocks:
                    raise IndexOutOfRangeError(
                        f"Disk {disk} row {row}: block {max(cell.members)} >= {self.n_blocks} blocks")

    @classmethod
    def from_rows(cls, name: str, n_blocks: int, rows: Sequence[Sequence[Iterable[BlockId]]]) -> 'Layout':
        """Build a layout from plain nested lists, e.g. [[[0], [1, 2]], [[1], [2, 3]]]."""
        grid = tuple(tuple(Cell.of(*members) for members in disk) for disk in rows)
        return cls(name=name, n_disks=len(grid), n_blocks=n_blocks, grid=grid)

    def cells(self) -> Iterator[Tuple[int, int, Cell]]:
        """All cells as (disk, row, cell) in (disk, row) order."""
        for disk, cells in enumerate(self.grid):
            for row, cell in enumerate(cells):
                yield disk, row, cell

    def alive_cells(self, alive_mask: int) -> List[Tuple[int, int, Cell]]:
        return [(disk, row, cell) for disk, row, cell in self.cells() if (alive_mask >> disk) & 1]

    @property
    def n_cells(self) -> int:
        return sum(len(cells) for cells in self.grid)

    @property
    def redundancy_cells(self) -> int:
        """Cells beyond one primary copy per block."""
        return self.n_cells - self.n_blocks

    @property
    def replication_factor(self) -> float:
        return self.redundancy_cells / self.n_blocks

    @property
    def all_disks_mask(self) -> int:
        return (1 << self.n_disks) - 1

    def unstored_blocks(self) -> Set[BlockId]:
        stored = {cell.sorted_members[0] for _, _, cell in self.cells() if not cell.is_parity}
        return set(range(self.n_blocks)) - stored

    def renamed(self, name: str) -> 'Layout':
        return Layout(name=name, n_disks=self.n_disks, n_blocks=self.n_blocks, grid=self.grid)

    def relabel(self, disk_perm: Sequence[int], block_perm: Sequence[int]) -> 'Layout':
        """Move disk d to disk_perm[d] and rename block b to block_perm[b]."""
        if sorted(disk_perm) != list(range(self.n_disks)):
            raise IndexOutOfRangeError(f"Not a permutation of {self.n_disks} disks: {list(disk_perm)}")
        if sorted(block_perm) != list(range(self.n_blocks)):
            raise IndexOutOfRangeError(f"Not a permutation of {self.n_blocks} blocks: {list(block_perm)}")

        grid: List[Tuple[Cell, ...]] = [()] * self.n_disks
        for disk, cells in enumerate(self.grid):
            grid[disk_perm[disk]] = tuple(Cell(frozenset(block_perm[b] for b in cell.members)) for cell in cells)
        return Layout(name=self.name, n_disks=self.n_disks, n_blocks=self.n_blocks, grid=tuple(grid))

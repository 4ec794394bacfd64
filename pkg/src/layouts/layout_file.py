"""
Line-oriented layout documents.

    name = RR
    disks = 5
    blocks = 5
    disk 0: B0, B4, B3
    disk 1: B1, X(0,2), B4

B<i> is a stored copy of block i, X(<i>,<j>[,...]) the XOR of two or more
distinct blocks. '#' starts a comment. Every disk 0..disks-1 appears once.
"""
import logging
import re
import warnings
from typing import Dict, List, Optional, Tuple

from src.exceptions import DegenerateCellError, IndexOutOfRangeError, LayoutSyntaxError, UnstoredBlockWarning
from src.models.layout import Cell, Layout

logger = logging.getLogger(__name__)

HEADER_RE = re.compile(r"^\s*(name|disks|blocks)\s*=\s*(\S+)\s*$")
DISK_RE = re.compile(r"^\s*disk\s+(\d+)\s*:")
CELL_RE = re.compile(r"\s*(?:B(\d+)|X\(([^)]*)\))\s*")
NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-]*$")

DEFAULT_NAME = "layout"


def _parse_cell(match: re.Match, n_blocks: Optional[int], line_no: int, column: int) -> Cell:
    if match.group(1) is not None:
        members = [int(match.group(1))]
    else:
        parts = [p.strip() for p in match.group(2).split(",")]
        if len(parts) < 2 or not all(p.isdigit() for p in parts):
            raise LayoutSyntaxError(
                f"parity cell needs two or more block indices, got X({match.group(2)})", line_no, column)
        members = [int(p) for p in parts]

    too_big = [b for b in members if n_blocks is not None and b >= n_blocks]
    if too_big:
        raise IndexOutOfRangeError(
            f"line {line_no}, column {column}: block {too_big[0]} >= declared blocks = {n_blocks}")

    try:
        return Cell.of(*members)
    except DegenerateCellError:
        raise DegenerateCellError(
            f"line {line_no}, column {column}: cell repeats a block: {match.group(0).strip()}")


def _parse_cells(body: str, offset: int, n_blocks: Optional[int], line_no: int) -> Tuple[Cell, ...]:
    cells: List[Cell] = []
    pos = 0
    while True:
        match = CELL_RE.match(body, pos)
        if not match:
            raise LayoutSyntaxError("expected B<i> or X(<i>,<j>,...)", line_no, offset + pos + 1)
        cells.append(_parse_cell(match, n_blocks, line_no, offset + match.start() + 1))
        pos = match.end()
        if pos == len(body):
            return tuple(cells)
        if body[pos] != ",":
            raise LayoutSyntaxError(f"expected ',' between cells, got {body[pos]!r}", line_no, offset + pos + 1)
        pos += 1


def parse_layout(text: str) -> Layout:
    """
    Parse a layout document.

    Raises:
        LayoutSyntaxError: malformed line (with line and column)
        IndexOutOfRangeError: block or disk index beyond the declared sizes
        DegenerateCellError: a cell repeats a block
    """
    headers: Dict[str, str] = {}
    disks: Dict[int, Tuple[Cell, ...]] = {}
    line_no = 0

    for line_no, raw_line in enumerate(text.splitlines(), 1):
        line = raw_line.split("#", 1)[0].rstrip()
        if not line.strip():
            continue

        header = HEADER_RE.match(line)
        if header:
            key, value = header.groups()
            if key in headers:
                raise LayoutSyntaxError(f"duplicate '{key}' header", line_no, 1)
            if disks:
                raise LayoutSyntaxError(f"'{key}' header after disk lines", line_no, 1)
            if key == "name":
                if not NAME_RE.match(value):
                    raise LayoutSyntaxError(f"invalid layout name {value!r}", line_no, header.start(2) + 1)
            elif not value.isdigit() or int(value) < 1:
                raise LayoutSyntaxError(f"'{key}' must be a positive integer, got {value!r}",
                                        line_no, header.start(2) + 1)
            headers[key] = value
            continue

        disk_line = DISK_RE.match(line)
        if not disk_line:
            raise LayoutSyntaxError("expected 'name =', 'disks =', 'blocks =' or 'disk <d>:'",
                                    line_no, len(line) - len(line.lstrip()) + 1)

        declared_blocks = int(headers["blocks"]) if "blocks" in headers else None
        cells = _parse_cells(line[disk_line.end():], disk_line.end(), declared_blocks, line_no)

        if "disks" not in headers or "blocks" not in headers:
            raise LayoutSyntaxError("'disks' and 'blocks' must be declared before disk lines", line_no, 1)
        n_disks = int(headers["disks"])

        disk = int(disk_line.group(1))
        if disk >= n_disks:
            raise IndexOutOfRangeError(f"line {line_no}: disk {disk} >= declared disks = {n_disks}")
        if disk in disks:
            raise LayoutSyntaxError(f"disk {disk} listed twice", line_no, disk_line.start(1) + 1)

        disks[disk] = cells

    if "disks" not in headers or "blocks" not in headers:
        raise LayoutSyntaxError("missing 'disks' or 'blocks' header", max(line_no, 1))
    n_disks, n_blocks = int(headers["disks"]), int(headers["blocks"])

    missing = [d for d in range(n_disks) if d not in disks]
    if missing:
        raise LayoutSyntaxError(f"disks {missing} have no 'disk <d>:' line", line_no + 1)

    layout = Layout(name=headers.get("name", DEFAULT_NAME), n_disks=n_disks, n_blocks=n_blocks,
                    grid=tuple(disks[d] for d in range(n_disks)))

    unstored = sorted(layout.unstored_blocks())
    if unstored:
        message = f"Layout {layout.name}: blocks {unstored} are never stored as a singleton"
        logger.warning(message)
        warnings.warn(message, UnstoredBlockWarning, stacklevel=2)

    logger.info(f"Parsed layout {layout.name}: {n_disks} disks, {n_blocks} blocks, {layout.n_cells} cells")
    return layout


def cell_labels(layout: Layout) -> List[List[str]]:
    """
    Conventional labels per disk: first copy B_i, second M_i, third M'_i.

    Copies are counted in (row, disk) order so that the row-0 primaries of
    the rotational layouts are the B_i.
    """
    copies: Dict[int, int] = {}
    labels: List[List[str]] = [[""] * len(cells) for cells in layout.grid]
    depth = max((len(cells) for cells in layout.grid), default=0)

    for row in range(depth):
        for disk, cells in enumerate(layout.grid):
            if row >= len(cells):
                continue
            cell = cells[row]
            if cell.is_parity:
                labels[disk][row] = "^".join(f"B_{b}" for b in cell.sorted_members)
                continue
            block = cell.sorted_members[0]
            copies[block] = copies.get(block, 0) + 1
            count = copies[block]
            labels[disk][row] = f"B_{block}" if count == 1 else "M" + "'" * (count - 2) + f"_{block}"
    return labels


def _safe_name(name: str) -> str:
    cleaned = re.sub(r"[^A-Za-z0-9_.\-]", "_", name) or DEFAULT_NAME
    return cleaned if NAME_RE.match(cleaned) else f"_{cleaned}"


def serialize_layout(layout: Layout) -> str:
    """Canonical, byte-deterministic document for a layout."""
    lines = [
        f"name = {_safe_name(layout.name)}",
        f"disks = {layout.n_disks}",
        f"blocks = {layout.n_blocks}",
    ]
    labels = cell_labels(layout)
    for disk, cells in enumerate(layout.grid):
        lines.append(f"# D{disk}: " + ", ".join(labels[disk]))
        lines.append(f"disk {disk}: " + ", ".join(cell.token for cell in cells))
    return "\n".join(lines) + "\n"

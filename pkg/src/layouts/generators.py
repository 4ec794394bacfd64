import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, List, Tuple

from src.exceptions import ConfigError, DegenerateCellError, UnsupportedSizeError
from src.models.layout import Cell, Layout

logger = logging.getLogger(__name__)

MIN_DISKS = 5


def _check_size(n: int) -> None:
    if n < MIN_DISKS:
        raise UnsupportedSizeError(
            f"Rotational layouts need at least {MIN_DISKS} disks, got {n} (offset patterns collapse below 5)")


@dataclass(frozen=True)
class RotationalPattern:
    """
    Row offsets for disk 0; disk d stores the same cells with every block shifted by +d (mod n).

    rows[r] is the tuple of offsets whose blocks are XORed in row r, so
    ((0,), (-1,), (-2,)) is RR: B_d, then copies of B_{d-1} and B_{d-2}.
    """
    rows: Tuple[Tuple[int, ...], ...]

    def build(self, name: str, n: int) -> Layout:
        _check_size(n)
        grid = []
        for disk in range(n):
            cells = []
            for offsets in self.rows:
                try:
                    cells.append(Cell.of(*((disk + o) % n for o in offsets)))
                except DegenerateCellError:
                    raise DegenerateCellError(
                        f"{name}: offsets {offsets} coincide modulo {n} (XOR of a block with itself)")
            grid.append(tuple(cells))
        layout = Layout(name=name, n_disks=n, n_blocks=n, grid=tuple(grid))
        logger.debug(f"Built {name} on {n} disks with {layout.n_cells} cells")
        return layout


class BaseSchemeGenerator(ABC):
    """Abstract base class for named stripe layouts"""

    @abstractmethod
    def get_scheme_name(self) -> str:
        pass

    @abstractmethod
    def pattern(self) -> RotationalPattern:
        pass

    def generate(self, n: int) -> Layout:
        return self.pattern().build(self.get_scheme_name(), n)


class FixedPatternGenerator(BaseSchemeGenerator):
    def __init__(self, name: str, rows: Tuple[Tuple[int, ...], ...]):
        self._name = name
        self._pattern = RotationalPattern(rows)

    def get_scheme_name(self) -> str:
        return self._name

    def pattern(self) -> RotationalPattern:
        return self._pattern


class SchemeRegistry:
    """Registry for named layout generators"""

    _generators: Dict[str, BaseSchemeGenerator] = {}

    @classmethod
    def register(cls, generator: BaseSchemeGenerator):
        cls._generators[generator.get_scheme_name()] = generator
        logger.debug(f"Registered layout scheme {generator.get_scheme_name()}")

    @classmethod
    def get_generator(cls, scheme: str) -> BaseSchemeGenerator:
        key = scheme.strip().upper()
        if key not in cls._generators:
            raise ConfigError(
                f"Unknown scheme {scheme!r}; known schemes: {', '.join(cls.names())}")
        return cls._generators[key]

    @classmethod
    def names(cls) -> List[str]:
        return list(cls._generators)


# the five named schemes as offset patterns
SchemeRegistry.register(FixedPatternGenerator("RR", ((0,), (-1,), (-2,))))
SchemeRegistry.register(FixedPatternGenerator("PP1", ((0,), (1, 2), (3, 4))))
SchemeRegistry.register(FixedPatternGenerator("PP2", ((0,), (0, 2), (3, 4))))
SchemeRegistry.register(FixedPatternGenerator("RP1", ((0,), (-1,), (0, 2))))
SchemeRegistry.register(FixedPatternGenerator("RP2", ((0,), (-1,), (1, 2))))


def list_schemes() -> List[str]:
    return SchemeRegistry.names()


def generate_named(scheme: str, n: int) -> Layout:
    """Generate RR, PP1, PP2, RP1 or RP2 on n >= 5 disks (one stripe of n blocks)."""
    layout = SchemeRegistry.get_generator(scheme).generate(n)
    logger.info(f"Generated {layout.name} layout on {n} disks")
    return layout


def generate_pp(n: int, a1: int, b1: int, a2: int, b2: int) -> Layout:
    """Parity-parity family: disk d holds B_d, B_{d+a1} ^ B_{d+b1}, B_{d+a2} ^ B_{d+b2}."""
    _check_size(n)
    for a, b in ((a1, b1), (a2, b2)):
        if (a - b) % n == 0:
            raise DegenerateCellError(f"Parity offsets {a} and {b} coincide modulo {n}")

    name = f"PP_{a1}_{b1}_{a2}_{b2}"
    return RotationalPattern(((0,), (a1, b1), (a2, b2))).build(name, n)


def generate_rp(n: int, rho: int, a: int, b: int) -> Layout:
    """Replica-parity family: disk d holds B_d, a copy of B_{d-rho}, and B_{d+a} ^ B_{d+b}."""
    _check_size(n)
    if rho % n == 0:
        raise DegenerateCellError(f"Replica offset {rho} puts the copy on the primary's disk")
    if (a - b) % n == 0:
        raise DegenerateCellError(f"Parity offsets {a} and {b} coincide modulo {n}")

    name = f"RP_{rho}_{a}_{b}"
    return RotationalPattern(((0,), (-rho,), (a, b))).build(name, n)

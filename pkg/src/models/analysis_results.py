from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from src.exceptions import (IndexOutOfRangeError, InvalidProbabilityError, InvalidStructureError,
                            InvalidTimeError, ConfigError)
from src.models.layout import BlockId, Cell, Layout
from src.utils.helpers import bits_to_mask, mask_to_bits


@dataclass(frozen=True)
class AliveSet:
    """Disks that survive one failure scenario; the complement is the failed set."""
    n_disks: int
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.n_disks:
            raise IndexOutOfRangeError(f"Alive set {bin(self.mask)} exceeds {self.n_disks} disks")

    @classmethod
    def of(cls, n_disks: int, disks: Iterable[int]) -> 'AliveSet':
        disks = list(disks)
        bad = [d for d in disks if d < 0 or d >= n_disks]
        if bad:
            raise IndexOutOfRangeError(f"Disk indices {bad} outside [0, {n_disks})")
        return cls(n_disks=n_disks, mask=bits_to_mask(disks))

    @classmethod
    def everything(cls, n_disks: int) -> 'AliveSet':
        return cls(n_disks=n_disks, mask=(1 << n_disks) - 1)

    @property
    def disks(self) -> Tuple[int, ...]:
        return tuple(sorted(mask_to_bits(self.mask)))

    @property
    def failed_mask(self) -> int:
        return ((1 << self.n_disks) - 1) & ~self.mask

    @property
    def label(self) -> str:
        """Row label, e.g. 'D0 D2'."""
        return " ".join(f"D{d}" for d in self.disks) or "-"

    def shifted(self, offset: int) -> 'AliveSet':
        return AliveSet.of(self.n_disks, ((d + offset) % self.n_disks for d in self.disks))


@dataclass(frozen=True)
class RecoveryStep:
    disk: int
    row: int
    cell: Cell


@dataclass(frozen=True)
class RecoveryPlan:
    """Cells on alive disks whose XOR is the target block."""
    target: BlockId
    steps: Tuple[RecoveryStep, ...]

    def xor_members(self) -> frozenset:
        acc = frozenset()
        for step in self.steps:
            acc = acc ^ step.cell.members
        return acc

    def replay(self, contents: Sequence[int]) -> int:
        """XOR the materialised step cells; contents[b] is the bit-string of block b."""
        value = 0
        for step in self.steps:
            for b in step.cell.members:
                value ^= contents[b]
        return value

    def narrate(self) -> List[str]:
        lines = []
        running = frozenset()
        for step in self.steps:
            running = running ^ step.cell.members
            have = " ^ ".join(f"B_{b}" for b in sorted(running)) or "0"
            lines.append(f"take {step.cell.token} from D{step.disk} row {step.row} -> {have}")
        lines.append(f"B_{self.target} recovered in {len(self.steps)} step(s)")
        return lines


@dataclass
class CoverageReport:
    layout_name: str
    n_disks: int
    f: int
    total: int
    recovered: int
    failing: List[AliveSet] = field(default_factory=list)

    @property
    def coverage(self) -> Fraction:
        return Fraction(self.recovered, self.total)

    @property
    def coverage_fraction(self) -> float:
        return self.recovered / self.total

    @property
    def is_total(self) -> bool:
        return self.recovered == self.total

    def to_dict(self) -> Dict[str, Any]:
        return {
            "layout": self.layout_name,
            "n": self.n_disks,
            "f": self.f,
            "total": self.total,
            "recovered": self.recovered,
            "failing": [list(alive.disks) for alive in self.failing],
        }


@dataclass(frozen=True)
class FtDegree:
    layout_name: str
    degree: int


@dataclass(frozen=True)
class DiskModel:
    """I.i.d. disks with exponential lifetimes."""
    failure_rate: float = 1e-4

    def __post_init__(self):
        if not self.failure_rate >= 0:
            raise ConfigError(f"Failure rate must be >= 0, got {self.failure_rate}")

    def survival(self, t):
        """p(t) = exp(-lambda t) for scalar or array t (hours)."""
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise InvalidTimeError(f"Mission time must be >= 0, got {t.min()}")
        return np.exp(-self.failure_rate * t)


@dataclass(frozen=True)
class PathSet:
    """Parallel paths, each a series chain of component reliabilities."""
    paths: Tuple[Tuple[float, ...], ...]

    def __post_init__(self):
        if not self.paths:
            raise InvalidStructureError("A parallel-series structure needs at least one path")
        for i, path in enumerate(self.paths):
            if not path:
                raise InvalidStructureError(f"Path {i} has no components")
            for rho in path:
                if not 0.0 <= rho <= 1.0:
                    raise InvalidProbabilityError(f"Component reliability {rho} outside [0, 1]")

    @classmethod
    def of(cls, paths: Iterable[Iterable[float]]) -> 'PathSet':
        return cls(tuple(tuple(float(rho) for rho in path) for path in paths))


@dataclass(frozen=True)
class CurveMode:
    """exact | koon(k) | guaranteed | naive-rbd"""
    kind: str
    k: Optional[int] = None

    KINDS = ("exact", "koon", "guaranteed", "naive-rbd")

    @classmethod
    def parse(cls, text: str) -> 'CurveMode':
        spec = text.strip().lower()
        if spec in ("exact", "guaranteed", "naive-rbd"):
            return cls(spec)
        for prefix, suffix in (("koon:", ""), ("koon(", ")")):
            if spec.startswith(prefix) and spec.endswith(suffix):
                body = spec[len(prefix):len(spec) - len(suffix)]
                try:
                    return cls("koon", int(body))
                except ValueError:
                    break
        raise ConfigError(f"Unknown reliability mode {text!r}; use exact, koon:K, guaranteed or naive-rbd")

    @property
    def label(self) -> str:
        return f"koon({self.k})" if self.kind == "koon" else self.kind


@dataclass
class ReliabilityCurve:
    layout_name: str
    mode: str
    t_grid: Tuple[float, ...]
    values: Tuple[float, ...]

    def records(self) -> List[Dict[str, Any]]:
        return [
            {"t_hours": t, "layout": self.layout_name, "mode": self.mode, "reliability": v}
            for t, v in zip(self.t_grid, self.values)
        ]


class MonteCarloResult(NamedTuple):
    estimate: float
    stderr: float


@dataclass(frozen=True)
class CandidateScore:
    """
    Score of one candidate layout in an ordering search.

    Ranking: ft degree descending, then coverage at degree + 1 descending,
    then key ascending.
    """
    descriptor: Tuple[int, ...]
    layout: Layout
    ft_degree: int
    recovered: int
    total: int
    key: Tuple[int, ...]

    @property
    def coverage(self) -> Fraction:
        return Fraction(self.recovered, self.total) if self.total else Fraction(1)

    @property
    def rank_key(self) -> Tuple:
        return -self.ft_degree, -self.coverage, self.key

    @property
    def coverage_label(self) -> str:
        return f"{self.recovered}/{self.total}"


@dataclass
class ReplicationSearchResult:
    best: CandidateScore
    ranked: List[CandidateScore]
    placements_enumerated: int
    distinct_classes: int
    max_ft_degree: int
    max_pair_recovered: int
    pair_total: int
    reaches_full_pair_coverage: bool

    @property
    def max_pair_coverage(self) -> Fraction:
        return Fraction(self.max_pair_recovered, self.pair_total)

    @property
    def certificate(self) -> Dict[str, Any]:
        return {
            "placements_enumerated": self.placements_enumerated,
            "distinct_classes": self.distinct_classes,
            "max_ft_degree": self.max_ft_degree,
            "max_f3_coverage": f"{self.max_pair_recovered}/{self.pair_total}",
            "full_pair_coverage_found": self.reaches_full_pair_coverage,
        }

"""
raidlay command line.

    raidlay layout --scheme RR,PP1 --n 5
    raidlay ft --scheme RR,PP1,RP1 --n 5 --failures 3
    raidlay rel --scheme PP1,PP2 --lambda 1e-4 --t 0:10000:100 --mode exact --format csv
    raidlay mc --scheme PP2 --p 0.9 --trials 1000000 --seed 42
    raidlay search replication

Exit codes: 0 success, 1 invalid input, 2 capacity guard.
"""
import argparse
import logging
import sys
import warnings
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from src import config
from src.analysis_pipeline import SEARCH_KINDS, LayoutAnalysisPipeline
from src.exceptions import (CapacityError, ConfigError, InvalidProbabilityError, InvalidTrialsError,
                            RaidLayoutError, UnstoredBlockWarning)
from src.models.analysis_results import CurveMode, DiskModel
from src.utils.file_utils import OutputFormat, get_output_format, write_document
from src.utils.helpers import parse_time_grid
from src.utils.log import init_logging

logger = logging.getLogger(__name__)

COMMANDS = ("layout", "ft", "rel", "mc", "search")
LAYOUT_COMMANDS = ("layout", "ft", "rel", "mc")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_CAPACITY = 2


@dataclass
class RunConfig:
    """One parsed invocation."""
    command: str
    schemes: List[str] = field(default_factory=list)
    layout_file: Optional[str] = None
    n: int = config.DEFAULT_N_DISKS
    failure_rate: float = config.DEFAULT_FAILURE_RATE
    t_grid: str = config.DEFAULT_T_GRID
    modes: List[str] = field(default_factory=lambda: ["exact"])
    p: Optional[float] = None
    failures: Optional[int] = None
    trials: int = config.DEFAULT_TRIALS
    seed: int = config.DEFAULT_SEED
    search_kind: Optional[str] = None
    out: Optional[str] = None
    fmt: Optional[str] = None
    progress: bool = False

    @property
    def output_format(self) -> OutputFormat:
        if self.fmt is not None:
            return get_output_format(self.fmt)
        if self.out is not None:
            return get_output_format(self.out)
        return OutputFormat.TABLE

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"Unknown command {self.command!r}; use one of {', '.join(COMMANDS)}")

        if self.command in LAYOUT_COMMANDS:
            if bool(self.schemes) == (self.layout_file is not None):
                raise ConfigError("Give exactly one of --scheme or --layout-file")
            names = [scheme.strip().upper() for scheme in self.schemes]
            repeated = sorted({name for name in names if names.count(name) > 1})
            if repeated:
                raise ConfigError(f"Scheme listed more than once: {', '.join(repeated)}")

        if self.command == "search" and self.search_kind not in SEARCH_KINDS:
            raise ConfigError(f"Unknown search {self.search_kind!r}; use one of {', '.join(SEARCH_KINDS)}")

        if self.command == "rel":
            for mode in self.modes:
                CurveMode.parse(mode)
            parse_time_grid(self.t_grid)

        if self.command in ("rel", "mc"):
            DiskModel(self.failure_rate)
            if self.p is not None and not 0.0 <= self.p <= 1.0:
                raise InvalidProbabilityError(f"--p must lie in [0, 1], got {self.p}")

        if self.command == "mc":
            if self.trials < 1:
                raise InvalidTrialsError(f"--trials must be at least 1, got {self.trials}")
            if self.seed < 0:
                raise ConfigError(f"--seed must be non-negative, got {self.seed}")

    def mission_probability(self) -> float:
        """--p, else the per-disk survival at the end of the --t grid."""
        if self.p is not None:
            return self.p
        horizon = parse_time_grid(self.t_grid)[-1]
        return float(DiskModel(self.failure_rate).survival(horizon))


class RaidlayArgumentParser(argparse.ArgumentParser):
    """Usage errors are invalid input: one line on stderr, exit 1."""

    def error(self, message: str):
        print(f"error: {message}", file=sys.stderr)
        sys.exit(EXIT_INVALID)


def _comma_list(value: str) -> List[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=config.DEFAULT_N_DISKS, help="number of disks (default 5)")
    common.add_argument("--format", dest="fmt", choices=[f.value for f in OutputFormat],
                        help="output format (default from --out extension, else table)")
    common.add_argument("--out", help="write the document to this path instead of stdout")
    common.add_argument("--log-level", help=f"overrides {config.LOG_LEVEL_ENV}")

    layouts = argparse.ArgumentParser(add_help=False)
    layouts.add_argument("--scheme", type=_comma_list, default=[],
                         help="comma list of RR, PP1, PP2, RP1, RP2")
    layouts.add_argument("--layout-file", help="layout document to analyse instead of a named scheme")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--lambda", dest="failure_rate", type=float, default=config.DEFAULT_FAILURE_RATE,
                       help="disk failure rate per hour (default 1e-4)")
    model.add_argument("--t", dest="t_grid", default=config.DEFAULT_T_GRID,
                       help="mission time grid start:stop:step in hours (default 0:10000:100)")
    model.add_argument("--p", type=float, help="per-disk survival probability")

    parser = RaidlayArgumentParser(prog="raidlay", description="Fault tolerance and reliability of RAID stripe layouts")
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("layout", parents=[common, layouts], help="print or validate layouts")

    ft = commands.add_parser("ft", parents=[common, layouts], help="failure scenario tables and ft degree")
    ft.add_argument("--failures", type=int, help="number of failed disks; omit for a summary over all counts")

    rel = commands.add_parser("rel", parents=[common, layouts, model], help="reliability curves or points")
    rel.add_argument("--mode", type=_comma_list, default=["exact"],
                     help="comma list of exact, koon:K, guaranteed, naive-rbd")

    mc = commands.add_parser("mc", parents=[common, layouts, model], help="Monte Carlo reliability")
    mc.add_argument("--trials", type=int, default=config.DEFAULT_TRIALS)
    mc.add_argument("--seed", type=int, default=config.DEFAULT_SEED)

    search = commands.add_parser("search", parents=[common], help="exhaustive ordering searches")
    search.add_argument("kind", choices=SEARCH_KINDS)
    search.add_argument("--progress", action="store_true", help="show progress bars on stderr")

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        schemes=getattr(args, "scheme", []),
        layout_file=getattr(args, "layout_file", None),
        n=args.n,
        failure_rate=getattr(args, "failure_rate", config.DEFAULT_FAILURE_RATE),
        t_grid=getattr(args, "t_grid", config.DEFAULT_T_GRID),
        modes=getattr(args, "mode", ["exact"]),
        p=getattr(args, "p", None),
        failures=getattr(args, "failures", None),
        trials=getattr(args, "trials", config.DEFAULT_TRIALS),
        seed=getattr(args, "seed", config.DEFAULT_SEED),
        search_kind=getattr(args, "kind", None),
        out=args.out,
        fmt=args.fmt,
        progress=getattr(args, "progress", False),
    )


def _document(run_config: RunConfig) -> str:
    pipeline = LayoutAnalysisPipeline(fmt=run_config.output_format, progress=run_config.progress)

    if run_config.command == "search":
        return pipeline.search_document(run_config.search_kind, run_config.n)

    with warnings.catch_warnings():
        # already logged by the parser
        warnings.simplefilter("ignore", UnstoredBlockWarning)
        layouts = pipeline.load_layouts(run_config.schemes, run_config.n, run_config.layout_file)

    if run_config.command == "layout":
        return pipeline.layout_document(layouts)
    if run_config.command == "ft":
        return pipeline.ft_document(layouts, run_config.failures)
    if run_config.command == "rel":
        if run_config.p is not None:
            return pipeline.point_document(layouts, run_config.p)
        modes = [CurveMode.parse(mode) for mode in run_config.modes]
        t_grid: np.ndarray = parse_time_grid(run_config.t_grid)
        return pipeline.rel_document(layouts, DiskModel(run_config.failure_rate), t_grid, modes)
    return pipeline.mc_document(layouts, run_config.mission_probability(), run_config.trials, run_config.seed)


def run(run_config: RunConfig) -> int:
    """Validate, run and emit; returns the process exit code."""
    try:
        run_config.validate()
        document = _document(run_config)
        write_document(document, run_config.out)
    except CapacityError as e:
        logger.debug("Capacity guard tripped", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    except RaidLayoutError as e:
        logger.debug("Invalid input", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as e:
        logger.debug("Output failed", exc_info=True)
        print(f"error: cannot write {run_config.out}: {e.strerror or e}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.log_level:
        init_logging(args.log_level)
    return run(config_from_args(args))

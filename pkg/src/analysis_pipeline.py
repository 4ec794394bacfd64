import logging
from typing import List, Optional, Sequence

import numpy as np

from src import reporting
from src.analysis.fault_tolerance import coverage, coverage_profile, ft_degree, ft_table
from src.analysis.reliability import (exact_reliability, monte_carlo_reliability, naive_rbd_reliability,
                                      reliability_at, reliability_curve, resolve_mode)
from src.analysis.search import search_pp_offsets, search_replication_placements, search_rp_offsets
from src.config import max_exact_disks
from src.exceptions import ConfigError
from src.layouts.generators import generate_named
from src.layouts.layout_file import parse_layout
from src.models.analysis_results import CurveMode, DiskModel
from src.models.layout import Layout
from src.utils.file_utils import OutputFormat

logger = logging.getLogger(__name__)

SEARCH_KINDS = ("pp", "rp", "replication")


class LayoutAnalysisPipeline:
    """
    Runs one analysis command end to end:
    1. Resolve layouts (named schemes or a layout document)
    2. Run the analysis from src.analysis
    3. Render the document in the requested format
    """

    def __init__(self, fmt: OutputFormat = OutputFormat.TABLE, progress: bool = False):
        self.fmt = fmt
        self.progress = progress

    @staticmethod
    def load_layouts(schemes: Sequence[str] = (), n: int = 5, layout_file: Optional[str] = None) -> List[Layout]:
        """Generate each named scheme on n disks, or parse a layout document."""
        if layout_file is not None:
            logger.info(f"Reading layout document {layout_file}")
            try:
                with open(layout_file, "r", encoding="utf-8") as f:
                    text = f.read()
            except OSError as e:
                raise ConfigError(f"Cannot read layout file {layout_file}: {e.strerror or e}")
            except UnicodeDecodeError as e:
                raise ConfigError(f"Layout file {layout_file} is not UTF-8 text (byte {e.start})")
            return [parse_layout(text)]

        if not schemes:
            raise ConfigError("No scheme given")
        return [generate_named(scheme, n) for scheme in schemes]

    def layout_document(self, layouts: Sequence[Layout]) -> str:
        return reporting.render_layouts(layouts, self.fmt)

    def ft_document(self, layouts: Sequence[Layout], failures: Optional[int] = None) -> str:
        """Side-by-side scenario table for one failure count, or a full degree/coverage summary."""
        if failures is None:
            profiles = {layout.name: (ft_degree(layout), coverage_profile(layout)) for layout in layouts}
            return reporting.render_ft_summary(profiles, self.fmt)

        tables = {layout.name: ft_table(layout, failures) for layout in layouts}
        reports = [coverage(layout, failures) for layout in layouts]
        for report in reports:
            logger.info(f"{report.layout_name} f={failures}: {report.recovered}/{report.total} recoverable")
        return reporting.render_ft_table(tables, reports, failures, self.fmt)

    def rel_document(self, layouts: Sequence[Layout], model: DiskModel, t_grid: np.ndarray,
                     modes: Sequence[CurveMode]) -> str:
        curves = [reliability_curve(layout, model, t_grid, mode) for layout in layouts for mode in modes]
        return reporting.render_curves(curves, self.fmt)

    def point_document(self, layouts: Sequence[Layout], p: float) -> str:
        """exact, guaranteed and naive-rbd reliability at one per-disk survival probability."""
        points = []
        for layout in layouts:
            guaranteed = resolve_mode(layout, CurveMode("guaranteed"))
            exact = exact_reliability(layout, p)
            naive = naive_rbd_reliability(layout, p)
            points.append({
                "layout": layout.name,
                "p": float(p),
                "exact": exact,
                "guaranteed_mode": guaranteed.label,
                "guaranteed": reliability_at(layout, p, guaranteed),
                "naive_rbd": naive,
                "naive_minus_exact": naive - exact,
            })
        return reporting.render_points(points, self.fmt)

    def mc_document(self, layouts: Sequence[Layout], p: float, trials: int, seed: int) -> str:
        records = []
        for layout in layouts:
            result = monte_carlo_reliability(layout, p, trials, seed)
            exact = exact_reliability(layout, p) if layout.n_disks <= max_exact_disks() else None
            records.append(reporting.monte_carlo_record(layout, p, trials, seed, result, exact))
        return reporting.render_monte_carlo(records, self.fmt)

    def search_document(self, kind: str, n: int) -> str:
        logger.info(f"Starting {kind} search on {n} disks")
        if kind == "pp":
            return reporting.render_ranking(search_pp_offsets(n), self.fmt)
        if kind == "rp":
            return reporting.render_ranking(search_rp_offsets(n), self.fmt)
        if kind == "replication":
            return reporting.render_replication(search_replication_placements(n, progress=self.progress), self.fmt)
        raise ConfigError(f"Unknown search {kind!r}; use one of {', '.join(SEARCH_KINDS)}")

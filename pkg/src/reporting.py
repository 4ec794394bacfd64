"""
Rendering of analysis results into emitted documents.

Every function returns the full document as text. Numbers go through
format_number so that identical results give identical bytes.
"""
import io
import json
import logging
from typing import Any, Dict, List, Mapping, Sequence, Tuple

import pandas as pd
from tabulate import tabulate

from src.config import REPORT_SIGNIFICANT_DIGITS
from src.layouts.layout_file import serialize_layout
from src.models.analysis_results import (AliveSet, CandidateScore, CoverageReport, FtDegree, MonteCarloResult,
                                         ReliabilityCurve, ReplicationSearchResult)
from src.models.layout import Layout
from src.utils.file_utils import OutputFormat
from src.utils.helpers import format_number

logger = logging.getLogger(__name__)

CHECK = "✓"
CROSS = "x"
TABLE_FORMAT = "simple"


def _number(value: float) -> str:
    return format_number(value, REPORT_SIGNIFICANT_DIGITS)


def _rounded(value: float) -> float:
    return float(_number(value))


def _json(document: Any) -> str:
    return json.dumps(document, indent=2, ensure_ascii=False)


def _csv(frame: pd.DataFrame) -> str:
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, lineterminator="\n")
    return buffer.getvalue()


def _table(rows: Sequence[Sequence[Any]], headers: Sequence[str]) -> str:
    return tabulate(rows, headers=headers, tablefmt=TABLE_FORMAT, disable_numparse=True)


# --- layouts -----------------------------------------------------------------

def layout_record(layout: Layout) -> Dict[str, Any]:
    return {
        "name": layout.name,
        "disks": layout.n_disks,
        "blocks": layout.n_blocks,
        "grid": [[list(cell.sorted_members) for cell in cells] for cells in layout.grid],
        "redundancy_cells": layout.redundancy_cells,
        "replication_factor": _rounded(layout.replication_factor),
        "unstored_blocks": sorted(layout.unstored_blocks()),
    }


def render_layouts(layouts: Sequence[Layout], fmt: OutputFormat) -> str:
    if fmt == OutputFormat.JSON:
        return _json([layout_record(layout) for layout in layouts])

    if fmt == OutputFormat.CSV:
        rows = [{"layout": layout.name, "disk": disk, "row": row, "cell": cell.token}
                for layout in layouts for disk, row, cell in layout.cells()]
        return _csv(pd.DataFrame(rows, columns=["layout", "disk", "row", "cell"]))

    return "\n".join(serialize_layout(layout) for layout in layouts)


# --- fault tolerance ---------------------------------------------------------

def render_ft_table(tables: Mapping[str, List[Tuple[AliveSet, bool]]], reports: Sequence[CoverageReport],
                    f: int, fmt: OutputFormat) -> str:
    """Side-by-side scenario table: one row per alive set, one column per layout."""
    if fmt == OutputFormat.JSON:
        return _json([report.to_dict() for report in reports])

    names = list(tables)
    if fmt == OutputFormat.CSV:
        rows = [{"layout": name, "f": f, "alive": alive.label, "recoverable": int(ok)}
                for name in names for alive, ok in tables[name]]
        return _csv(pd.DataFrame(rows, columns=["layout", "f", "alive", "recoverable"]))

    first = tables[names[0]]
    rows = []
    for i, (alive, _) in enumerate(first):
        rows.append([alive.label] + [CHECK if tables[name][i][1] else CROSS for name in names])
    totals = [f"{report.recovered}/{report.total}" for report in reports]
    rows.append(["recovered"] + totals)
    return _table(rows, headers=["Active Disks"] + names)


def render_ft_summary(profiles: Mapping[str, Tuple[FtDegree, List[CoverageReport]]], fmt: OutputFormat) -> str:
    """Degree of fault tolerance and coverage at every failure count, per layout."""
    if fmt == OutputFormat.JSON:
        return _json([
            {
                "layout": name,
                "ft_degree": degree.degree,
                "coverage": [{k: v for k, v in report.to_dict().items() if k != "failing"} for report in reports],
            }
            for name, (degree, reports) in profiles.items()
        ])

    if fmt == OutputFormat.CSV:
        rows = [{"layout": name, "ft_degree": degree.degree, "f": report.f, "recovered": report.recovered,
                 "total": report.total, "coverage": _number(report.coverage_fraction)}
                for name, (degree, reports) in profiles.items() for report in reports]
        return _csv(pd.DataFrame(rows, columns=["layout", "ft_degree", "f", "recovered", "total", "coverage"]))

    n_max = max(len(reports) for _, reports in profiles.values())
    headers = ["Layout", "FT"] + [f"f={f}" for f in range(n_max)]
    rows = []
    for name, (degree, reports) in profiles.items():
        cells = [f"{r.recovered}/{r.total}" for r in reports]
        rows.append([name, str(degree.degree)] + cells + [""] * (n_max - len(cells)))
    return _table(rows, headers=headers)


# --- reliability -------------------------------------------------------------

def render_curves(curves: Sequence[ReliabilityCurve], fmt: OutputFormat) -> str:
    if fmt == OutputFormat.JSON:
        return _json([
            {
                "layout": curve.layout_name,
                "mode": curve.mode,
                "t_hours": [_rounded(t) for t in curve.t_grid],
                "reliability": [_rounded(v) for v in curve.values],
            }
            for curve in curves
        ])

    records = [record for curve in curves for record in curve.records()]
    frame = pd.DataFrame(records, columns=["t_hours", "layout", "mode", "reliability"])
    frame["t_hours"] = frame["t_hours"].map(_number)
    frame["reliability"] = frame["reliability"].map(_number)

    if fmt == OutputFormat.CSV:
        return _csv(frame)

    # wide view, one column per curve in input order
    series = [f"{curve.layout_name} {curve.mode}" for curve in curves]
    times = [_number(t) for t in curves[0].t_grid]
    rows = [[t] + [_number(curve.values[i]) for curve in curves] for i, t in enumerate(times)]
    return _table(rows, headers=["t_hours"] + series)


def render_points(points: Sequence[Dict[str, Any]], fmt: OutputFormat) -> str:
    """Point reliabilities: one record per layout with exact, guaranteed and naive-rbd values."""
    columns = ["layout", "p", "exact", "guaranteed_mode", "guaranteed", "naive_rbd", "naive_minus_exact"]
    if fmt == OutputFormat.JSON:
        return _json([{k: (_rounded(v) if isinstance(v, float) else v) for k, v in point.items()}
                      for point in points])

    rows = [[_number(v) if isinstance(v, float) else v for v in (point[c] for c in columns)] for point in points]
    if fmt == OutputFormat.CSV:
        return _csv(pd.DataFrame(rows, columns=columns))
    return _table(rows, headers=columns)


def render_monte_carlo(records: Sequence[Dict[str, Any]], fmt: OutputFormat) -> str:
    columns = ["layout", "p", "trials", "seed", "estimate", "stderr", "exact"]
    if fmt == OutputFormat.JSON:
        return _json([{k: (_rounded(v) if isinstance(v, float) else v) for k, v in record.items()}
                      for record in records])

    rows = []
    for record in records:
        row = []
        for column in columns:
            value = record.get(column)
            row.append("" if value is None else _number(value) if isinstance(value, float) else value)
        rows.append(row)
    if fmt == OutputFormat.CSV:
        return _csv(pd.DataFrame(rows, columns=columns))
    return _table(rows, headers=columns)


def monte_carlo_record(layout: Layout, p: float, trials: int, seed: int, result: MonteCarloResult,
                       exact: Any = None) -> Dict[str, Any]:
    return {
        "layout": layout.name,
        "p": float(p),
        "trials": trials,
        "seed": seed,
        "estimate": float(result.estimate),
        "stderr": float(result.stderr),
        "exact": None if exact is None else float(exact),
    }


# --- search ------------------------------------------------------------------

def _candidate_record(position: int, score: CandidateScore) -> Dict[str, Any]:
    return {
        "rank": position,
        "layout": score.layout.name,
        "descriptor": list(score.descriptor),
        "ft_degree": score.ft_degree,
        "next_f_recovered": score.recovered,
        "next_f_total": score.total,
    }


def render_ranking(ranked: Sequence[CandidateScore], fmt: OutputFormat) -> str:
    records = [_candidate_record(i, score) for i, score in enumerate(ranked, 1)]
    if fmt == OutputFormat.JSON:
        return _json(records)

    rows = [[r["rank"], r["layout"], " ".join(str(x) for x in r["descriptor"]), r["ft_degree"],
             f"{r['next_f_recovered']}/{r['next_f_total']}"] for r in records]
    headers = ["rank", "layout", "descriptor", "ft_degree", "coverage_next_f"]
    if fmt == OutputFormat.CSV:
        return _csv(pd.DataFrame(rows, columns=headers))
    return _table(rows, headers=headers)


def render_replication(result: ReplicationSearchResult, fmt: OutputFormat) -> str:
    certificate = result.certificate
    if fmt == OutputFormat.JSON:
        return _json({
            "certificate": certificate,
            "best": _candidate_record(1, result.best),
            "classes": [_candidate_record(i, s) for i, s in enumerate(result.ranked, 1)],
        })

    if fmt == OutputFormat.CSV:
        return _csv(pd.DataFrame([certificate], columns=list(certificate)))

    summary = _table([[k, str(v)] for k, v in certificate.items()], headers=["certificate", "value"])
    return summary + "\n\n" + render_ranking(result.ranked, fmt)

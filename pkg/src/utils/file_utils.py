import logging
import os
import sys
from enum import Enum
from typing import Optional

logger = logging.getLogger(__name__)


class OutputFormat(Enum):
    """Document formats the CLI can emit."""
    TABLE = "table"
    CSV = "csv"
    JSON = "json"


def get_output_format(name_or_path: str) -> OutputFormat:
    """
    Determine output format from a format name or an output file path.

    Args:
        name_or_path: 'table', 'csv', 'json', or a path such as 'curves.csv'

    Returns:
        OutputFormat, TABLE for unknown extensions
    """
    if '/' in name_or_path or '\\' in name_or_path or '.' in name_or_path:
        ext = os.path.splitext(name_or_path)[1].lower()
    else:
        ext = f".{name_or_path.lower()}"

    if ext == ".csv":
        return OutputFormat.CSV
    elif ext == ".json":
        return OutputFormat.JSON
    elif ext in (".table", ".txt", ".text"):
        return OutputFormat.TABLE
    else:
        logger.warning(f"Unknown output format {ext!r}, falling back to table")
        return OutputFormat.TABLE


def write_document(document: str, path: Optional[str] = None) -> None:
    """
    Emit a document to a file, or to stdout when no path is given.

    Args:
        document: text to write; a trailing newline is ensured
        path: output file path, or None for stdout
    """
    if not document.endswith("\n"):
        document += "\n"

    if path is None:
        sys.stdout.write(document)
        sys.stdout.flush()
        return

    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    # newline="" keeps "\n" line endings on every platform
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(document)
    logger.info(f"Wrote {len(document)} characters to {path}")

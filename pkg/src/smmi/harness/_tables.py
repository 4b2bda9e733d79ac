from __future__ import annotations

__all__ = ["format_table", "write_table"]

import csv
import io
from pathlib import Path
from typing import Any, Iterable, TextIO, Union


def _dump(records: Iterable[dict[str, Any]], stream: TextIO) -> int:
    writer = None
    count = 0
    for record in records:
        if writer is None:
            writer = csv.DictWriter(stream, fieldnames=list(record), lineterminator="\n")
            writer.writeheader()
        writer.writerow(record)
        count += 1
    return count


def format_table(records: Iterable[dict[str, Any]]) -> str:
    """Records as CSV text; the first record fixes the columns."""
    stream = io.StringIO()
    _dump(records, stream)
    return stream.getvalue()


def write_table(records: Iterable[dict[str, Any]], path: Union[str, Path]) -> int:
    """Write records as a CSV file with a header row and return the record count."""
    with Path(path).open("w", encoding="utf-8", newline="") as stream:
        return _dump(records, stream)

"""CSV input parsing and matrix serialization.

Two input layouts are accepted:

* edges: header ``winner,loser,count``, one row per observed (or aggregated)
  result; repeated pairs accumulate. Labels appear in first-appearance order.
* matrix: a square table with an empty corner cell, column labels in the
  header row, and each data row starting with its label (row order must
  match the header). Entry (i, j) counts wins of row label i over column
  label j.

matrix_to_csv writes floats with repr(), the shortest string that parses
back to the same binary64 value, so a matrix -> csv -> matrix round trip is
bit-exact.
"""

from __future__ import annotations

import csv
import io as _io
from pathlib import Path

from .counts import CountMatrix
from .errors import DomainError, ParseError

import numpy as np

EDGE_HEADER = ("winner", "loser", "count")


def parse_input(path, fmt: str = "auto") -> CountMatrix:
    """Parse a CSV file into a count matrix. fmt is one of auto, edges,
    matrix; auto sniffs the header row."""
    text = Path(path).read_text(encoding="utf-8")
    rows = _read_rows(text)
    if not rows:
        raise ParseError("input file is empty")
    if fmt == "auto":
        fmt = _sniff(rows[0][1])
    if fmt == "edges":
        return _parse_edges(rows)
    if fmt == "matrix":
        return _parse_matrix(rows)
    raise DomainError(f"unknown input format {fmt!r}")


def _read_rows(text: str) -> list[tuple[int, list[str]]]:
    rows = []
    for line_no, row in enumerate(csv.reader(_io.StringIO(text)), start=1):
        cells = [c.strip() for c in row]
        if not cells or all(c == "" for c in cells):
            continue
        rows.append((line_no, cells))
    return rows


def _sniff(header: list[str]) -> str:
    lowered = tuple(c.lower() for c in header)
    if lowered[:3] == EDGE_HEADER and len(header) == 3:
        return "edges"
    if header and header[0] == "":
        return "matrix"
    raise ParseError(
        "cannot determine input format: expected an edges header "
        "'winner,loser,count' or a matrix header with an empty corner cell",
        line=1)


def _parse_edges(rows: list[tuple[int, list[str]]]) -> CountMatrix:
    line_no, header = rows[0]
    if tuple(c.lower() for c in header) != EDGE_HEADER:
        raise ParseError(
            f"expected header 'winner,loser,count', got {','.join(header)}",
            line=line_no)
    labels: list[str] = []
    seen: dict[str, int] = {}
    entries: dict[tuple[int, int], float] = {}

    def index(label: str, line: int) -> int:
        if label == "":
            raise ParseError("empty label", line=line)
        if label not in seen:
            seen[label] = len(labels)
            labels.append(label)
        return seen[label]

    for line_no, cells in rows[1:]:
        if len(cells) != 3:
            raise ParseError(
                f"expected 3 fields, got {len(cells)}", line=line_no)
        winner, loser, raw = cells
        try:
            count = float(raw)
        except ValueError:
            raise ParseError(f"count {raw!r} is not a number",
                             line=line_no) from None
        if not np.isfinite(count):
            raise ParseError(f"count {raw!r} is not finite", line=line_no)
        if count < 0:
            raise DomainError(
                f"line {line_no}: negative count {count:g} for "
                f"{winner!r} over {loser!r}")
        i = index(winner, line_no)
        j = index(loser, line_no)
        entries[(i, j)] = entries.get((i, j), 0.0) + count
    if not labels:
        raise ParseError("no edge rows after the header")
    n = len(labels)
    C = np.zeros((n, n))
    for (i, j), count in entries.items():
        C[i, j] = count
    return CountMatrix(C, tuple(labels))


def _parse_matrix(rows: list[tuple[int, list[str]]]) -> CountMatrix:
    line_no, header = rows[0]
    if not header or header[0] != "":
        raise ParseError(
            "matrix header must start with an empty corner cell",
            line=line_no)
    labels = header[1:]
    n = len(labels)
    if n == 0:
        raise ParseError("matrix header has no labels", line=line_no)
    if len(set(labels)) != n:
        raise ParseError("duplicate labels in matrix header", line=line_no)
    if len(rows) - 1 != n:
        raise ParseError(
            f"expected {n} data rows for {n} labels, got {len(rows) - 1}",
            line=line_no)
    C = np.zeros((n, n))
    for r, (data_line, cells) in enumerate(rows[1:]):
        if len(cells) != n + 1:
            raise ParseError(
                f"expected {n + 1} fields, got {len(cells)}", line=data_line)
        if cells[0] != labels[r]:
            raise ParseError(
                f"row label {cells[0]!r} does not match header label "
                f"{labels[r]!r} (row order must follow the header)",
                line=data_line)
        for c, raw in enumerate(cells[1:]):
            try:
                value = float(raw)
            except ValueError:
                raise ParseError(f"entry {raw!r} is not a number",
                                 line=data_line) from None
            if not np.isfinite(value):
                raise ParseError(f"entry {raw!r} is not finite",
                                 line=data_line)
            if value < 0:
                raise DomainError(
                    f"line {data_line}: negative count {value:g} at "
                    f"({labels[r]!r}, {labels[c]!r})")
            C[r, c] = value
    return CountMatrix(C, tuple(labels))


def matrix_to_csv(C: CountMatrix) -> str:
    """Serialize to the matrix layout with bit-exact float round-tripping."""
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([""] + list(C.labels))
    for i, label in enumerate(C.labels):
        writer.writerow([label] + [repr(float(v)) for v in C.counts[i]])
    return buf.getvalue()

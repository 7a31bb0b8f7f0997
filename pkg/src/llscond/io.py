"""Matrix and vector file formats.

Matrices: MatrixMarket (``%%MatrixMarket matrix array|coordinate real
general``) or headered RFC-4180 CSV.  Vectors: single-column plain text or
CSV.  Numbers are written with 17 significant digits so a write/read round
trip reproduces every double bit-for-bit.  Parse errors carry 1-based line
(and, for CSV, column) positions.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .exceptions import ParseError, ValidationError
from .linalg import as_matrix, as_vector

FLOAT_FORMAT = "%.17g"


def _float(token: str, line: int, column: int | None = None) -> float:
    try:
        return float(token)
    except ValueError:
        raise ParseError(f"expected a number, got {token!r}", line, column) from None


def _mm_lines(text: str):
    """Yield (1-based line number, stripped content) skipping comments/blanks."""
    for i, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("%"):
            continue
        yield i, stripped


def _read_matrix_market(text: str) -> np.ndarray:
    header = text.splitlines()[0].split()
    if len(header) != 5:
        raise ParseError("MatrixMarket header needs 5 fields: "
                         "%%MatrixMarket matrix <format> real general", 1)
    _, obj, layout, field, symmetry = (t.lower() for t in header)
    if obj != "matrix":
        raise ParseError(f"unsupported MatrixMarket object {obj!r}", 1)
    if layout not in ("array", "coordinate"):
        raise ParseError(f"unsupported MatrixMarket format {layout!r}", 1)
    if field not in ("real", "integer"):
        raise ParseError(f"unsupported MatrixMarket field {field!r} (real expected)", 1)
    if symmetry != "general":
        raise ParseError(f"unsupported MatrixMarket symmetry {symmetry!r} (general expected)", 1)

    lines = _mm_lines("\n".join(text.splitlines()[1:]))
    lines = [(ln + 1, content) for ln, content in lines]  # account for header line
    if not lines:
        raise ParseError("missing MatrixMarket size line", 2)
    size_line, size_text = lines[0]
    size_tokens = size_text.split()

    if layout == "array":
        if len(size_tokens) != 2:
            raise ParseError("array size line must be 'rows cols'", size_line)
        rows, cols = (int(_float(t, size_line)) for t in size_tokens)
        if rows < 1 or cols < 1:
            raise ParseError("matrix dimensions must be positive", size_line)
        entries = lines[1:]
        if len(entries) != rows * cols:
            raise ParseError(
                f"expected {rows * cols} entries for a {rows}x{cols} array, got {len(entries)}",
                entries[-1][0] if entries else size_line,
            )
        values = [_float(content, ln) for ln, content in entries]
        # MatrixMarket array entries run down columns (column-major).
        return np.array(values).reshape((cols, rows)).T
    # coordinate
    if len(size_tokens) != 3:
        raise ParseError("coordinate size line must be 'rows cols nnz'", size_line)
    rows, cols, nnz = (int(_float(t, size_line)) for t in size_tokens)
    if rows < 1 or cols < 1:
        raise ParseError("matrix dimensions must be positive", size_line)
    entries = lines[1:]
    if len(entries) != nnz:
        raise ParseError(f"expected {nnz} coordinate entries, got {len(entries)}",
                         entries[-1][0] if entries else size_line)
    out = np.zeros((rows, cols))
    seen = set()
    for ln, content in entries:
        tokens = content.split()
        if len(tokens) != 3:
            raise ParseError("coordinate entry must be 'i j value'", ln)
        i, j = int(_float(tokens[0], ln, 1)), int(_float(tokens[1], ln, 2))
        if not (1 <= i <= rows and 1 <= j <= cols):
            raise ParseError(f"index ({i}, {j}) outside {rows}x{cols}", ln)
        if (i, j) in seen:
            raise ParseError(f"duplicate entry for ({i}, {j})", ln)
        seen.add((i, j))
        out[i - 1, j - 1] = _float(tokens[2], ln, 3)
    return out


def _read_csv_matrix(text: str) -> np.ndarray:
    rows = []
    reader = csv.reader(text.splitlines())
    header_skipped = False
    for ln, record in enumerate(reader, start=1):
        if not record or all(not cell.strip() for cell in record):
            continue
        if not header_skipped:
            header_skipped = True
            try:
                float(record[0].strip())
            except ValueError:
                continue  # header row with column names
        rows.append([
            _float(cell.strip(), ln, col + 1) for col, cell in enumerate(record)
        ])
    if not rows:
        raise ParseError("no numeric rows found", 1)
    width = len(rows[0])
    for ln, row in enumerate(rows[1:], start=2):
        if len(row) != width:
            raise ParseError(f"row has {len(row)} fields, expected {width}", ln)
    return np.array(rows)


def read_matrix(path) -> np.ndarray:
    """Read a matrix from a MatrixMarket or CSV file (sniffed by content)."""
    text = Path(path).read_text()
    if not text.strip():
        raise ParseError("file is empty", 1)
    if text.lstrip().startswith("%%MatrixMarket"):
        matrix = _read_matrix_market(text)
    else:
        matrix = _read_csv_matrix(text)
    return as_matrix(matrix, f"matrix from {path}")


def read_vector(path) -> np.ndarray:
    """Read a vector from single-column plain text or CSV (header allowed)."""
    text = Path(path).read_text()
    values = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith(("%", "#")):
            continue
        token = stripped.split(",")[0].strip()
        if "," in stripped and len([c for c in stripped.split(",") if c.strip()]) > 1:
            raise ParseError("vector files must have a single column", ln, 2)
        try:
            values.append(float(token))
        except ValueError:
            if ln == 1 and not values:
                continue  # header row
            raise ParseError(f"expected a number, got {token!r}", ln) from None
    if not values:
        raise ParseError("no numeric entries found", 1)
    return as_vector(np.array(values), f"vector from {path}")


def write_matrix(path, matrix, fmt: str = "mm-array") -> None:
    """Write a matrix as 'mm-array', 'mm-coordinate', or 'csv'."""
    m = as_matrix(matrix)
    rows, cols = m.shape
    lines = []
    if fmt == "mm-array":
        lines.append("%%MatrixMarket matrix array real general")
        lines.append(f"{rows} {cols}")
        for j in range(cols):
            for i in range(rows):
                lines.append(FLOAT_FORMAT % m[i, j])
    elif fmt == "mm-coordinate":
        lines.append("%%MatrixMarket matrix coordinate real general")
        nonzero = [(i, j) for j in range(cols) for i in range(rows) if m[i, j] != 0.0]
        lines.append(f"{rows} {cols} {len(nonzero)}")
        for i, j in nonzero:
            lines.append(f"{i + 1} {j + 1} " + FLOAT_FORMAT % m[i, j])
    elif fmt == "csv":
        lines.append(",".join(f"c{j + 1}" for j in range(cols)))
        for i in range(rows):
            lines.append(",".join(FLOAT_FORMAT % m[i, j] for j in range(cols)))
    else:
        raise ValidationError(f"unknown matrix format {fmt!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_vector(path, vector) -> None:
    """Write a vector as single-column plain text."""
    v = as_vector(vector)
    Path(path).write_text("\n".join(FLOAT_FORMAT % value for value in v) + "\n")

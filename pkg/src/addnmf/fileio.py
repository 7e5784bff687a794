"""Reading and writing dense matrices as CSV or MatrixMarket arrays.

CSV files hold one matrix row per line, comma separated, no header.
Files ending in ``.mtx`` use the MatrixMarket ``array real general`` layout
(column-major values after a ``rows cols`` size line). Values are written
with ``repr``, which round-trips float64 exactly.
"""
import os
import tempfile
from contextlib import contextmanager

import numpy as np

__all__ = ["MatrixParseError", "read_matrix", "write_matrix", "atomic_write"]

MM_EXTENSION = ".mtx"
MM_HEADER = "%%MatrixMarket matrix array real general"


class MatrixParseError(ValueError):
    """Malformed matrix file. `line` and `column` are 1-based (column may be None)."""

    def __init__(self, path, line, column, message):
        self.path = path
        self.line = line
        self.column = column
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{path}: {where}: {message}")


def _number(path, lineno, col, token):
    try:
        x = float(token)
    except ValueError:
        raise MatrixParseError(path, lineno, col,
                               f"not a number: {token.strip()!r}") from None
    if not np.isfinite(x):
        raise MatrixParseError(path, lineno, col, f"non-finite value {token.strip()!r}")
    return x


def _read_csv(path, lines):
    rows = []
    width = None
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            if lineno == len(lines):
                continue
            raise MatrixParseError(path, lineno, None, "blank line")
        tokens = line.split(",")
        if width is None:
            width = len(tokens)
        elif len(tokens) != width:
            raise MatrixParseError(
                path, lineno, None,
                f"expected {width} values, found {len(tokens)}")
        rows.append([_number(path, lineno, c, t) for c, t in enumerate(tokens, 1)])
    if not rows:
        raise MatrixParseError(path, 1, None, "empty file")
    return np.array(rows, dtype=np.float64)


def _read_mm(path, lines):
    if not lines or not lines[0].lower().startswith("%%matrixmarket"):
        raise MatrixParseError(path, 1, None, "missing %%MatrixMarket header")
    banner = lines[0].lower().split()
    if banner[1:4] != ["matrix", "array", "real"] or banner[4:5] not in ([], ["general"]):
        raise MatrixParseError(path, 1, None,
                               "only 'matrix array real general' is supported")
    body = [(i, ln) for i, ln in enumerate(lines[1:], 2)
            if ln.strip() and not ln.lstrip().startswith("%")]
    if not body:
        raise MatrixParseError(path, len(lines), None, "missing size line")
    lineno, size = body[0]
    parts = size.split()
    try:
        rows, cols = (int(t) for t in parts)
    except ValueError:
        raise MatrixParseError(path, lineno, None, f"bad size line {size.strip()!r}") from None
    if rows < 1 or cols < 1:
        raise MatrixParseError(path, lineno, None, "dimensions must be positive")
    values = []
    for lineno, ln in body[1:]:
        tokens = ln.split()
        if len(tokens) != 1:
            raise MatrixParseError(path, lineno, None,
                                   f"expected one value, found {len(tokens)}")
        values.append(_number(path, lineno, 1, tokens[0]))
    if len(values) != rows * cols:
        last = body[-1][0]
        raise MatrixParseError(path, last, None,
                               f"expected {rows * cols} values, found {len(values)}")
    return np.array(values, dtype=np.float64).reshape((cols, rows)).T.copy()


def read_matrix(path):
    """Load a matrix; the format is chosen by file extension."""
    path = os.fspath(path)
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if path.lower().endswith(MM_EXTENSION):
        return _read_mm(path, lines)
    return _read_csv(path, lines)


def format_matrix(m, mm=False):
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    if mm:
        out = [MM_HEADER, f"{m.shape[0]} {m.shape[1]}"]
        out.extend(repr(float(x)) for x in m.T.ravel())
    else:
        out = [",".join(repr(float(x)) for x in row) for row in m]
    return "\n".join(out) + "\n"


@contextmanager
def atomic_write(path):
    """Yield a text handle whose contents replace `path` only on success."""
    path = os.fspath(path)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)),
                               prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            yield fh
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def write_matrix(path, m):
    """Write `m` as CSV, or MatrixMarket when `path` ends in ``.mtx``."""
    text = format_matrix(m, mm=os.fspath(path).lower().endswith(MM_EXTENSION))
    with atomic_write(path) as fh:
        fh.write(text)

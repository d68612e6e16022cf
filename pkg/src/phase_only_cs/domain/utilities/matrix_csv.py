"""CSV codec for complex and real matrices.

Complex files start with ``# complex <m> <n>`` followed by m rows of 2n
floats interleaved as re,im per entry. Real files start with
``# real <p> <q>`` followed by p rows of q floats. Additional ``#`` lines
after the shape header carry metadata (for example
``# corrupted 0 tau0 0.0`` on phase observations) and are returned to the
caller as parsed key/value pairs.
"""

from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from ..exceptions import ErrorCode, FormatError, ResultIOError

PathLike = Union[str, Path]

# 17 significant digits read back bit-exact
FLOAT_FORMAT = "%.17g"


def _parse_metadata(line: str) -> Dict[str, str]:
    """Parse ``# key value key value ...`` into a dict (first token may be a tag)."""
    tokens = line.lstrip("#").split()
    meta: Dict[str, str] = {}
    if len(tokens) % 2:
        meta["tag"] = tokens[0]
        tokens = tokens[1:]
    for key, value in zip(tokens[::2], tokens[1::2]):
        meta[key] = value
    return meta


def _parse_header(line: str, kind: str, path: PathLike) -> Tuple[int, int]:
    tokens = line.split()
    if len(tokens) != 4 or tokens[0] != "#" or tokens[1] != kind:
        raise FormatError(f"expected '# {kind} <rows> <cols>' header, got {line!r}", path=str(path), line=1)
    try:
        rows, cols = int(tokens[2]), int(tokens[3])
    except ValueError as exc:
        raise FormatError(f"non-integer shape in header {line!r}", path=str(path), line=1) from exc
    if rows < 0 or cols < 0:
        raise FormatError(f"negative shape in header {line!r}", path=str(path), line=1)
    return rows, cols


def _save(path: PathLike, data: np.ndarray, header: List[str]) -> None:
    try:
        np.savetxt(path, data, fmt=FLOAT_FORMAT, delimiter=",", header="\n".join(header), comments="# ")
    except OSError as exc:
        raise ResultIOError(str(path), exc) from exc


def _load(path: PathLike, kind: str, width_per_col: int) -> Tuple[np.ndarray, Dict[str, str]]:
    """Validate the comment block, then hand the body to ``np.loadtxt``."""
    try:
        lines = [line.strip() for line in Path(path).read_text(encoding="utf-8").splitlines() if line.strip()]
    except OSError as exc:
        raise ResultIOError(str(path), exc, write=False) from exc
    if not lines:
        raise FormatError("empty file", path=str(path))

    rows, cols = _parse_header(lines[0], kind, path)
    meta: Dict[str, str] = {}
    body = lines[1:]
    while body and body[0].startswith("#"):
        meta.update(_parse_metadata(body[0]))
        body = body[1:]
    width = width_per_col * cols

    if not body:
        data = np.empty((0, width), dtype=np.float64)
    else:
        try:
            data = np.loadtxt(path, delimiter=",", comments="#", ndmin=2, dtype=np.float64)
        except ValueError as exc:
            raise FormatError(
                f"malformed data row: {exc}",
                path=str(path),
                error_code=ErrorCode.FORMAT_MALFORMED_ROW,
            ) from exc
        except OSError as exc:
            raise ResultIOError(str(path), exc, write=False) from exc

    if data.shape[0] != rows:
        raise FormatError(
            f"expected {rows} data rows, found {data.shape[0]}",
            path=str(path),
            error_code=ErrorCode.FORMAT_MALFORMED_ROW,
        )
    if rows and data.shape[1] != width:
        raise FormatError(
            f"rows have {data.shape[1]} fields, expected {width}",
            path=str(path),
            error_code=ErrorCode.FORMAT_MALFORMED_ROW,
        )
    return data, meta


def _as_matrix(matrix: np.ndarray, dtype) -> np.ndarray:
    arr = np.asarray(matrix, dtype=dtype)
    return arr[:, None] if arr.ndim == 1 else arr


def write_complex_csv(
    matrix: np.ndarray,
    path: PathLike,
    metadata: Optional[List[str]] = None
) -> None:
    """Write a complex matrix (a vector is written as an m x 1 matrix).

    Args:
        matrix: Complex array, 1-d or 2-d
        path: Output file
        metadata: Extra comment lines written after the shape header
    """
    arr = np.ascontiguousarray(_as_matrix(matrix, np.complex128))
    m, n = arr.shape
    # complex128 viewed as float64 interleaves re,im per entry
    _save(path, arr.view(np.float64).reshape(m, 2 * n), [f"complex {m} {n}", *(metadata or [])])


def read_complex_csv(path: PathLike) -> Tuple[np.ndarray, Dict[str, str]]:
    """Read a complex matrix file.

    Returns:
        Tuple of (matrix of shape m x n, metadata parsed from extra comment lines)
    """
    data, meta = _load(path, "complex", 2)
    return data[:, 0::2] + 1j * data[:, 1::2], meta


def write_real_csv(
    matrix: np.ndarray,
    path: PathLike,
    metadata: Optional[List[str]] = None
) -> None:
    """Write a real matrix with a ``# real <p> <q>`` header."""
    arr = _as_matrix(matrix, np.float64)
    p, q = arr.shape
    _save(path, arr, [f"real {p} {q}", *(metadata or [])])


def read_real_csv(path: PathLike) -> Tuple[np.ndarray, Dict[str, str]]:
    """Read a real matrix file; returns (matrix, metadata)."""
    return _load(path, "real", 1)

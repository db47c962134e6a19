"""Matrix, dataset and trace files.

Matrix files come in two flavours:

* text (``.csv`` / ``.txt``): a header line ``rows,cols`` followed by one
  comma-separated line per row.  Values are written with ``repr`` (the
  shortest string that round-trips), so text files are bit-exact too.
* binary (any other suffix): the 8-byte magic ``IRLSMAT1``, little-endian
  u64 rows, u64 cols, then ``rows*cols`` little-endian float64 values in
  column-major order.

Datasets pair a matrix file with a JSON sidecar (same stem, ``.json``).
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .errors import MatrixFormatError
from .trace import TRACE_SCHEMA_VERSION, SolveTrace

MAGIC = b"IRLSMAT1"
TEXT_SUFFIXES = {".csv", ".txt"}
DATASET_SCHEMA = "smoothlrr.dataset/1"


def _is_text(path: Path) -> bool:
    return path.suffix.lower() in TEXT_SUFFIXES


def write_matrix(path, A) -> Path:
    path = Path(path)
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise MatrixFormatError("only 2-D matrices can be written")
    if _is_text(path):
        lines = [f"{A.shape[0]},{A.shape[1]}"]
        lines += [",".join(repr(float(v)) for v in row) for row in A]
        path.write_text("\n".join(lines) + "\n")
    else:
        header = MAGIC + struct.pack("<QQ", *A.shape)
        path.write_bytes(header + A.astype("<f8").tobytes(order="F"))
    return path


def _parse_text(raw: bytes) -> np.ndarray:
    lines = [ln.strip() for ln in raw.decode("ascii").splitlines() if ln.strip()]
    if not lines:
        raise MatrixFormatError("empty matrix file")
    try:
        rows, cols = (int(v) for v in lines[0].split(","))
        data = [[float(v) for v in ln.split(",")] for ln in lines[1:]]
    except ValueError as exc:
        raise MatrixFormatError(f"malformed text matrix: {exc}") from exc
    if len(data) != rows or any(len(r) != cols for r in data):
        raise MatrixFormatError(f"header says {rows}x{cols}, body does not match")
    return np.array(data, dtype=np.float64).reshape(rows, cols)


def _parse_binary(raw: bytes) -> np.ndarray:
    if len(raw) < 24:
        raise MatrixFormatError("truncated binary matrix header")
    rows, cols = struct.unpack("<QQ", raw[8:24])
    body = raw[24:]
    if len(body) != 8 * rows * cols:
        raise MatrixFormatError(
            f"expected {rows * cols} values for a {rows}x{cols} matrix, got {len(body) // 8}"
        )
    return np.frombuffer(body, dtype="<f8").reshape((rows, cols), order="F").astype(np.float64)


def read_matrix(path) -> np.ndarray:
    """Read either matrix format (detected from the magic bytes)."""
    raw = Path(path).read_bytes()
    A = _parse_binary(raw) if raw.startswith(MAGIC) else _parse_text(raw)
    if not np.isfinite(A).all():
        raise MatrixFormatError(f"{path}: matrix contains NaN or Inf")
    return A


def sidecar_path(path) -> Path:
    return Path(path).with_suffix(".json")


def write_json(path, obj) -> Path:
    path = Path(path)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    return path


def read_json(path) -> dict:
    return json.loads(Path(path).read_text())


def save_dataset(path, ds) -> tuple[Path, Path]:
    """Write ``ds.X`` to ``path`` and labels / mask / params to the sidecar."""
    path = write_matrix(path, ds.X)
    side = {
        "schema": DATASET_SCHEMA,
        "rows": int(ds.X.shape[0]),
        "cols": int(ds.X.shape[1]),
        "labels": [int(v) for v in ds.labels],
        "corrupted": [int(i) for i in np.flatnonzero(ds.corrupted)],
        "effective_corruption": [int(i) for i in ds.effective_corruption],
        "params": ds.params,
        "seed": ds.params.get("seed"),
    }
    return path, write_json(sidecar_path(path), side)


def load_sidecar(path) -> dict:
    p = Path(path)
    if p.suffix != ".json":
        p = sidecar_path(p)
    return read_json(p)


def write_trace(path, trace: SolveTrace) -> Path:
    path = Path(path)
    path.write_text(trace.to_jsonl())
    return path


def read_trace(path) -> SolveTrace:
    return SolveTrace.from_jsonl(Path(path).read_text())


def run_summary(command: str, trace: SolveTrace, config: dict, **extra) -> dict:
    last = trace.records[-1] if trace.records else None
    out = {
        "schema_version": TRACE_SCHEMA_VERSION,
        "command": command,
        "config": config,
        "converged": bool(trace.converged),
        "iterations": trace.iterations,
        "seconds": trace.seconds,
        "epsilon": trace.epsilon,
        "final_exact_objective": last.j_exact if last else None,
        "final_smoothed_objective": last.j_smoothed if last else None,
        "final_mu": last.mu if last else None,
        "final_stationarity": last.stationarity if last else None,
    }
    out.update(extra)
    return out

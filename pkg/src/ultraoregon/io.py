"""Plain-text frame and table formats: PBM (P1), PGM (P2) and CSV.

PGM files carry the affine map from grey level back to field value in a
comment line::

    # affine value = <offset> + <scale> * gray

Integer fields whose range fits in 16 bits use ``scale = 1`` and round-trip
exactly; real fields are quantised to ``maxval = 65535``.
"""
from __future__ import annotations

import csv
import re
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

AFFINE_RE = re.compile(r"#\s*affine value\s*=\s*(\S+)\s*\+\s*(\S+)\s*\*\s*gray")


def _tokens(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        out.extend(line.split())
    return out


def format_pbm(frame: np.ndarray) -> str:
    frame = np.asarray(frame)
    if not np.all((frame == 0) | (frame == 1)):
        raise ValueError("PBM frames must be binary")
    h, w = frame.shape
    rows = [" ".join(str(int(x)) for x in row) for row in frame]
    return "P1\n{} {}\n{}\n".format(w, h, "\n".join(rows))


def write_pbm(path, frame: np.ndarray) -> Path:
    path = Path(path)
    path.write_text(format_pbm(frame))
    return path


def read_pbm(path) -> np.ndarray:
    text = Path(path).read_text()
    tok = _tokens(text)
    if not tok or tok[0] != "P1":
        raise ValueError(f"{path}: not an ASCII PBM (P1) file")
    w, h = int(tok[1]), int(tok[2])
    body = "".join(tok[3:])
    if len(body) != w * h or set(body) - {"0", "1"}:
        raise ValueError(f"{path}: expected {w * h} binary pixels")
    return np.frombuffer(body.encode(), dtype=np.uint8).reshape(h, w).astype(np.int64) - ord("0")


def format_pgm(field: np.ndarray, lo=None, hi=None) -> str:
    field = np.asarray(field)
    lo = field.min() if lo is None else lo
    hi = field.max() if hi is None else hi
    if field.dtype.kind in "iu" and int(hi) - int(lo) <= 65535:
        offset, scale = int(lo), 1
        maxval = max(int(hi) - int(lo), 1)
        gray = field.astype(np.int64) - offset
    else:
        maxval = 65535
        offset = float(lo)
        scale = (float(hi) - float(lo)) / maxval if hi > lo else 1.0
        gray = np.rint((field.astype(np.float64) - offset) / scale).astype(np.int64)
    if gray.min() < 0 or gray.max() > maxval:
        raise ValueError("field outside the requested PGM range")
    h, w = field.shape
    rows = [" ".join(str(int(x)) for x in row) for row in gray]
    return "P2\n# affine value = {!r} + {!r} * gray\n{} {}\n{}\n{}\n".format(
        offset, scale, w, h, maxval, "\n".join(rows))


def write_pgm(path, field: np.ndarray, lo=None, hi=None) -> Path:
    path = Path(path)
    path.write_text(format_pgm(field, lo, hi))
    return path


def read_pgm(path) -> np.ndarray:
    """Read a P2 file and undo its affine comment (integer result when ``scale`` is integral)."""
    text = Path(path).read_text()
    m = AFFINE_RE.search(text)
    offset, scale = (0, 1) if m is None else (float(m.group(1)), float(m.group(2)))
    tok = _tokens(text)
    if not tok or tok[0] != "P2":
        raise ValueError(f"{path}: not an ASCII PGM (P2) file")
    w, h = int(tok[1]), int(tok[2])
    gray = np.array([int(t) for t in tok[4:]], dtype=np.int64)
    if gray.size != w * h:
        raise ValueError(f"{path}: expected {w * h} pixels, found {gray.size}")
    gray = gray.reshape(h, w)
    if float(scale).is_integer() and float(offset).is_integer():
        return int(offset) + int(scale) * gray
    return offset + scale * gray


def write_field_csv(path, frames: Sequence[np.ndarray], start: int = 0) -> Path:
    """Columns ``n,j,k,value``; one row per cell per frame."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["n", "j", "k", "value"])
        for n, frame in enumerate(frames, start=start):
            frame = np.asarray(frame)
            for k in range(frame.shape[0]):
                for j in range(frame.shape[1]):
                    x = frame[k, j]
                    wr.writerow([n, j, k, repr(float(x)) if frame.dtype.kind == "f" else int(x)])
    return path


def read_field_csv(path) -> dict[int, np.ndarray]:
    rows = list(csv.DictReader(Path(path).open()))
    if not rows:
        return {}
    if set(rows[0]) != {"n", "j", "k", "value"}:
        raise ValueError(f"{path}: expected columns n,j,k,value")
    is_int = all(re.fullmatch(r"-?\d+", r["value"]) for r in rows)
    frames: dict[int, dict] = {}
    for r in rows:
        frames.setdefault(int(r["n"]), {})[(int(r["k"]), int(r["j"]))] = (
            int(r["value"]) if is_int else float(r["value"]))
    out = {}
    for n, cells in frames.items():
        h = 1 + max(k for k, _ in cells)
        w = 1 + max(j for _, j in cells)
        arr = np.zeros((h, w), dtype=np.int64 if is_int else np.float64)
        for (k, j), v in cells.items():
            arr[k, j] = v
        out[n] = arr
    return out


def write_table_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(header)
        for row in rows:
            wr.writerow([repr(x) if isinstance(x, float) else x for x in row])
    return path


def read_table_csv(path) -> tuple[list[str], list[list[str]]]:
    with Path(path).open(newline="") as fh:
        rd = csv.reader(fh)
        header = next(rd)
        return header, [row for row in rd]


def load_layer(path) -> np.ndarray:
    """Integer layer from a PGM, PBM or single-frame ``n,j,k,value`` CSV file."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".pbm":
        return read_pbm(path)
    if suffix == ".pgm":
        arr = read_pgm(path)
    elif suffix == ".csv":
        frames = read_field_csv(path)
        if len(frames) != 1:
            raise ValueError(f"{path}: expected exactly one frame")
        arr = next(iter(frames.values()))
    else:
        raise ValueError(f"{path}: unsupported layer format {suffix!r}")
    arr = np.asarray(arr)
    if arr.dtype.kind == "f":
        if not np.all(arr == np.round(arr)):
            raise ValueError(f"{path}: layer is not integral")
        arr = arr.astype(np.int64)
    return arr


def ascii_frame(frame: np.ndarray, on: str = "#", off: str = ".") -> str:
    return "\n".join("".join(on if x else off for x in row) for row in np.asarray(frame))

"""CSV and PGM readers/writers for scenes, spectra, records and reports.

Floats are written with ``repr`` (shortest round-trip form, up to 17
significant digits), so every CSV parses back bit-identically.

PGM quantization: a value ``v`` maps to ``round((v - lo) / (hi - lo) * maxval)``
clamped to ``[0, maxval]``. ``lo`` and ``hi`` default to the data range and
are stored in a ``# range lo hi`` header comment that :func:`read_pgm` uses to
map codes back to ``lo + code * (hi - lo) / maxval``.
"""
from __future__ import annotations

import csv
import math
import re
from pathlib import Path
from typing import Iterable

import numpy as np

from .acquisition import MeasurementRecord
from .illumination import Phase, SinusoidPattern
from .spectral import SpectrumEstimate


class FormatError(ValueError):
    """Malformed input file; ``line`` is 1-based."""

    def __init__(self, path, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


def fmt(x: float) -> str:
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return repr(x)
    return str(x)


def write_csv(path, header: Iterable[str], rows: Iterable[Iterable]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(header))
        for row in rows:
            w.writerow([fmt(v) for v in row])


def read_csv(path, header: list[str], converters) -> list[tuple]:
    """Parse a CSV with a mandatory exact header; returns converted rows."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        first = next(reader, None)
        if first is None:
            raise FormatError(path, 1, f"missing header {','.join(header)}")
        if [c.strip() for c in first] != header:
            raise FormatError(path, 1, f"expected header {','.join(header)}, got {','.join(first)}")
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise FormatError(path, line, f"expected {len(header)} fields, got {len(row)}")
            try:
                rows.append(tuple(conv(c.strip()) for conv, c in zip(converters, row)))
            except ValueError as exc:
                raise FormatError(path, line, str(exc)) from None
    return rows


def _bool(s: str) -> bool:
    if s in ("1", "true", "True"):
        return True
    if s in ("0", "false", "False"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


# scenes -------------------------------------------------------------------

def write_scene_csv(path, pixels) -> None:
    write_csv(path, ["value"], ([float(v)] for v in np.asarray(pixels, float)))


def read_scene_csv(path) -> np.ndarray:
    return np.array([r[0] for r in read_csv(path, ["value"], [float])], dtype=float)


def write_image_csv(path, image) -> None:
    """2-D image as plain comma-separated rows, no header."""
    img = np.asarray(image, float)
    with open(path, "w", newline="") as fh:
        for row in img:
            fh.write(",".join(fmt(float(v)) for v in row) + "\n")


def read_image_csv(path) -> np.ndarray:
    rows = []
    with open(path) as fh:
        for i, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rows.append([float(c) for c in line.split(",")])
            except ValueError as exc:
                raise FormatError(path, i, str(exc)) from None
            if len(rows[-1]) != len(rows[0]):
                raise FormatError(path, i, "ragged row")
    return np.array(rows, dtype=float)


# spectra ------------------------------------------------------------------

SPECTRUM_HEADER = ["k", "re", "im", "measured"]


def write_spectrum_csv(path, spectrum: SpectrumEstimate) -> None:
    rows = ((k, float(c.real), float(c.imag), int(m))
            for k, (c, m) in enumerate(zip(spectrum.coefficients, spectrum.measured_mask)))
    write_csv(path, SPECTRUM_HEADER, rows)


def read_spectrum_csv(path, scale_k: float = 1.0) -> SpectrumEstimate:
    rows = read_csv(path, SPECTRUM_HEADER, [int, float, float, _bool])
    n = len(rows)
    c = np.zeros(n, complex)
    mask = np.zeros(n, bool)
    for i, (k, real, imag, measured) in enumerate(rows):
        if k != i:
            raise FormatError(path, i + 2, f"expected k={i}, got {k}")
        c[k] = complex(real, imag)
        mask[k] = measured
    return SpectrumEstimate(c, mask, scale_k)


# measurement records --------------------------------------------------------

RECORD_HEADER = ["seq", "t", "k", "phase", "value"]


def write_records_csv(path, records: Iterable[MeasurementRecord]) -> None:
    write_csv(path, RECORD_HEADER,
              ((r.seq, r.t, r.k, int(r.phase), r.value) for r in records))


def _phase(s: str) -> Phase:
    v = int(s)
    if v not in range(4):
        raise ValueError(f"phase must be 0..3 quarter turns, got {v}")
    return Phase(v)


def read_records_csv(path) -> list[MeasurementRecord]:
    rows = read_csv(path, RECORD_HEADER, [int, float, int, _phase, float])
    return [MeasurementRecord(k, ph, v, seq, t) for seq, t, k, ph, v in rows]


# patterns -----------------------------------------------------------------

def write_pattern_csv(path, pattern: SinusoidPattern) -> None:
    write_csv(path, ["n", "value"], enumerate(pattern.samples.tolist()))


def read_pattern_csv(path) -> np.ndarray:
    rows = read_csv(path, ["n", "value"], [int, float])
    return np.array([v for _, v in rows])


def write_pattern_manifest(path, patterns: Iterable[SinusoidPattern]) -> None:
    with open(path, "w") as fh:
        fh.write("# k phase(quarter turns) a b N\n")
        for p in patterns:
            fh.write(p.manifest_line() + "\n")


def read_pattern_manifest(path) -> list[SinusoidPattern]:
    out = []
    with open(path) as fh:
        for i, line in enumerate(fh, 1):
            if not line.strip() or line.startswith("#"):
                continue
            try:
                out.append(SinusoidPattern.from_manifest_line(line))
            except ValueError as exc:
                raise FormatError(path, i, str(exc)) from None
    return out


# PGM ----------------------------------------------------------------------

def write_pgm(path, image, maxval: int = 255, lo: float | None = None,
              hi: float | None = None) -> None:
    """Binary P5 PGM, 8-bit (maxval <= 255) or 16-bit big-endian."""
    img = np.atleast_2d(np.asarray(image, float))
    if not 0 < maxval <= 65535:
        raise ValueError(f"maxval must be in 1..65535, got {maxval}")
    lo = float(img.min()) if lo is None else float(lo)
    hi = float(img.max()) if hi is None else float(hi)
    span = hi - lo if hi > lo else 1.0
    codes = np.clip(np.rint((img - lo) / span * maxval), 0, maxval)
    dtype = ">u1" if maxval < 256 else ">u2"
    h, w = img.shape
    header = f"P5\n# range {lo!r} {hi!r}\n{w} {h}\n{maxval}\n".encode()
    Path(path).write_bytes(header + codes.astype(dtype).tobytes())


_PGM_TOKEN = re.compile(rb"\s*(#[^\n]*\n\s*)*")


def read_pgm(path, raw: bool = False) -> np.ndarray:
    """Read a P5 PGM. Returns integer codes if ``raw`` else dequantized floats."""
    data = Path(path).read_bytes()
    if not data.startswith(b"P5"):
        raise FormatError(path, 1, "not a binary PGM (P5)")
    pos = 2
    fields = []
    comments = []
    while len(fields) < 3:
        m = _PGM_TOKEN.match(data, pos)
        comments.extend(re.findall(rb"#([^\n]*)", m.group(0)))
        pos = m.end()
        tok = re.match(rb"\d+", data[pos:])
        if tok is None:
            raise FormatError(path, 1, "truncated PGM header")
        fields.append(int(tok.group(0)))
        pos += tok.end()
    pos += 1  # single whitespace byte before the raster
    w, h, maxval = fields
    dtype = ">u1" if maxval < 256 else ">u2"
    need = w * h * np.dtype(dtype).itemsize
    if len(data) - pos < need:
        raise FormatError(path, 1, "PGM raster shorter than header claims")
    codes = np.frombuffer(data, dtype=dtype, count=w * h, offset=pos).reshape(h, w)
    if raw:
        return codes.astype(int)
    lo, hi = 0.0, float(maxval)
    for c in comments:
        parts = c.split()
        if len(parts) == 3 and parts[0] == b"range":
            lo, hi = float(parts[1]), float(parts[2])
    span = hi - lo if hi > lo else 1.0
    return lo + codes.astype(float) * span / maxval


def read_image(path) -> np.ndarray:
    """2-D image from ``.pgm`` or CSV (one row per line)."""
    if str(path).lower().endswith(".pgm"):
        return read_pgm(path)
    return read_image_csv(path)


def read_scene(path) -> np.ndarray:
    """1-D scene from single-column CSV (header ``value``) or a 1-row PGM."""
    if str(path).lower().endswith(".pgm"):
        img = read_pgm(path)
        if img.shape[0] != 1:
            raise FormatError(path, 1, f"scene PGM must have one row, got {img.shape[0]}")
        return img[0]
    return read_scene_csv(path)

"""Lossy codec: nearest-neighbour downsampling, bilinear reconstruction."""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from .errors import TruncatedInput, UpscaleRequested
from .matrix import PixelMatrix

__all__ = [
    "ScaleSpec",
    "LossyArchive",
    "nn_resample",
    "bilinear_resample",
    "compress",
    "decompress",
    "scale_for_factor",
]


@dataclass(frozen=True)
class ScaleSpec:
    target_rows: int
    target_cols: int

    def __post_init__(self):
        if self.target_rows < 1 or self.target_cols < 1:
            raise ValueError(f"target dimensions must be >= 1, got {self.target_rows}x{self.target_cols}")


@dataclass(frozen=True)
class LossyArchive:
    original_rows: int
    original_cols: int
    payload: PixelMatrix

    _HEADER = struct.Struct("<IIII")

    def __post_init__(self):
        if self.original_rows < 1 or self.original_cols < 1:
            raise ValueError("original dimensions must be >= 1")

    def to_bytes(self) -> bytes:
        p = self.payload
        return self._HEADER.pack(self.original_rows, self.original_cols, p.rows, p.cols) + p.pixels.tobytes()

    @classmethod
    def from_bytes(cls, buf: bytes) -> LossyArchive:
        if len(buf) < cls._HEADER.size:
            raise TruncatedInput("lossy archive header is truncated")
        orows, ocols, prows, pcols = cls._HEADER.unpack_from(buf)
        body = buf[cls._HEADER.size:]
        if prows < 1 or pcols < 1 or orows < 1 or ocols < 1:
            raise TruncatedInput("lossy archive has a zero dimension")
        if len(body) != prows * pcols:
            raise TruncatedInput(f"lossy payload holds {len(body)} bytes, expected {prows * pcols}")
        pixels = np.frombuffer(body, dtype=np.uint8).reshape(prows, pcols)
        return cls(orows, ocols, PixelMatrix(pixels))


def scale_for_factor(m: PixelMatrix, factor: float) -> ScaleSpec:
    """Per-axis reduction: each dimension becomes ``round(dim * factor)``, at least 1."""
    if not 0.0 < factor <= 1.0:
        raise ValueError(f"factor must lie in (0, 1], got {factor}")
    return ScaleSpec(max(1, math.floor(m.rows * factor + 0.5)), max(1, math.floor(m.cols * factor + 0.5)))


def nn_resample(m: PixelMatrix, s: ScaleSpec) -> PixelMatrix:
    # origin-aligned: destination index d samples source floor(d * src / dst)
    ri = np.arange(0, m.rows * s.target_rows, m.rows, dtype=np.int64) // s.target_rows
    ci = np.arange(0, m.cols * s.target_cols, m.cols, dtype=np.int64) // s.target_cols
    return PixelMatrix._adopt(m.pixels.take(ri, axis=0).take(ci, axis=1))


def _axis_weights(src: int, dst: int):
    """Corner-aligned sample positions as (lower index, upper index, frac numerator, denominator)."""
    if dst == 1 or src == 1:
        zeros = np.zeros(dst, dtype=np.int64)
        return zeros, zeros, zeros, 1
    den = dst - 1
    num = np.arange(dst, dtype=np.int64) * (src - 1)
    lo = num // den
    frac = num - lo * den
    hi = np.minimum(lo + 1, src - 1)
    return lo, hi, frac, den


def bilinear_resample(m: PixelMatrix, s: ScaleSpec) -> PixelMatrix:
    """Corner-aligned bilinear resampling, rounded half-up.

    Weights are kept as integer numerators over a common denominator so the
    result is exact; there is no floating point in the blend.
    """
    r0, r1, fr, dr = _axis_weights(m.rows, s.target_rows)
    c0, c1, fc, dc = _axis_weights(m.cols, s.target_cols)
    p = m.pixels.astype(np.int64)
    # blend along columns first, for the two source rows each output row needs
    top = p[r0][:, c0] * (dc - fc) + p[r0][:, c1] * fc
    bot = p[r1][:, c0] * (dc - fc) + p[r1][:, c1] * fc
    total = top * (dr - fr)[:, None] + bot * fr[:, None]
    denom = dr * dc
    out = (2 * total + denom) // (2 * denom)
    return PixelMatrix._adopt(out.astype(np.uint8))


def compress(m: PixelMatrix, s: ScaleSpec) -> LossyArchive:
    if s.target_rows > m.rows or s.target_cols > m.cols:
        raise UpscaleRequested(
            f"target {s.target_rows}x{s.target_cols} exceeds original {m.rows}x{m.cols}"
        )
    return LossyArchive(m.rows, m.cols, nn_resample(m, s))


def decompress(a: LossyArchive) -> PixelMatrix:
    return bilinear_resample(a.payload, ScaleSpec(a.original_rows, a.original_cols))

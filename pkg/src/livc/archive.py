"""Image-level compression: pixel matrices and CSV files to frames and back.

Lossless codecs work on the canonical CSV text of a matrix, or on a raw
pixel form (u32 LE rows, u32 LE cols, one byte per pixel) when
``raw_pixels`` is set. The lossy codec frames a :class:`LossyArchive`.
"""

from __future__ import annotations

import struct
from typing import Union

import numpy as np

from . import lossy
from .codecs import CodecFrame, CodecId, compress_bytes, decompress_bytes
from .codecs.lz77 import DEFAULT_WINDOW
from .errors import TruncatedInput
from .matrix import PixelMatrix, parse_csv, write_csv

__all__ = [
    "encode_matrix",
    "decode_frame",
    "compress_csv",
    "decompress_to_csv",
    "raw_pixels_bytes",
    "parse_raw_pixels",
]

_DIMS = struct.Struct("<II")

Scale = Union[lossy.ScaleSpec, float, None]


def raw_pixels_bytes(m: PixelMatrix) -> bytes:
    return _DIMS.pack(m.rows, m.cols) + m.pixels.tobytes()


def parse_raw_pixels(buf: bytes) -> PixelMatrix:
    if len(buf) < _DIMS.size:
        raise TruncatedInput("raw pixel header is truncated")
    rows, cols = _DIMS.unpack_from(buf)
    body = buf[_DIMS.size:]
    if rows < 1 or cols < 1 or len(body) != rows * cols:
        raise TruncatedInput(f"raw pixel body holds {len(body)} bytes for a {rows}x{cols} image")
    return PixelMatrix(np.frombuffer(body, dtype=np.uint8).reshape(rows, cols))


def _resolve_scale(m: PixelMatrix, scale: Scale) -> lossy.ScaleSpec:
    if scale is None:
        raise ValueError("the lossy codec needs a target size or a per-axis factor")
    if isinstance(scale, lossy.ScaleSpec):
        return scale
    return lossy.scale_for_factor(m, float(scale))


def encode_matrix(
    m: PixelMatrix,
    codec: CodecId,
    *,
    scale: Scale = None,
    window: int = DEFAULT_WINDOW,
    raw_pixels: bool = False,
) -> CodecFrame:
    codec = CodecId(codec)
    if codec == CodecId.LOSSY_NN:
        archive = lossy.compress(m, _resolve_scale(m, scale))
        return CodecFrame(CodecId.LOSSY_NN, archive.to_bytes())
    data = raw_pixels_bytes(m) if raw_pixels else write_csv(m).encode("ascii")
    return compress_bytes(data, codec, window=window)


def decode_frame(frame: CodecFrame | bytes, *, raw_pixels: bool = False) -> PixelMatrix:
    if not isinstance(frame, CodecFrame):
        frame = CodecFrame.from_bytes(frame)
    if frame.codec == CodecId.LOSSY_NN:
        return lossy.decompress(lossy.LossyArchive.from_bytes(frame.payload))
    data = decompress_bytes(frame)
    return parse_raw_pixels(data) if raw_pixels else parse_csv(data)


def compress_csv(
    csv: bytes,
    codec: CodecId,
    *,
    scale: Scale = None,
    window: int = DEFAULT_WINDOW,
    raw_pixels: bool = False,
) -> bytes:
    """CSV file contents to serialized frame bytes.

    Lossless codecs given CSV input encode the bytes as they are, so the
    input should already be canonical (see :func:`livc.matrix.write_csv`).
    """
    codec = CodecId(codec)
    if codec != CodecId.LOSSY_NN and not raw_pixels:
        return compress_bytes(csv, codec, window=window).to_bytes()
    return encode_matrix(parse_csv(csv), codec, scale=scale, window=window, raw_pixels=raw_pixels).to_bytes()


def decompress_to_csv(frame: bytes, *, raw_pixels: bool = False) -> bytes:
    parsed = CodecFrame.from_bytes(frame)
    if parsed.codec != CodecId.LOSSY_NN and not raw_pixels:
        return decompress_bytes(parsed)
    return write_csv(decode_frame(parsed, raw_pixels=raw_pixels)).encode("ascii")

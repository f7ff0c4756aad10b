"""Grayscale pixel matrices and their CSV / netpbm serializations."""

from __future__ import annotations

import enum
import re

import numpy as np

from .errors import (
    EmptyInput,
    MalformedToken,
    RaggedRows,
    TruncatedInput,
    UnsupportedFormat,
    ValueOutOfRange,
)

__all__ = [
    "ImageLabel",
    "PixelMatrix",
    "parse_csv",
    "write_csv",
    "parse_pgm",
    "write_pgm",
    "parse_ppm",
]


class ImageLabel(enum.Enum):
    HEALTHY = "healthy"
    SICK = "sick"
    UNLABELED = "unlabeled"


class PixelMatrix:
    """Immutable ``rows x cols`` grid of 8-bit intensities.

    The pixels are held in a read-only ``uint8`` array of shape
    ``(rows, cols)``. Use :meth:`from_values` to build one from arbitrary
    integers with range checking.
    """

    __slots__ = ("_pixels",)

    def __init__(self, pixels):
        arr = np.asarray(pixels)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"pixel matrix must be 2-D and non-empty, got shape {arr.shape}")
        if arr.dtype != np.uint8:
            if arr.size and (arr.min() < 0 or arr.max() > 255):
                raise ValueOutOfRange("pixel values must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        else:
            arr = arr.copy()
        arr.setflags(write=False)
        self._pixels = arr

    @classmethod
    def _adopt(cls, arr: np.ndarray) -> PixelMatrix:
        """Wrap a freshly built 2-D uint8 array without copying it."""
        arr.setflags(write=False)
        obj = cls.__new__(cls)
        obj._pixels = arr
        return obj

    @classmethod
    def from_values(cls, rows: int, cols: int, data) -> PixelMatrix:
        """Build from a flat row-major sequence of ``rows * cols`` integers."""
        if rows < 1 or cols < 1:
            raise ValueError("rows and cols must be >= 1")
        flat = np.asarray(list(data) if not isinstance(data, np.ndarray) else data, dtype=np.int64)
        if flat.size != rows * cols:
            raise ValueError(f"expected {rows * cols} values, got {flat.size}")
        return cls(flat.reshape(rows, cols))

    @property
    def pixels(self) -> np.ndarray:
        return self._pixels

    @property
    def rows(self) -> int:
        return self._pixels.shape[0]

    @property
    def cols(self) -> int:
        return self._pixels.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._pixels.shape

    @property
    def data(self) -> list[int]:
        return self._pixels.ravel().tolist()

    def __len__(self) -> int:
        return self._pixels.size

    def __eq__(self, other):
        if not isinstance(other, PixelMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._pixels, other._pixels))

    def __hash__(self):
        return hash((self.shape, self._pixels.tobytes()))

    def __repr__(self):
        if self._pixels.size <= 16:
            return f"PixelMatrix({self.rows}x{self.cols}, {self.data})"
        return f"PixelMatrix({self.rows}x{self.cols})"


# -- CSV -------------------------------------------------------------------

_CSV_LINE = re.compile(r"[ \t]*\[?[ \t]*[+-]?\d+[ \t]*(?:,[ \t]*[+-]?\d+[ \t]*)*\]?[ \t]*")
_DIGITS = [str(i) for i in range(256)]


def parse_csv(text: str | bytes) -> PixelMatrix:
    """Parse comma-separated rows of integers.

    Each non-blank line is one row. Rows may be wrapped in ``[`` ``]`` and
    values may carry surrounding spaces or tabs; CRLF and LF endings are
    both accepted.
    """
    if isinstance(text, (bytes, bytearray, memoryview)):
        try:
            text = bytes(text).decode("ascii")
        except UnicodeDecodeError as exc:
            raise MalformedToken(f"non-ASCII byte at offset {exc.start}") from None
    rows = []
    width = None
    for lineno, line in enumerate(text.split("\n"), 1):
        line = line.rstrip("\r")
        if not line.strip():
            continue
        if not _CSV_LINE.fullmatch(line):
            bad = _first_bad_token(line)
            raise MalformedToken(f"line {lineno}: cannot parse {bad!r} as an integer")
        values = line.strip(" \t[]").split(",")
        if width is None:
            width = len(values)
        elif len(values) != width:
            raise RaggedRows(f"line {lineno} has {len(values)} values, expected {width}")
        rows.append(values)
    if not rows:
        raise EmptyInput("no pixel rows in CSV input")
    arr = np.array(rows, dtype=np.int64)
    if arr.min() < 0 or arr.max() > 255:
        r, c = np.argwhere((arr < 0) | (arr > 255))[0]
        raise ValueOutOfRange(f"value {arr[r, c]} at row {r + 1}, column {c + 1} is outside [0, 255]")
    return PixelMatrix(arr.astype(np.uint8))


def _first_bad_token(line: str) -> str:
    for tok in line.strip(" \t").strip("[]").split(","):
        if not re.fullmatch(r"[ \t]*[+-]?\d+[ \t]*", tok):
            return tok.strip()
    return line


def write_csv(m: PixelMatrix) -> str:
    """Canonical CSV: no brackets, no spaces, LF endings, no final newline."""
    digits = _DIGITS.__getitem__
    return "\n".join([",".join(map(digits, row)) for row in m.pixels.tolist()])


# -- netpbm ----------------------------------------------------------------

_PNM_WS = b" \t\r\n\v\f"


def _read_header(buf: bytes, count: int) -> tuple[list[int], int]:
    """Read ``count`` integer header fields after the magic number.

    Returns the fields and the offset of the byte following the last one.
    """
    fields = []
    pos = 2
    n = len(buf)
    while len(fields) < count:
        while pos < n and (buf[pos] in _PNM_WS or buf[pos] == ord("#")):
            if buf[pos] == ord("#"):
                while pos < n and buf[pos] not in b"\r\n":
                    pos += 1
            else:
                pos += 1
        start = pos
        while pos < n and buf[pos] not in _PNM_WS and buf[pos] != ord("#"):
            pos += 1
        if start == pos:
            raise TruncatedInput("header ends before all fields were read")
        tok = buf[start:pos]
        if not tok.isdigit():
            raise MalformedToken(f"bad header field {tok!r}")
        fields.append(int(tok))
    return fields, pos


def _read_netpbm(buf: bytes, allowed: dict[bytes, tuple[int, bool]]) -> tuple[bytes, int, int, np.ndarray]:
    magic = bytes(buf[:2])
    if magic not in allowed:
        raise UnsupportedFormat(f"unsupported netpbm magic {magic!r}")
    channels, binary = allowed[magic]
    (width, height, maxval), pos = _read_header(buf, 3)
    if width < 1 or height < 1:
        raise UnsupportedFormat(f"invalid dimensions {width}x{height}")
    if not 1 <= maxval <= 255:
        raise UnsupportedFormat(f"maxval {maxval} is not supported (must be 1..255)")
    need = width * height * channels
    if binary:
        # exactly one whitespace byte separates the header from the raster
        pos += 1
        raster = buf[pos:pos + need]
        if len(raster) < need:
            raise TruncatedInput(f"expected {need} sample bytes, got {len(raster)}")
        samples = np.frombuffer(raster, dtype=np.uint8)
    else:
        text = re.sub(rb"#[^\r\n]*", b" ", bytes(buf[pos:]))
        toks = text.split()
        if len(toks) < need:
            raise TruncatedInput(f"expected {need} samples, got {len(toks)}")
        try:
            samples = np.array([int(t) for t in toks[:need]], dtype=np.int64)
        except ValueError:
            raise MalformedToken("non-integer sample in ASCII raster") from None
    if samples.size and samples.max() > maxval:
        raise ValueOutOfRange(f"sample {int(samples.max())} exceeds maxval {maxval}")
    shape = (height, width, channels) if channels > 1 else (height, width)
    return magic, width, height, samples.reshape(shape)


def parse_pgm(buf: bytes) -> PixelMatrix:
    """Decode a P2 (ASCII) or P5 (binary) graymap with maxval <= 255."""
    _, _, _, samples = _read_netpbm(bytes(buf), {b"P2": (1, False), b"P5": (1, True)})
    return PixelMatrix(samples.astype(np.uint8))


def parse_ppm(buf: bytes) -> np.ndarray:
    """Decode a P3 or P6 pixmap into a ``(rows, cols, 3)`` uint8 array."""
    _, _, _, samples = _read_netpbm(bytes(buf), {b"P3": (3, False), b"P6": (3, True)})
    return samples.astype(np.uint8)


def write_pgm(m: PixelMatrix) -> bytes:
    header = f"P5\n{m.cols} {m.rows}\n255\n".encode("ascii")
    return header + m.pixels.tobytes()

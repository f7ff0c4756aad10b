"""Measurement harness: wall time, peak heap, ratios and complexity exponents."""

from __future__ import annotations

import contextlib
import csv
import enum
import io
import logging
import math
import statistics
import time
import tracemalloc
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .archive import compress_csv, decompress_to_csv
from .codecs import LOSSLESS, CodecId
from .codecs.lz77 import DEFAULT_WINDOW
from .dataset import image_files, ingest_image, label_for
from .errors import (
    DegenerateSamples,
    EmptyCorpus,
    MeasurementUnavailable,
    RoundTripMismatch,
    ZeroOutput,
)
from .matrix import ImageLabel, parse_csv, write_csv

__all__ = [
    "Direction",
    "BenchRecord",
    "ExponentFit",
    "RECORD_HEADER",
    "time_operation",
    "allocation_counter",
    "measure_peak_memory",
    "compression_ratio",
    "fit_complexity_exponent",
    "fit_dimension_exponents",
    "scaling_samples",
    "run_corpus",
    "corpus_labels",
    "write_records",
    "read_records",
]

log = logging.getLogger(__name__)

RECORD_HEADER = (
    "codec",
    "image_id",
    "direction",
    "input_bytes",
    "output_bytes",
    "input_pixels",
    "wall_time_s",
    "peak_heap_bytes",
)


class Direction(enum.Enum):
    COMPRESS = "compress"
    DECOMPRESS = "decompress"


@dataclass(frozen=True)
class BenchRecord:
    codec: CodecId
    image_id: str
    direction: Direction
    input_bytes: int
    output_bytes: int
    input_pixels: int
    wall_time: float
    peak_heap_bytes: int

    def __post_init__(self):
        if self.wall_time < 0 or self.output_bytes < 0 or self.input_bytes < 0:
            raise ValueError("bench record sizes and times must be non-negative")


@dataclass(frozen=True)
class ExponentFit:
    exponent: float
    coefficient: float
    r_squared: float
    sample_count: int

    def predict(self, size: float) -> float:
        return self.coefficient * size ** self.exponent


# -- timing and memory -----------------------------------------------------

def _timed(op: Callable[[], object], runs: int):
    if runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")
    result = op()  # warm-up, untimed
    times = []
    for _ in range(runs):
        start = time.perf_counter()
        result = op()
        times.append(time.perf_counter() - start)
    return statistics.median(times), result


def time_operation(op: Callable[[], object], runs: int = 3) -> float:
    """Median wall time of ``runs`` calls, after one untimed warm-up call."""
    return _timed(op, runs)[0]


@contextlib.contextmanager
def allocation_counter():
    """Install the tracemalloc-based allocation counter for the enclosed block.

    Nested use is harmless; only the outermost block stops tracing.
    """
    started = not tracemalloc.is_tracing()
    if started:
        tracemalloc.start()
    try:
        yield
    finally:
        if started:
            tracemalloc.stop()


def measure_peak_memory(op: Callable[[], object]) -> int:
    """High-water mark of live traced bytes above the starting level during ``op``.

    Only one measurement may run at a time; the counter is process-wide.
    """
    if not tracemalloc.is_tracing():
        raise MeasurementUnavailable("allocation counter is not installed (use allocation_counter())")
    base, _ = tracemalloc.get_traced_memory()
    tracemalloc.reset_peak()
    op()
    _, peak = tracemalloc.get_traced_memory()
    return max(0, peak - base)


def compression_ratio(input_bytes: int, output_bytes: int) -> float:
    if output_bytes < 1:
        raise ZeroOutput("compression ratio is undefined for empty output")
    return input_bytes / output_bytes


# -- complexity fitting ----------------------------------------------------

def fit_complexity_exponent(samples: Iterable[tuple[float, float]]) -> ExponentFit:
    """Least-squares line through (ln size, ln time).

    The slope is the empirical exponent ``k`` in ``time ~ c * size**k``.
    """
    pts = [(float(n), float(t)) for n, t in samples]
    if len(pts) < 3:
        raise DegenerateSamples(f"need at least 3 samples, got {len(pts)}")
    sizes = [n for n, _ in pts]
    if len(set(sizes)) != len(sizes):
        raise DegenerateSamples("sample sizes must be distinct")
    if any(n <= 0 or t <= 0 for n, t in pts):
        raise DegenerateSamples("sizes and times must be strictly positive")
    x = np.log(sizes)
    y = np.log([t for _, t in pts])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum(resid ** 2))
    # a flat, perfectly fitted line has no variance to explain
    r2 = 1.0 if ss_tot <= 1e-24 else 1.0 - ss_res / ss_tot
    return ExponentFit(float(slope), math.exp(intercept), min(1.0, max(0.0, r2)), len(pts))


def fit_dimension_exponents(samples: Iterable[tuple[int, int, float]]) -> tuple[float, float]:
    """Separate row and column exponents from (rows, cols, time) samples.

    Needs samples that vary the two dimensions independently; square-only
    samples make the system singular and raise :class:`DegenerateSamples`.
    """
    pts = [(float(r), float(c), float(t)) for r, c, t in samples]
    if len(pts) < 3 or any(v <= 0 for p in pts for v in p):
        raise DegenerateSamples("need at least 3 strictly positive (rows, cols, time) samples")
    design = np.column_stack([np.log([p[0] for p in pts]), np.log([p[1] for p in pts]), np.ones(len(pts))])
    if np.linalg.matrix_rank(design) < 3:
        raise DegenerateSamples("rows and cols do not vary independently")
    coef, *_ = np.linalg.lstsq(design, np.log([p[2] for p in pts]), rcond=None)
    return float(coef[0]), float(coef[1])


def scaling_samples(
    make_op: Callable[[int], Callable[[], object]], sizes: Sequence[int], runs: int = 3
) -> list[tuple[int, float]]:
    """Time ``make_op(size)()`` for each size; returns (size, median seconds)."""
    return [(size, time_operation(make_op(size), runs)) for size in sizes]


# -- corpus runs -----------------------------------------------------------

def corpus_labels(root) -> dict[str, ImageLabel]:
    root = Path(root)
    return {p.stem: label_for(root, p) for p in image_files(root)}


def _measure(op, runs: int, memory: bool):
    seconds, result = _timed(op, runs)
    peak = 0
    if memory:
        with allocation_counter():
            peak = measure_peak_memory(op)
    return seconds, peak, result


def run_corpus(
    root,
    codecs: Sequence[CodecId],
    runs: int = 3,
    *,
    scale=None,
    window: int = DEFAULT_WINDOW,
    raw_pixels: bool = False,
    measure_memory: bool = True,
) -> list[BenchRecord]:
    """Benchmark every image under ``root`` with every codec, both directions.

    Images are converted to canonical CSV first; that text is the input
    size. Decompression is timed on the frame the compression produced.
    Lossless round trips are checked and a mismatch raises
    :class:`RoundTripMismatch` naming the image.
    """
    root = Path(root)
    paths = image_files(root)
    if not paths:
        raise EmptyCorpus(f"no CSV/PGM/PPM images under {root}")
    records = []
    for path in paths:
        try:
            matrix = ingest_image(path)
        except Exception as exc:
            raise type(exc)(f"{path}: {exc}") from exc
        source = write_csv(matrix).encode("ascii")
        pixels = matrix.rows * matrix.cols
        for codec in codecs:
            codec = CodecId(codec)
            opts = dict(scale=scale, window=window, raw_pixels=raw_pixels)
            log.info("%s: %s", path.name, codec.slug)
            c_time, c_peak, frame = _measure(lambda: compress_csv(source, codec, **opts), runs, measure_memory)
            d_time, d_peak, restored = _measure(
                lambda: decompress_to_csv(frame, raw_pixels=raw_pixels), runs, measure_memory
            )
            if codec in LOSSLESS:
                if restored != source:
                    raise RoundTripMismatch(f"{path}: {codec.slug} round trip does not reproduce the input")
            elif parse_csv(restored).shape != matrix.shape:
                raise RoundTripMismatch(f"{path}: {codec.slug} reconstruction has the wrong dimensions")
            records.append(BenchRecord(codec, path.stem, Direction.COMPRESS, len(source), len(frame),
                                       pixels, c_time, c_peak))
            records.append(BenchRecord(codec, path.stem, Direction.DECOMPRESS, len(frame), len(restored),
                                       pixels, d_time, d_peak))
    return records


# -- records CSV -----------------------------------------------------------

def records_text(records: Iterable[BenchRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RECORD_HEADER)
    for r in records:
        writer.writerow((r.codec.slug, r.image_id, r.direction.value, r.input_bytes, r.output_bytes,
                         r.input_pixels, repr(r.wall_time), r.peak_heap_bytes))
    return buf.getvalue()


def write_records(records: Iterable[BenchRecord], path) -> None:
    Path(path).write_text(records_text(records), encoding="utf-8", newline="")


def read_records(path) -> list[BenchRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader, ()))
        if header != RECORD_HEADER:
            raise ValueError(f"{path}: expected header {','.join(RECORD_HEADER)}")
        return [
            BenchRecord(CodecId.parse(c), i, Direction(d), int(ib), int(ob), int(px), float(t), int(m))
            for c, i, d, ib, ob, px, t, m in reader
        ]


"""Corpus preparation: grayscale ingest, labeled manifests, seeded splits."""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DuplicateId, EmptyList, MissingRoot, UnsupportedFormat
from .matrix import ImageLabel, PixelMatrix, parse_csv, parse_pgm, parse_ppm, write_csv

__all__ = [
    "Split",
    "DatasetItem",
    "SplitMix64",
    "rgb_to_gray",
    "ingest_image",
    "image_files",
    "label_for",
    "split_dataset",
    "build_manifest",
    "write_manifest",
    "read_manifest",
    "apply_split",
    "ingest_tree",
    "MANIFEST_HEADER",
]

IMAGE_SUFFIXES = (".csv", ".pgm", ".ppm", ".pnm")
MANIFEST_HEADER = ("image_id", "label", "split")
MANIFEST_NAME = "manifest.csv"
_MASK64 = (1 << 64) - 1


class Split(enum.Enum):
    TRAIN = "train"
    TEST = "test"


@dataclass(frozen=True)
class DatasetItem:
    image_id: str
    label: ImageLabel
    split: Split


class SplitMix64:
    """SplitMix64 (Steele, Lea and Flood) with the usual published constants."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)


def rgb_to_gray(r, g, b):
    """Rec.601 luma rounded half-up. Works on scalars and integer arrays."""
    # integer weights out of 1000 keep the rounding exact
    if np.ndim(r) == 0 and np.ndim(g) == 0 and np.ndim(b) == 0:
        for v in (r, g, b):
            if not 0 <= v <= 255:
                raise ValueError(f"intensity {v} outside [0, 255]")
        return (299 * int(r) + 587 * int(g) + 114 * int(b) + 500) // 1000
    r, g, b = (np.asarray(v, dtype=np.int64) for v in (r, g, b))
    return (299 * r + 587 * g + 114 * b + 500) // 1000


def ingest_image(path) -> PixelMatrix:
    """Load a PGM, PPM (converted to gray) or CSV file as a pixel matrix."""
    path = Path(path)
    buf = path.read_bytes()
    magic = buf[:2]
    if magic in (b"P2", b"P5"):
        return parse_pgm(buf)
    if magic in (b"P3", b"P6"):
        rgb = parse_ppm(buf)
        return PixelMatrix(rgb_to_gray(rgb[..., 0], rgb[..., 1], rgb[..., 2]).astype(np.uint8))
    if path.suffix.lower() == ".csv":
        return parse_csv(buf)
    raise UnsupportedFormat(f"{path.name}: not a PGM, PPM or CSV file (starts with {buf[:4]!r})")


def image_files(root) -> list[Path]:
    root = Path(root)
    return sorted(
        p for p in root.rglob("*")
        if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES and p.name != MANIFEST_NAME
    )


def label_for(root, path) -> ImageLabel:
    """Label from the first directory under ``root``: ``healthy/`` or ``sick/``."""
    parts = Path(path).relative_to(root).parts
    if len(parts) > 1:
        try:
            label = ImageLabel(parts[0].lower())
        except ValueError:
            return ImageLabel.UNLABELED
        return label
    return ImageLabel.UNLABELED


def _train_count(fraction: float, n: int) -> int:
    # round first so 0.7 * 20 style products do not ceil up on float noise
    return math.ceil(round(fraction * n, 9))


def split_dataset(ids, train_fraction: float = 0.7, seed: int = 42) -> dict[str, Split]:
    """Assign each id to Train or Test, reproducibly.

    Ids are sorted, shuffled with Fisher-Yates driven by SplitMix64, and the
    first ``ceil(train_fraction * n)`` become Train. The result is keyed in
    sorted id order.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train fraction must lie strictly between 0 and 1, got {train_fraction}")
    ids = list(ids)
    if not ids:
        raise EmptyList("no image ids to split")
    seen = set()
    for image_id in ids:
        if image_id in seen:
            raise DuplicateId(f"image id {image_id!r} appears more than once")
        seen.add(image_id)
    order = sorted(ids)
    rng = SplitMix64(seed)
    for i in range(len(order) - 1, 0, -1):
        j = rng.next() % (i + 1)
        order[i], order[j] = order[j], order[i]
    k = _train_count(train_fraction, len(order))
    train = set(order[:k])
    return {image_id: (Split.TRAIN if image_id in train else Split.TEST) for image_id in sorted(ids)}


def apply_split(items, train_fraction: float = 0.7, seed: int = 42) -> list[DatasetItem]:
    items = list(items)
    if not items:
        return []
    splits = split_dataset([it.image_id for it in items], train_fraction, seed)
    labels = {it.image_id: it.label for it in items}
    return [DatasetItem(i, labels[i], s) for i, s in splits.items()]


def build_manifest(root, train_fraction: float = 0.7, seed: int = 42, out=None) -> list[DatasetItem]:
    """Label every image under ``root`` by directory and assign splits.

    When ``out`` is given the manifest is also written there as CSV.
    """
    root = Path(root)
    if not root.is_dir():
        raise MissingRoot(f"corpus root {root} does not exist")
    items = [DatasetItem(p.stem, label_for(root, p), Split.TRAIN) for p in image_files(root)]
    items = apply_split(items, train_fraction, seed)
    if out is not None:
        write_manifest(items, out)
    return items


def manifest_text(items) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(MANIFEST_HEADER)
    for it in sorted(items, key=lambda it: it.image_id):
        writer.writerow((it.image_id, it.label.value, it.split.value))
    return buf.getvalue()


def write_manifest(items, path) -> None:
    Path(path).write_bytes(manifest_text(items).encode("utf-8"))


def read_manifest(path) -> list[DatasetItem]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if tuple(header or ()) != MANIFEST_HEADER:
            raise UnsupportedFormat(f"{path}: manifest header must be {','.join(MANIFEST_HEADER)}")
        return [DatasetItem(i, ImageLabel(l), Split(s)) for i, l, s in reader]


def ingest_tree(src, dst) -> list[Path]:
    """Convert every supported image under ``src`` to canonical CSV under ``dst``.

    The directory layout (``healthy/``, ``sick/``) is kept. Returns the
    written paths.
    """
    src, dst = Path(src), Path(dst)
    if not src.is_dir():
        raise MissingRoot(f"source directory {src} does not exist")
    written = []
    for path in image_files(src):
        target = dst / path.relative_to(src).with_suffix(".csv")
        try:
            m = ingest_image(path)
        except Exception as exc:
            raise type(exc)(f"{path}: {exc}") from exc
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(write_csv(m), encoding="ascii", newline="")
        written.append(target)
    return written

"""Command-line entry point: ``livc {ingest,compress,decompress,bench,split,report}``.

Exit status: 0 success, 1 usage error, 2 I/O or parse error, 3 codec
error, 4 round-trip verification failure. Failures print one line starting
with ``error:``.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__, bench, dataset, report
from .archive import decode_frame, encode_matrix
from .codecs import CodecId
from .codecs.lz77 import DEFAULT_WINDOW
from .errors import BenchError, CodecError, LivcError, RoundTripMismatch
from .lossy import ScaleSpec
from .matrix import ImageLabel, write_csv

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_CODEC = 3
EXIT_ROUNDTRIP = 4

DEFAULT_CODEC = CodecId.BWT_PIPELINE
# per-axis keep factor for the lossy codec: 1 / 0.66**2 ~ 2.3 fewer pixels
DEFAULT_FACTOR = 0.66


class UsageError(Exception):
    pass


class Failure(Exception):
    def __init__(self, stage: str, exc: BaseException):
        super().__init__(stage, exc)
        self.stage = stage
        self.exc = exc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _codec(text: str) -> CodecId:
    try:
        return CodecId.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _codec_list(text: str) -> list[CodecId]:
    return [_codec(t) for t in text.split(",") if t.strip()]


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _factor(text: str) -> float:
    value = float(text)
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1], got {value}")
    return value


def _fraction(text: str) -> float:
    value = float(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"must lie strictly between 0 and 1, got {value}")
    return value


def _window(text: str) -> int:
    value = int(text)
    if not 1 <= value <= 0xFFFF:
        raise argparse.ArgumentTypeError(f"must lie in [1, 65535], got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="livc", description="Grayscale image compression toolkit and benchmark harness.")
    p.add_argument("--version", action="version", version=f"livc {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    codec_kw = dict(type=_codec, default=DEFAULT_CODEC,
                    help="store, huffman, lz77, lz78, bwt or lossy (default: bwt)")

    c = sub.add_parser("compress", help="compress one image into a frame file")
    c.add_argument("input", type=Path)
    c.add_argument("--out", type=Path, help="output frame path (default: INPUT.livc)")
    c.add_argument("--codec", **codec_kw)
    c.add_argument("--scale-rows", type=_positive, help="lossy target rows")
    c.add_argument("--scale-cols", type=_positive, help="lossy target columns")
    c.add_argument("--factor", type=_factor, help=f"lossy per-axis factor (default: {DEFAULT_FACTOR})")
    c.add_argument("--window", type=_window, default=DEFAULT_WINDOW, help="LZ77 window size")
    c.add_argument("--raw-pixels", action="store_true", help="lossless codecs encode raw pixels, not CSV")

    d = sub.add_parser("decompress", help="restore CSV from a frame file")
    d.add_argument("input", type=Path)
    d.add_argument("--out", type=Path, help="output CSV path (default: INPUT.csv)")
    d.add_argument("--raw-pixels", action="store_true", help="frame was written with --raw-pixels")

    b = sub.add_parser("bench", help="benchmark codecs over a corpus directory")
    b.add_argument("corpus", type=Path)
    b.add_argument("--codec", type=_codec_list, default=[DEFAULT_CODEC],
                   help="comma-separated codec list (default: bwt)")
    b.add_argument("--runs", type=_positive, default=3)
    b.add_argument("--factor", type=_factor, default=DEFAULT_FACTOR)
    b.add_argument("--window", type=_window, default=DEFAULT_WINDOW)
    b.add_argument("--raw-pixels", action="store_true")
    b.add_argument("--no-memory", action="store_true", help="skip peak-heap measurement")
    b.add_argument("--out", type=Path, default=Path("bench-report"), help="report directory")

    r = sub.add_parser("report", help="re-render tables and figures from a records CSV")
    r.add_argument("records", type=Path)
    r.add_argument("--manifest", type=Path, help="labels (default: manifest.csv beside the records)")
    r.add_argument("--out", type=Path, help="report directory (default: beside the records)")

    i = sub.add_parser("ingest", help="convert a labeled image tree to canonical CSV")
    i.add_argument("src", type=Path)
    i.add_argument("dst", type=Path)
    i.add_argument("--train-fraction", type=_fraction, default=0.7)
    i.add_argument("--seed", type=int, default=42)

    s = sub.add_parser("split", help="reassign train/test splits in a manifest")
    s.add_argument("manifest", type=Path)
    s.add_argument("--train-fraction", type=_fraction, default=0.7)
    s.add_argument("--seed", type=int, default=42)
    s.add_argument("--out", type=Path, help="write here instead of rewriting the manifest")
    return p


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (LivcError, OSError, ValueError) as exc:
        raise Failure(name, exc) from exc


def cmd_compress(args) -> int:
    if args.factor is not None and (args.scale_rows or args.scale_cols):
        raise UsageError("--factor cannot be combined with --scale-rows/--scale-cols")
    out = args.out or args.input.with_name(args.input.name + ".livc")
    matrix = _stage("parse", dataset.ingest_image, args.input)
    scale = None
    if args.codec == CodecId.LOSSY_NN:
        if args.scale_rows or args.scale_cols:
            scale = ScaleSpec(args.scale_rows or matrix.rows, args.scale_cols or matrix.cols)
        else:
            scale = args.factor or DEFAULT_FACTOR
    frame = _stage("encode", encode_matrix, matrix, args.codec, scale=scale,
                   window=args.window, raw_pixels=args.raw_pixels)
    data = frame.to_bytes()
    _stage("write", out.write_bytes, data)
    source = len(write_csv(matrix).encode("ascii"))
    print(f"input_bytes={source} output_bytes={len(data)} ratio={bench.compression_ratio(source, len(data)):.1f}:1")
    return EXIT_OK


def cmd_decompress(args) -> int:
    out = args.out or args.input.with_name(args.input.name + ".csv")
    data = _stage("read", args.input.read_bytes)
    matrix = _stage("decode", decode_frame, data, raw_pixels=args.raw_pixels)
    text = write_csv(matrix)
    _stage("write", out.write_text, text, encoding="ascii", newline="")
    print(f"rows={matrix.rows} cols={matrix.cols} output_bytes={len(text)}")
    return EXIT_OK


def _labels_from(path: Path) -> dict[str, ImageLabel]:
    if path is None or not path.exists():
        return {}
    return {it.image_id: it.label for it in dataset.read_manifest(path)}


def _write_report(records, labels, outdir: Path) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    text = report.render_report(records, labels, "text")
    (outdir / "report.txt").write_text(text, encoding="utf-8")
    (outdir / "report.csv").write_text(report.render_report(records, labels, "csv"), encoding="utf-8")
    report.render_figures(records, labels, outdir)
    print(text, end="")


def cmd_bench(args) -> int:
    if not args.codec:
        raise UsageError("--codec needs at least one codec")
    records = _stage("bench", bench.run_corpus, args.corpus, args.codec, args.runs, scale=args.factor,
                     window=args.window, raw_pixels=args.raw_pixels, measure_memory=not args.no_memory)
    labels = bench.corpus_labels(args.corpus)
    args.out.mkdir(parents=True, exist_ok=True)
    bench.write_records(records, args.out / "records.csv")
    items = [dataset.DatasetItem(i, l, dataset.Split.TRAIN) for i, l in labels.items()]
    _stage("write", dataset.write_manifest, dataset.apply_split(items), args.out / dataset.MANIFEST_NAME)
    _stage("report", _write_report, records, labels, args.out)
    return EXIT_OK


def cmd_report(args) -> int:
    records = _stage("read", bench.read_records, args.records)
    if not records:
        raise Failure("read", ValueError(f"{args.records} holds no records"))
    manifest = args.manifest or args.records.with_name(dataset.MANIFEST_NAME)
    labels = _stage("read", _labels_from, manifest)
    _stage("report", _write_report, records, labels, args.out or args.records.parent)
    return EXIT_OK


def cmd_ingest(args) -> int:
    written = _stage("ingest", dataset.ingest_tree, args.src, args.dst)
    manifest = args.dst / dataset.MANIFEST_NAME
    items = _stage("manifest", dataset.build_manifest, args.dst, args.train_fraction, args.seed, out=manifest)
    print(f"images={len(written)} manifest={manifest} "
          + " ".join(f"{lab.value}={sum(it.label == lab for it in items)}" for lab in ImageLabel))
    return EXIT_OK


def cmd_split(args) -> int:
    items = _stage("read", dataset.read_manifest, args.manifest)
    items = _stage("split", dataset.apply_split, items, args.train_fraction, args.seed)
    _stage("write", dataset.write_manifest, items, args.out or args.manifest)
    train = sum(it.split == dataset.Split.TRAIN for it in items)
    print(f"train={train} test={len(items) - train}")
    return EXIT_OK


COMMANDS = {
    "compress": cmd_compress,
    "decompress": cmd_decompress,
    "bench": cmd_bench,
    "report": cmd_report,
    "ingest": cmd_ingest,
    "split": cmd_split,
}


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, RoundTripMismatch):
        return EXIT_ROUNDTRIP
    if isinstance(exc, CodecError):
        return EXIT_CODEC
    return EXIT_IO


def _one_line(text: str) -> str:
    return " ".join(str(text).split())


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: usage: {_one_line(exc)}", file=sys.stderr)
        return EXIT_USAGE
    except Failure as f:
        print(f"error: {f.stage}: {type(f.exc).__name__}: {_one_line(f.exc)}", file=sys.stderr)
        return _exit_code(f.exc)
    except BenchError as exc:
        print(f"error: bench: {type(exc).__name__}: {_one_line(exc)}", file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())

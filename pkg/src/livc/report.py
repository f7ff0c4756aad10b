"""Summary tables and figures for benchmark records.

Three tables are produced: mean wall time and file size per codec and
direction, mean peak heap per codec and direction, and mean compression
ratio per image label for each codec. Sizes are reported in MB = 10**6
bytes.
"""

from __future__ import annotations

import csv
import io
import statistics
from collections import defaultdict
from pathlib import Path
from typing import Mapping, Sequence

from .bench import BenchRecord, Direction, ExponentFit, compression_ratio
from .codecs import HEADER_SIZE, CodecId
from .matrix import ImageLabel

__all__ = ["summarize", "render_report", "render_figures", "plot_scaling"]

MB = 1_000_000
# frame header plus the four u32 dimension fields of a lossy archive
_LOSSY_OVERHEAD = HEADER_SIZE + 16
_LABEL_ORDER = list(ImageLabel)


def _file_bytes(r: BenchRecord) -> int:
    # the image file: what goes into compression, what comes out of decompression
    return r.input_bytes if r.direction == Direction.COMPRESS else r.output_bytes


def summarize(records: Sequence[BenchRecord], labels: Mapping[str, ImageLabel]) -> dict[str, list[dict]]:
    """Group records into the three report tables as lists of row dicts."""
    if not records:
        raise ValueError("cannot summarize an empty record list")
    by_dir = defaultdict(list)
    for r in records:
        by_dir[r.codec, r.direction].append(r)
    keys = sorted(by_dir, key=lambda k: (int(k[0]), list(Direction).index(k[1])))
    time_rows, mem_rows = [], []
    for codec, direction in keys:
        group = by_dir[codec, direction]
        file_mb = statistics.fmean(_file_bytes(r) for r in group) / MB
        time_rows.append(dict(codec=codec.slug, direction=direction.value,
                              mean_time_s=statistics.fmean(r.wall_time for r in group),
                              mean_file_mb=file_mb, count=len(group)))
        mem_rows.append(dict(codec=codec.slug, direction=direction.value,
                             mean_peak_mb=statistics.fmean(r.peak_heap_bytes for r in group) / MB,
                             mean_file_mb=file_mb, count=len(group)))

    ratio_rows = []
    by_label = defaultdict(list)
    for r in records:
        if r.direction == Direction.COMPRESS:
            by_label[r.codec, labels.get(r.image_id, ImageLabel.UNLABELED)].append(r)
    for codec, label in sorted(by_label, key=lambda k: (int(k[0]), _LABEL_ORDER.index(k[1]))):
        group = by_label[codec, label]
        row = dict(codec=codec.slug, label=label.value,
                   mean_ratio=statistics.fmean(compression_ratio(r.input_bytes, r.output_bytes) for r in group))
        if codec == CodecId.LOSSY_NN:
            row["mean_pixel_ratio"] = statistics.fmean(
                compression_ratio(r.input_pixels, r.output_bytes - _LOSSY_OVERHEAD) for r in group
            )
        ratio_rows.append(row)
    return {"time": time_rows, "memory": mem_rows, "ratio": ratio_rows}


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _ratio_sections(rows):
    """Split ratio rows per codec into (title, columns, rows) sections."""
    sections = []
    for codec in dict.fromkeys(r["codec"] for r in rows):
        mine = [r for r in rows if r["codec"] == codec]
        sections.append((f"ratio codec={codec}", ["label", "mean_ratio"], mine))
        if "mean_pixel_ratio" in mine[0]:
            sections.append((f"pixel_ratio codec={codec}", ["label", "mean_pixel_ratio"], mine))
    return sections


def _sections(tables):
    return [
        ("time", ["codec", "direction", "mean_time_s", "mean_file_mb", "count"], tables["time"]),
        ("memory", ["codec", "direction", "mean_peak_mb", "mean_file_mb", "count"], tables["memory"]),
        *_ratio_sections(tables["ratio"]),
    ]


def _csv_block(title, columns, rows) -> str:
    buf = io.StringIO()
    buf.write(f"# {title}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def _text_block(title, columns, rows) -> str:
    cells = [columns] + [[_text_cell(row[c]) for c in columns] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(columns))]
    lines = [title, "-" * len(title)]
    for n, r in enumerate(cells):
        lines.append("  ".join(c.ljust(w) if i == 0 or n == 0 else c.rjust(w)
                               for i, (c, w) in enumerate(zip(r, widths))).rstrip())
    return "\n".join(lines) + "\n"


def _text_cell(v) -> str:
    if isinstance(v, float):
        return f"{v:.4f}" if abs(v) < 1000 else f"{v:.1f}"
    return str(v)


def render_report(
    records: Sequence[BenchRecord], labels: Mapping[str, ImageLabel], fmt: str = "text"
) -> str:
    """Render the time, memory and ratio tables as ``"text"`` or ``"csv"``."""
    tables = summarize(records, labels)
    if fmt == "csv":
        return "\n".join(_csv_block(*s) for s in _sections(tables))
    if fmt == "text":
        return "\n".join(_text_block(*s) for s in _sections(tables))
    raise ValueError(f"unknown report format {fmt!r}")


# -- figures ---------------------------------------------------------------

def _figure(width=6.4, height=3.6):
    from matplotlib.figure import Figure

    fig = Figure(figsize=(width, height), layout="constrained")
    return fig, fig.add_subplot()


def _grouped_bars(ax, groups, series, values, ylabel):
    import numpy as np

    x = np.arange(len(groups))
    width = 0.8 / max(1, len(series))
    for i, name in enumerate(series):
        ax.bar(x + (i - (len(series) - 1) / 2) * width, [values.get((g, name), 0.0) for g in groups],
               width, label=name)
    ax.set_xticks(x, groups)
    ax.set_ylabel(ylabel)
    ax.legend(frameon=False, fontsize="small")


def render_figures(records, labels, outdir) -> list[Path]:
    """Write time.png, memory.png and ratio.png bar charts into ``outdir``."""
    tables = summarize(records, labels)
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    codecs = list(dict.fromkeys(r["codec"] for r in tables["time"]))
    directions = list(dict.fromkeys(r["direction"] for r in tables["time"]))
    for name, key, ylabel in (("time", "mean_time_s", "mean wall time (s)"),
                              ("memory", "mean_peak_mb", "mean peak heap (MB)")):
        fig, ax = _figure()
        values = {(r["codec"], r["direction"]): r[key] for r in tables[name]}
        _grouped_bars(ax, codecs, directions, values, ylabel)
        path = outdir / f"{name}.png"
        fig.savefig(path, dpi=120)
        written.append(path)

    fig, ax = _figure()
    ratio_labels = list(dict.fromkeys(r["label"] for r in tables["ratio"]))
    ratio_codecs = list(dict.fromkeys(r["codec"] for r in tables["ratio"]))
    values = {(r["codec"], r["label"]): r["mean_ratio"] for r in tables["ratio"]}
    _grouped_bars(ax, ratio_codecs, ratio_labels, values, "mean compression ratio (x:1)")
    ax.axhline(1.0, color="0.5", linewidth=0.8, linestyle=":")
    path = outdir / "ratio.png"
    fig.savefig(path, dpi=120)
    written.append(path)
    return written


def plot_scaling(series: Mapping[str, Sequence[tuple[float, float]]], fits: Mapping[str, ExponentFit], path) -> Path:
    """Log-log plot of measured (size, seconds) series with their fitted lines."""
    fig, ax = _figure()
    for name, pts in series.items():
        xs = [p[0] for p in pts]
        line = ax.loglog(xs, [p[1] for p in pts], "o", label=name)[0]
        fit = fits.get(name)
        if fit is not None:
            ax.loglog(xs, [fit.predict(x) for x in xs], "-", color=line.get_color(), alpha=0.6,
                      label=f"{name} fit, k={fit.exponent:.2f}")
    ax.set_xlabel("input size")
    ax.set_ylabel("median wall time (s)")
    ax.legend(frameon=False, fontsize="small")
    fig.savefig(path, dpi=120)
    return Path(path)

"""Compression toolkit for grayscale livestock images stored as CSV pixel matrices.

The lossy codec downsamples with nearest-neighbour sampling and
reconstructs with bilinear interpolation; four lossless codecs (Huffman,
LZ77, LZ78 and a BWT/MTF/Huffman pipeline) share a framed container; the
bench harness measures time, peak heap, compression ratio and empirical
complexity exponents.
"""

__version__ = "0.1.0"

from .codecs import CodecFrame, CodecId, compress_bytes, decompress_bytes
from .lossy import LossyArchive, ScaleSpec, bilinear_resample, compress, decompress, nn_resample
from .matrix import ImageLabel, PixelMatrix, parse_csv, parse_pgm, write_csv, write_pgm

__all__ = [
    "CodecFrame",
    "CodecId",
    "ImageLabel",
    "LossyArchive",
    "PixelMatrix",
    "ScaleSpec",
    "bilinear_resample",
    "compress",
    "compress_bytes",
    "decompress",
    "decompress_bytes",
    "nn_resample",
    "parse_csv",
    "parse_pgm",
    "write_csv",
    "write_pgm",
]

"""Lossless byte-stream codecs behind a common framed container."""

from __future__ import annotations

from ..errors import UnknownCodec
from .bwt import (
    BwtBlock,
    bwt_forward,
    bwt_inverse,
    mtf_decode,
    mtf_encode,
    pipeline_decode,
    pipeline_encode,
)
from .frame import HEADER_SIZE, LOSSLESS, CodecFrame, CodecId
from .huffman import huffman_decode, huffman_encode
from .lz77 import DEFAULT_WINDOW, lz77_decode, lz77_encode
from .lz78 import lz78_decode, lz78_dictionary, lz78_encode

__all__ = [
    "BwtBlock",
    "CodecFrame",
    "CodecId",
    "DEFAULT_WINDOW",
    "HEADER_SIZE",
    "LOSSLESS",
    "bwt_forward",
    "bwt_inverse",
    "compress_bytes",
    "decompress_bytes",
    "huffman_decode",
    "huffman_encode",
    "lz77_decode",
    "lz77_encode",
    "lz78_decode",
    "lz78_dictionary",
    "lz78_encode",
    "mtf_decode",
    "mtf_encode",
]


def compress_bytes(data: bytes, codec: CodecId, *, window: int = DEFAULT_WINDOW) -> CodecFrame:
    """Encode ``data`` with a lossless codec. ``window`` only affects LZ77."""
    codec = CodecId(codec)
    if codec == CodecId.STORE:
        return CodecFrame(CodecId.STORE, bytes(data))
    if codec == CodecId.HUFFMAN:
        return huffman_encode(data)
    if codec == CodecId.LZ77:
        return lz77_encode(data, window)
    if codec == CodecId.LZ78:
        return lz78_encode(data)
    if codec == CodecId.BWT_PIPELINE:
        return pipeline_encode(data)
    raise UnknownCodec(f"{codec.name} is not a lossless byte codec")


_DECODERS = {
    CodecId.STORE: lambda frame: frame.payload,
    CodecId.HUFFMAN: huffman_decode,
    CodecId.LZ77: lz77_decode,
    CodecId.LZ78: lz78_decode,
    CodecId.BWT_PIPELINE: pipeline_decode,
}


def decompress_bytes(frame: CodecFrame | bytes) -> bytes:
    """Invert :func:`compress_bytes`; accepts a frame or its serialized bytes."""
    if not isinstance(frame, CodecFrame):
        frame = CodecFrame.from_bytes(frame)
    try:
        decode = _DECODERS[frame.codec]
    except KeyError:
        raise UnknownCodec(f"{frame.codec.name} frames are not lossless byte streams") from None
    return decode(frame)

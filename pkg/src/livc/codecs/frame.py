"""Self-describing container shared by every codec.

Layout: ``b"LIVC"``, version byte (1), codec id byte, payload length as
u32 little-endian, then the payload.
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass

from ..errors import (
    BadMagic,
    TruncatedBitstream,
    TruncatedInput,
    TrailingData,
    TruncatedToken,
    UnknownCodec,
    UnsupportedVersion,
)

MAGIC = b"LIVC"
VERSION = 1
_HEADER = struct.Struct("<4sBBI")
HEADER_SIZE = _HEADER.size


class CodecId(enum.IntEnum):
    STORE = 0
    HUFFMAN = 1
    LZ77 = 2
    LZ78 = 3
    BWT_PIPELINE = 4
    LOSSY_NN = 5

    @property
    def slug(self) -> str:
        return _SLUGS[self]

    @classmethod
    def parse(cls, name: str) -> CodecId:
        """Accept a slug (``"lz77"``, ``"bwt"``, ...), an enum name, or a number."""
        key = name.strip().lower().replace("-", "_")
        for codec, slug in _SLUGS.items():
            if key in (slug, codec.name.lower()):
                return codec
        if key.isdigit():
            return cls(int(key))
        raise ValueError(f"unknown codec {name!r}; choose from {', '.join(_SLUGS.values())}")


_SLUGS = {
    CodecId.STORE: "store",
    CodecId.HUFFMAN: "huffman",
    CodecId.LZ77: "lz77",
    CodecId.LZ78: "lz78",
    CodecId.BWT_PIPELINE: "bwt",
    CodecId.LOSSY_NN: "lossy",
}

_TRUNCATION = {
    CodecId.HUFFMAN: TruncatedBitstream,
    CodecId.BWT_PIPELINE: TruncatedBitstream,
    CodecId.LZ77: TruncatedToken,
    CodecId.LZ78: TruncatedToken,
}

LOSSLESS = (CodecId.STORE, CodecId.HUFFMAN, CodecId.LZ77, CodecId.LZ78, CodecId.BWT_PIPELINE)


@dataclass(frozen=True)
class CodecFrame:
    codec: CodecId
    payload: bytes

    def to_bytes(self) -> bytes:
        return _HEADER.pack(MAGIC, VERSION, int(self.codec), len(self.payload)) + self.payload

    def __len__(self) -> int:
        return HEADER_SIZE + len(self.payload)

    @classmethod
    def from_bytes(cls, buf: bytes) -> CodecFrame:
        buf = bytes(buf)
        if len(buf) < 4 or buf[:4] != MAGIC:
            raise BadMagic(f"expected magic {MAGIC!r}, found {buf[:4]!r}")
        if len(buf) < HEADER_SIZE:
            raise TruncatedInput("frame header is truncated")
        _, version, codec, length = _HEADER.unpack_from(buf)
        if version != VERSION:
            raise UnsupportedVersion(f"frame version {version} (this build reads version {VERSION})")
        try:
            codec = CodecId(codec)
        except ValueError:
            raise UnknownCodec(f"codec id {codec} is not assigned") from None
        payload = buf[HEADER_SIZE:]
        if len(payload) < length:
            # report a short payload the way the codec's own decoder would
            raise _TRUNCATION.get(codec, TruncatedInput)(
                f"frame declares {length} payload bytes, found {len(payload)}"
            )
        if len(payload) > length:
            raise TrailingData(f"{len(payload) - length} trailing bytes after frame payload")
        return cls(codec, payload)

"""LZ78 phrase coding with an unbounded per-frame dictionary.

Tokens are ``(index, symbol)`` packed as u32 LE + u8, where index 0 is the
empty phrase and entry ``k`` is created by the ``k``-th token. A trailer
flag byte follows; when it is 1 the last token is a bare u32 index whose
phrase ends the input exactly.
"""

from __future__ import annotations

import struct
from typing import NamedTuple, Optional

from ..errors import BadIndex, TruncatedToken
from .frame import CodecFrame, CodecId

__all__ = ["Lz78Token", "lz78_tokens", "lz78_dictionary", "lz78_encode", "lz78_decode", "read_tokens"]

_TOKEN = struct.Struct("<IB")
_INDEX = struct.Struct("<I")


class Lz78Token(NamedTuple):
    index: int
    symbol: Optional[int]


def lz78_tokens(data: bytes) -> list[Lz78Token]:
    children: dict[tuple[int, int], int] = {}
    tokens = []
    node = 0
    for byte in bytes(data):
        child = children.get((node, byte))
        if child is not None:
            node = child
            continue
        tokens.append(Lz78Token(node, byte))
        children[node, byte] = len(tokens)
        node = 0
    if node:
        tokens.append(Lz78Token(node, None))
    return tokens


def lz78_dictionary(data: bytes) -> list[bytes]:
    """Phrases in the order the encoder adds them (entry 1 first)."""
    phrases = [b""]
    for index, symbol in lz78_tokens(data):
        if symbol is not None:
            phrases.append(phrases[index] + bytes([symbol]))
    return phrases[1:]


def lz78_encode(data: bytes) -> CodecFrame:
    tokens = lz78_tokens(data)
    parts = []
    flag = 0
    for index, symbol in tokens:
        if symbol is None:
            parts.append(_INDEX.pack(index))
            flag = 1
        else:
            parts.append(_TOKEN.pack(index, symbol))
    parts.append(bytes([flag]))
    return CodecFrame(CodecId.LZ78, b"".join(parts))


def read_tokens(payload: bytes) -> list[Lz78Token]:
    if not payload:
        raise TruncatedToken("payload lacks the trailer flag byte")
    body, flag = payload[:-1], payload[-1]
    tail = None
    if flag == 1:
        if len(body) < _INDEX.size:
            raise TruncatedToken("trailer flag set but no final index present")
        (tail,) = _INDEX.unpack_from(body, len(body) - _INDEX.size)
        body = body[:-_INDEX.size]
    elif flag != 0:
        raise TruncatedToken(f"bad trailer flag {flag}")
    if len(body) % _TOKEN.size:
        raise TruncatedToken(f"{len(body) % _TOKEN.size} stray bytes after the last whole token")
    tokens = [Lz78Token(i, s) for i, s in _TOKEN.iter_unpack(body)]
    if tail is not None:
        tokens.append(Lz78Token(tail, None))
    return tokens


def lz78_decode(frame: CodecFrame) -> bytes:
    if frame.codec != CodecId.LZ78:
        raise ValueError(f"expected an LZ78 frame, got {frame.codec.name}")
    phrases = [b""]
    out = []
    for pos, (index, symbol) in enumerate(read_tokens(frame.payload)):
        if index >= len(phrases):
            raise BadIndex(f"token {pos} refers to entry {index}, only {len(phrases) - 1} defined")
        if symbol is None:
            out.append(phrases[index])
        else:
            phrase = phrases[index] + bytes((symbol,))
            phrases.append(phrase)
            out.append(phrase)
    return b"".join(out)

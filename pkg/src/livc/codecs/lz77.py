"""LZ77 with a sliding window and greedy longest-match parsing.

Each token is ``(offset, length, next)`` packed as u16 LE, u8, u8. A
literal is ``(0, 0, byte)``. The token stream is followed by one flag
byte; when it is 1 the last token's ``next`` byte is not part of the
output.
"""

from __future__ import annotations

import struct
from typing import NamedTuple

from ..errors import BadOffset, TruncatedToken
from .frame import CodecFrame, CodecId

__all__ = ["Lz77Token", "lz77_tokens", "lz77_encode", "lz77_decode", "read_tokens", "DEFAULT_WINDOW"]

DEFAULT_WINDOW = 4096
MIN_MATCH = 3
MAX_MATCH = 255
_TOKEN = struct.Struct("<HBB")


class Lz77Token(NamedTuple):
    offset: int
    length: int
    next: int


def _longest_match(data: bytes, i: int, lo: int, max_len: int) -> tuple[int, int]:
    """Longest match for ``data[i:]`` starting in ``[lo, i)``; nearest wins ties.

    Returns ``(length, offset)``; length is 0 when nothing of at least
    MIN_MATCH bytes is found. Matches may run past ``i`` (overlapping copy).
    """
    if max_len < MIN_MATCH:
        return 0, 0
    best = 0
    best_off = 0
    need = MIN_MATCH
    # the rightmost occurrence of the current prefix is the nearest candidate
    j = data.rfind(data[i:i + need], lo, i + need - 1)
    while j >= 0:
        k = need
        while k < max_len and data[j + k] == data[i + k]:
            k += 1
        best, best_off = k, i - j
        if k >= max_len:
            break
        need = k + 1
        j = data.rfind(data[i:i + need], lo, i + need - 1)
    return best, best_off


def lz77_tokens(data: bytes, window: int = DEFAULT_WINDOW) -> list[Lz77Token]:
    if not 1 <= window <= 0xFFFF:
        raise ValueError(f"window must lie in [1, 65535], got {window}")
    data = bytes(data)
    n = len(data)
    tokens = []
    i = 0
    while i < n:
        remaining = n - i
        length, offset = _longest_match(data, i, max(0, i - window), min(MAX_MATCH, remaining))
        if length < MIN_MATCH:
            tokens.append(Lz77Token(0, 0, data[i]))
            i += 1
            continue
        if length == remaining:
            # keep a literal for the final token's `next` slot
            length -= 1
        tokens.append(Lz77Token(offset, length, data[i + length]))
        i += length + 1
    return tokens


def lz77_encode(data: bytes, window: int = DEFAULT_WINDOW) -> CodecFrame:
    tokens = lz77_tokens(data, window)
    payload = b"".join([_TOKEN.pack(*t) for t in tokens]) + b"\x00"
    return CodecFrame(CodecId.LZ77, payload)


def read_tokens(payload: bytes) -> tuple[list[Lz77Token], bool]:
    """Parse a payload into its tokens and the 'last next byte absent' flag."""
    if not payload:
        raise TruncatedToken("payload lacks the trailer flag byte")
    body, flag = payload[:-1], payload[-1]
    if len(body) % _TOKEN.size:
        raise TruncatedToken(f"{len(body) % _TOKEN.size} stray bytes after the last whole token")
    if flag not in (0, 1):
        raise TruncatedToken(f"bad trailer flag {flag}")
    if flag and not body:
        raise TruncatedToken("trailer flag set on an empty token stream")
    tokens = [Lz77Token(*t) for t in _TOKEN.iter_unpack(body)]
    return tokens, bool(flag)


def lz77_decode(frame: CodecFrame) -> bytes:
    if frame.codec != CodecId.LZ77:
        raise ValueError(f"expected an LZ77 frame, got {frame.codec.name}")
    tokens, drop_last = read_tokens(frame.payload)
    out = bytearray()
    for offset, length, nxt in tokens:
        if length:
            produced = len(out)
            if offset == 0 or offset > produced:
                raise BadOffset(f"offset {offset} reaches before the start ({produced} bytes produced)")
            start = produced - offset
            if offset >= length:
                out += out[start:start + length]
            else:
                # overlapping copy: the source repeats with period `offset`
                reps = -(-length // offset)
                out += (out[start:] * reps)[:length]
        elif offset:
            raise BadOffset(f"literal token carries offset {offset}")
        out.append(nxt)
    if drop_last:
        out.pop()
    return bytes(out)

"""Canonical Huffman coding over the byte alphabet.

Payload layout: 256 code-length bytes (0 = symbol absent), the decoded
length as u32 little-endian, then the code bits packed MSB-first with the
final byte zero-padded.
"""

from __future__ import annotations

import heapq
import struct

import numpy as np

from ..errors import CorruptTable, TruncatedBitstream
from .frame import CodecFrame, CodecId

__all__ = [
    "code_lengths",
    "canonical_codes",
    "encode_payload",
    "decode_payload",
    "huffman_encode",
    "huffman_decode",
    "read_table",
]

_COUNT = struct.Struct("<I")
TABLE_SIZE = 256
# decode tables are indexed by a window of this many bits at most
_LUT_MAX_BITS = 20
_CHUNK = 1 << 16


def code_lengths(freqs) -> list[int]:
    """Optimal prefix-code lengths for 256 symbol counts.

    Ties are broken by symbol value (leaves) and creation order (merged
    nodes), so equal inputs always give equal tables. A lone symbol gets
    length 1.
    """
    lengths = [0] * TABLE_SIZE
    heap = [(int(f), sym, [sym]) for sym, f in enumerate(freqs) if f]
    if not heap:
        return lengths
    if len(heap) == 1:
        lengths[heap[0][1]] = 1
        return lengths
    heapq.heapify(heap)
    order = TABLE_SIZE
    while len(heap) > 1:
        fa, _, a = heapq.heappop(heap)
        fb, _, b = heapq.heappop(heap)
        for sym in a:
            lengths[sym] += 1
        for sym in b:
            lengths[sym] += 1
        heapq.heappush(heap, (fa + fb, order, a + b))
        order += 1
    return lengths


def canonical_codes(lengths) -> list[int]:
    """Assign codes in (length, symbol) order; absent symbols map to 0."""
    codes = [0] * len(lengths)
    code = 0
    prev = 0
    for length, sym in sorted((l, s) for s, l in enumerate(lengths) if l):
        code <<= length - prev
        codes[sym] = code
        code += 1
        prev = length
    return codes


def _check_kraft(lengths) -> None:
    present = [l for l in lengths if l]
    if not present:
        return
    if len(present) == 1:
        if present[0] != 1:
            raise CorruptTable(f"single-symbol table must use length 1, got {present[0]}")
        return
    top = max(present)
    kraft = sum(1 << (top - l) for l in present)
    if kraft != 1 << top:
        raise CorruptTable(f"code lengths violate Kraft equality (sum = {kraft / (1 << top):g})")


def _pack_bits(symbols: np.ndarray, codes: np.ndarray, lengths: np.ndarray) -> bytes:
    width = int(lengths.max())
    shifts = np.arange(width, dtype=np.int64)
    pieces = []
    for start in range(0, symbols.size, _CHUNK):
        sym = symbols[start:start + _CHUNK]
        ln = lengths[sym].astype(np.int64)[:, None]
        cd = codes[sym][:, None]
        keep = shifts[None, :] < ln
        # bit j of a code (MSB first) sits at shift len - 1 - j
        bits = (cd >> np.where(keep, ln - 1 - shifts[None, :], 0)) & 1
        pieces.append(bits[keep].astype(np.uint8))
    return np.packbits(np.concatenate(pieces)).tobytes()


def encode_payload(data: bytes) -> bytes:
    symbols = np.frombuffer(bytes(data), dtype=np.uint8)
    freqs = np.bincount(symbols, minlength=TABLE_SIZE)
    lengths = code_lengths(freqs.tolist())
    header = bytes(lengths) + _COUNT.pack(symbols.size)
    if symbols.size == 0:
        return header
    codes = np.array(canonical_codes(lengths), dtype=np.int64)
    return header + _pack_bits(symbols, codes, np.array(lengths, dtype=np.int64))


def read_table(payload: bytes) -> tuple[list[int], int, bytes]:
    """Split a payload into (code lengths, symbol count, packed body)."""
    if len(payload) < TABLE_SIZE + _COUNT.size:
        raise TruncatedBitstream("payload is shorter than the code table header")
    lengths = list(payload[:TABLE_SIZE])
    (count,) = _COUNT.unpack_from(payload, TABLE_SIZE)
    return lengths, count, payload[TABLE_SIZE + _COUNT.size:]


def _decode_lut(lengths, codes, count: int, body: bytes, width: int) -> bytes:
    size = 1 << width
    lut_sym = np.zeros(size, dtype=np.uint8)
    lut_len = np.zeros(size, dtype=np.uint8)
    for sym, length in enumerate(lengths):
        if length:
            lo = codes[sym] << (width - length)
            hi = (codes[sym] + 1) << (width - length)
            lut_sym[lo:hi] = sym
            lut_len[lo:hi] = length
    bits = np.unpackbits(np.frombuffer(body, dtype=np.uint8))
    nbits = bits.size
    padded = np.concatenate([bits, np.zeros(width, dtype=np.uint8)])
    # window[p] = the `width` bits starting at bit p, as an integer
    window = np.zeros(nbits, dtype=np.int32)
    for j in range(width):
        window <<= 1
        window |= padded[j:j + nbits]
    sym_at = lut_sym[window].tolist()
    len_at = lut_len[window].tolist()
    out = bytearray(count)
    p = 0
    try:
        for i in range(count):
            step = len_at[p]
            if not step:
                raise CorruptTable(f"bit {p} does not start a valid code")
            out[i] = sym_at[p]
            p += step
    except IndexError:
        raise TruncatedBitstream(f"bitstream ended after {i} of {count} symbols") from None
    if p > nbits:
        raise TruncatedBitstream(f"bitstream ended inside symbol {count - 1}")
    return bytes(out)


def _decode_bitwise(lengths, codes, count: int, body: bytes) -> bytes:
    lookup = {(l, codes[s]): s for s, l in enumerate(lengths) if l}
    top = max(lengths)
    bits = np.unpackbits(np.frombuffer(body, dtype=np.uint8)).tolist()
    out = bytearray()
    p = 0
    for _ in range(count):
        code = 0
        length = 0
        while True:
            if p >= len(bits):
                raise TruncatedBitstream(f"bitstream ended after {len(out)} of {count} symbols")
            code = (code << 1) | bits[p]
            p += 1
            length += 1
            sym = lookup.get((length, code))
            if sym is not None:
                out.append(sym)
                break
            if length >= top:
                raise CorruptTable(f"bit {p - length} does not start a valid code")
    return bytes(out)


def decode_payload(payload: bytes) -> bytes:
    lengths, count, body = read_table(payload)
    _check_kraft(lengths)
    if count == 0:
        return b""
    if not any(lengths):
        raise CorruptTable(f"table is empty but {count} symbols are declared")
    codes = canonical_codes(lengths)
    width = max(lengths)
    if width <= _LUT_MAX_BITS:
        return _decode_lut(lengths, codes, count, body, width)
    return _decode_bitwise(lengths, codes, count, body)


def huffman_encode(data: bytes) -> CodecFrame:
    return CodecFrame(CodecId.HUFFMAN, encode_payload(data))


def huffman_decode(frame: CodecFrame) -> bytes:
    if frame.codec != CodecId.HUFFMAN:
        raise ValueError(f"expected a Huffman frame, got {frame.codec.name}")
    return decode_payload(frame.payload)

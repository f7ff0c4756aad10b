"""Burrows-Wheeler transform, move-to-front, and the block pipeline.

The pipeline splits its input into blocks, transforms each one, recodes
the result with move-to-front, and entropy-codes the concatenation with
Huffman. Payload layout::

    u32 block_count
    block_count * (u32 block_length, u32 primary_index)
    huffman payload of the concatenated MTF output
"""

from __future__ import annotations

import struct
from typing import NamedTuple

import numpy as np

from ..errors import EmptyBlock, IndexOutOfRange, TruncatedBitstream
from . import huffman
from .frame import CodecFrame, CodecId

__all__ = [
    "BwtBlock",
    "bwt_forward",
    "bwt_inverse",
    "rotation_order",
    "mtf_encode",
    "mtf_decode",
    "pipeline_encode",
    "pipeline_decode",
    "DEFAULT_BLOCK_SIZE",
    "MAX_BLOCK_SIZE",
]

DEFAULT_BLOCK_SIZE = 64 * 1024
MAX_BLOCK_SIZE = 1 << 20
_U32 = struct.Struct("<I")
_BLOCK = struct.Struct("<II")


class BwtBlock(NamedTuple):
    transformed: bytes
    primary_index: int


def rotation_order(block: bytes) -> np.ndarray:
    """Start indices of the block's cyclic rotations in sorted order.

    Prefix doubling: each round sorts by the rank pair (first k symbols,
    next k symbols), so at most log2(n) stable sorts are needed. Equal
    rotations (periodic blocks) keep index order.
    """
    n = len(block)
    idx = np.arange(n, dtype=np.int64)
    rank = np.frombuffer(block, dtype=np.uint8).astype(np.int64)
    order = np.argsort(rank, kind="stable")
    span = 256
    k = 1
    while k < n:
        key = rank * span + rank[(idx + k) % n]
        order = np.argsort(key, kind="stable")
        sorted_key = key[order]
        fresh = np.empty(n, dtype=np.int64)
        fresh[0] = 0
        np.cumsum(sorted_key[1:] != sorted_key[:-1], out=fresh[1:])
        rank = np.empty(n, dtype=np.int64)
        rank[order] = fresh
        span = int(fresh[-1]) + 1
        if span == n:
            break
        k *= 2
    return order


def bwt_forward(block: bytes, max_block: int = MAX_BLOCK_SIZE) -> BwtBlock:
    block = bytes(block)
    n = len(block)
    if n == 0:
        raise EmptyBlock("cannot transform an empty block")
    if n > max_block:
        raise ValueError(f"block of {n} bytes exceeds the {max_block}-byte limit")
    order = rotation_order(block)
    arr = np.frombuffer(block, dtype=np.uint8)
    last = arr[(order - 1) % n]
    primary = int(np.flatnonzero(order == 0)[0])
    return BwtBlock(last.tobytes(), primary)


def bwt_inverse(b: BwtBlock) -> bytes:
    last = bytes(b.transformed)
    n = len(last)
    if n == 0:
        raise EmptyBlock("cannot invert an empty block")
    if not 0 <= b.primary_index < n:
        raise IndexOutOfRange(f"primary index {b.primary_index} outside block of length {n}")
    # row r of the sorted matrix starts with the symbol at L[step[r]]
    step = np.argsort(np.frombuffer(last, dtype=np.uint8), kind="stable").tolist()
    out = bytearray(n)
    p = b.primary_index
    for i in range(n):
        p = step[p]
        out[i] = last[p]
    return bytes(out)


def mtf_encode(data: bytes) -> bytes:
    table = bytearray(range(256))
    out = bytearray(len(data))
    for i, byte in enumerate(data):
        j = table.index(byte)
        out[i] = j
        if j:
            table[1:j + 1] = table[:j]
            table[0] = byte
    return bytes(out)


def mtf_decode(data: bytes) -> bytes:
    table = bytearray(range(256))
    out = bytearray(len(data))
    for i, j in enumerate(data):
        byte = table[j]
        out[i] = byte
        if j:
            table[1:j + 1] = table[:j]
            table[0] = byte
    return bytes(out)


def pipeline_encode(data: bytes, block_size: int = DEFAULT_BLOCK_SIZE) -> CodecFrame:
    if not 1 <= block_size <= MAX_BLOCK_SIZE:
        raise ValueError(f"block size must lie in [1, {MAX_BLOCK_SIZE}], got {block_size}")
    data = bytes(data)
    headers = []
    recoded = []
    for start in range(0, len(data), block_size):
        blk = bwt_forward(data[start:start + block_size])
        headers.append(_BLOCK.pack(len(blk.transformed), blk.primary_index))
        recoded.append(mtf_encode(blk.transformed))
    body = huffman.encode_payload(b"".join(recoded))
    return CodecFrame(CodecId.BWT_PIPELINE, _U32.pack(len(headers)) + b"".join(headers) + body)


def pipeline_decode(frame: CodecFrame) -> bytes:
    if frame.codec != CodecId.BWT_PIPELINE:
        raise ValueError(f"expected a BWT pipeline frame, got {frame.codec.name}")
    payload = frame.payload
    if len(payload) < _U32.size:
        raise TruncatedBitstream("payload lacks the block count")
    (count,) = _U32.unpack_from(payload)
    table_end = _U32.size + count * _BLOCK.size
    if len(payload) < table_end:
        raise TruncatedBitstream(f"block table for {count} blocks is truncated")
    blocks = list(_BLOCK.iter_unpack(payload[_U32.size:table_end]))
    recoded = huffman.decode_payload(payload[table_end:])
    if sum(length for length, _ in blocks) != len(recoded):
        raise TruncatedBitstream(
            f"block lengths sum to {sum(length for length, _ in blocks)}, decoded {len(recoded)} bytes"
        )
    out = []
    pos = 0
    for length, primary in blocks:
        last = mtf_decode(recoded[pos:pos + length])
        out.append(bwt_inverse(BwtBlock(last, primary)))
        pos += length
    return b"".join(out)

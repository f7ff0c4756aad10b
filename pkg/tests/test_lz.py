import os

import pytest
from hypothesis import given, strategies as st

from livc.codecs import CodecFrame, CodecId
from livc.codecs.lz77 import Lz77Token, lz77_decode, lz77_encode, lz77_tokens, read_tokens
from livc.codecs.lz78 import Lz78Token, lz78_decode, lz78_dictionary, lz78_encode, lz78_tokens
from livc.errors import BadIndex, BadOffset, TruncatedToken
from oracles import lz77_brute, lz78_brute

small_alphabet = st.lists(st.sampled_from(b"ab c"), max_size=120).map(bytes)


# -- LZ77 ------------------------------------------------------------------

def test_lz77_empty():
    assert lz77_tokens(b"") == []
    assert lz77_encode(b"").payload == b"\x00"
    assert lz77_decode(lz77_encode(b"")) == b""


def test_lz77_overlapping_run():
    assert lz77_tokens(b"aaaaaa") == [(0, 0, ord("a")), (1, 4, ord("a"))]
    assert lz77_decode(lz77_encode(b"aaaaaa")) == b"aaaaaa"


def test_lz77_match_at_end():
    assert lz77_tokens(b"abcabc") == [(0, 0, 97), (0, 0, 98), (0, 0, 99), (3, 2, 99)]


def test_lz77_token_layout():
    payload = lz77_encode(b"aaaaaa").payload
    assert payload == b"\x00\x00\x00a" + b"\x01\x00\x04a" + b"\x00"


def test_lz77_random_round_trip():
    data = os.urandom(10_000)
    assert lz77_decode(lz77_encode(data)) == data


def test_lz77_bad_offset():
    payload = b"".join([b"\x00\x00\x00a", b"\x00\x00\x00b", (5).to_bytes(2, "little") + b"\x03x", b"\x00"])
    with pytest.raises(BadOffset):
        lz77_decode(CodecFrame(CodecId.LZ77, payload))


def test_lz77_truncated():
    payload = lz77_encode(b"hello hello hello").payload
    with pytest.raises(TruncatedToken):
        lz77_decode(CodecFrame(CodecId.LZ77, payload[:-2]))
    with pytest.raises(TruncatedToken):
        lz77_decode(CodecFrame(CodecId.LZ77, b""))


def test_lz77_trailer_flag_drops_last_next():
    payload = b"\x00\x00\x00a" + b"\x01\x00\x05z" + b"\x01"
    assert lz77_decode(CodecFrame(CodecId.LZ77, payload)) == b"aaaaaa"


def test_lz77_window_limits_offsets():
    data = b"abcdefgh" + b"x" * 20 + b"abcdefgh"
    assert all(t.offset <= 8 for t in lz77_tokens(data, window=8))
    assert any(t.offset == 28 for t in lz77_tokens(data, window=4096))
    with pytest.raises(ValueError):
        lz77_tokens(data, window=0)


@given(small_alphabet, st.integers(1, 40))
def test_lz77_matches_brute_force_parse(data, window):
    assert [tuple(t) for t in lz77_tokens(data, window)] == lz77_brute(data, window)


@given(st.binary(max_size=400), st.integers(1, 300))
def test_lz77_round_trip(data, window):
    frame = lz77_encode(data, window)
    tokens, _ = read_tokens(frame.payload)
    for t in tokens:
        assert t.offset <= window and (t.offset == 0) == (t.length == 0) and t.length <= 255
    assert lz77_decode(frame) == data


def test_lz77_long_runs_cap_at_255():
    data = b"q" * 1000
    tokens = lz77_tokens(data)
    assert max(t.length for t in tokens) == 255
    assert lz77_decode(lz77_encode(data)) == data


# -- LZ78 ------------------------------------------------------------------

def test_lz78_dictionary_example():
    assert lz78_dictionary(b"DAD DADABDAD") == [b"D", b"A", b"D ", b"DA", b"DAB", b"DAD"]


def test_lz78_tokens_example():
    expected = [(0, "D"), (0, "A"), (1, " "), (1, "A"), (4, "B"), (4, "D")]
    assert lz78_tokens(b"DAD DADABDAD") == [Lz78Token(i, ord(c)) for i, c in expected]
    assert lz78_decode(lz78_encode(b"DAD DADABDAD")) == b"DAD DADABDAD"


def test_lz78_empty():
    assert lz78_tokens(b"") == []
    assert lz78_decode(lz78_encode(b"")) == b""


def test_lz78_final_phrase_without_symbol():
    assert lz78_tokens(b"aba") == [(0, 97), (0, 98), (1, None)]
    payload = lz78_encode(b"aba").payload
    assert payload[-1] == 1 and len(payload) == 5 + 5 + 4 + 1
    assert lz78_decode(lz78_encode(b"aba")) == b"aba"


def test_lz78_bad_index():
    with pytest.raises(BadIndex):
        lz78_decode(CodecFrame(CodecId.LZ78, (7).to_bytes(4, "little") + b"x" + b"\x00"))


def test_lz78_truncated():
    with pytest.raises(TruncatedToken):
        lz78_decode(CodecFrame(CodecId.LZ78, b"\x00\x00\x00"))


@given(small_alphabet)
def test_lz78_matches_brute_force(data):
    assert [tuple(t) for t in lz78_tokens(data)] == lz78_brute(data)


@given(st.binary(max_size=500))
def test_lz78_round_trip_and_growth(data):
    phrases = [b""] + lz78_dictionary(data)
    for k, (index, symbol) in enumerate(t for t in lz78_tokens(data) if t.symbol is not None):
        assert phrases[k + 1] == phrases[index] + bytes([symbol])
    assert lz78_decode(lz78_encode(data)) == data


def test_lz78_random_round_trip():
    data = os.urandom(20_000)
    assert lz78_decode(lz78_encode(data)) == data

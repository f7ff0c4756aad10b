"""Exception hierarchy.

Every error raised by the library derives from :class:`LivcError`. The
intermediate classes group errors by the stage that produced them, which is
what the command line uses to pick an exit status.
"""


class LivcError(Exception):
    """Base class for all library errors."""


# -- parsing / I/O ---------------------------------------------------------

class ParseError(LivcError, ValueError):
    pass


class EmptyInput(ParseError):
    pass


class RaggedRows(ParseError):
    pass


class ValueOutOfRange(ParseError):
    pass


class MalformedToken(ParseError):
    pass


class UnsupportedFormat(ParseError):
    pass


class TruncatedInput(ParseError):
    pass


# -- codecs ----------------------------------------------------------------

class CodecError(LivcError, ValueError):
    pass


class UpscaleRequested(CodecError):
    pass


class BadMagic(CodecError):
    pass


class UnknownCodec(CodecError):
    pass


class UnsupportedVersion(CodecError):
    pass


class TrailingData(CodecError):
    pass


class CorruptTable(CodecError):
    pass


class TruncatedBitstream(CodecError):
    pass


class BadOffset(CodecError):
    pass


class TruncatedToken(CodecError):
    pass


class BadIndex(CodecError):
    pass


class EmptyBlock(CodecError):
    pass


class IndexOutOfRange(CodecError):
    pass


# -- benchmarking ----------------------------------------------------------

class BenchError(LivcError):
    pass


class ZeroOutput(BenchError, ValueError):
    pass


class DegenerateSamples(BenchError, ValueError):
    pass


class EmptyCorpus(BenchError):
    pass


class MeasurementUnavailable(BenchError, RuntimeError):
    pass


class RoundTripMismatch(BenchError):
    """A lossless codec failed to reproduce its input."""


# -- dataset ---------------------------------------------------------------

class DatasetError(LivcError):
    pass


class DuplicateId(DatasetError, ValueError):
    pass


class EmptyList(DatasetError, ValueError):
    pass


class MissingRoot(DatasetError, FileNotFoundError):
    pass

"""Exception hierarchy shared by every module."""


class SpecSparseError(Exception):
    """Base class for all errors raised by specsparse."""


class NonSquare(SpecSparseError):
    pass


class AsymmetricInput(SpecSparseError):
    pass


class EntryOutOfRange(SpecSparseError):
    """An entry read (or supplied) violates the |A_ij| <= 1 normalization."""


class EntryOutOfAlphabet(SpecSparseError):
    """An entry read from a binary-magnitude input is not in {-1, 0, 1}."""


class BadSizes(SpecSparseError):
    pass


class DimensionMismatch(SpecSparseError):
    pass


class ParseError(SpecSparseError):
    pass


class NotBinaryPsd(SpecSparseError):
    pass


class NoConvergence(SpecSparseError):
    pass


class DegenerateBlock(SpecSparseError):
    pass

"""Exception types raised across the package."""


class CpsTensorError(Exception):
    """Base class for all package errors."""


class SizeMismatch(CpsTensorError):
    pass


class IndexOutOfRange(CpsTensorError):
    pass


class OddOrder(CpsTensorError):
    pass


class OrderMismatch(CpsTensorError):
    pass


class NotSymmetric(CpsTensorError):
    pass


class NotPartialSymmetric(CpsTensorError):
    pass


class NotCps(CpsTensorError):
    pass


class NonHermitianInput(CpsTensorError):
    pass


class NoConvergence(CpsTensorError):
    pass


class SingularMatrix(CpsTensorError):
    pass


class ZeroMatrix(CpsTensorError):
    pass


class BadPermutation(CpsTensorError):
    pass


class NotRankOne(CpsTensorError):
    pass


class NotInSubspace(CpsTensorError):
    pass


class DegenerateNodes(CpsTensorError):
    pass


class TermBudgetExceeded(CpsTensorError):
    pass


class NonSymmetricEigenvector(CpsTensorError):
    pass


class ResidualTooLarge(CpsTensorError):
    pass


class NotUnit(CpsTensorError):
    pass


class UnsupportedDimension(CpsTensorError):
    pass


class Uncertified(CpsTensorError):
    pass


class ParseError(CpsTensorError):
    pass


class RangeError(CpsTensorError):
    pass

"""Exception hierarchy shared across the package."""


class TsFeatBenchError(Exception):
    """Base class for all package errors."""


# --- dataset ---------------------------------------------------------------

class MalformedHeader(TsFeatBenchError):
    pass


class UnequalLength(TsFeatBenchError):
    pass


class MissingValue(TsFeatBenchError):
    pass


class UnknownLabel(TsFeatBenchError):
    pass


class InvalidSize(TsFeatBenchError):
    pass


# --- kernels ---------------------------------------------------------------

class KernelTooLarge(TsFeatBenchError):
    pass


class EmptyActivations(TsFeatBenchError):
    pass


class TooShort(TsFeatBenchError):
    pass


class BudgetTooSmall(TsFeatBenchError):
    pass


# --- featurebank / intervals ------------------------------------------------

class WindowTooShort(TsFeatBenchError):
    pass


class SeriesTooShort(TsFeatBenchError):
    pass


# --- signature ---------------------------------------------------------------

class DimensionMismatch(TsFeatBenchError):
    pass


class PathTooShort(TsFeatBenchError):
    pass


# --- classifiers -------------------------------------------------------------

class ClassMissing(TsFeatBenchError):
    pass


class NotConverged(Warning):
    """Optimizer hit its iteration limit; reported, not fatal."""


class WidthMismatch(TsFeatBenchError):
    pass


class DegenerateCovariance(TsFeatBenchError):
    pass


# --- pipeline ----------------------------------------------------------------

class RowMismatch(TsFeatBenchError):
    pass


class EmptyPool(TsFeatBenchError):
    pass


class UnknownPreset(TsFeatBenchError):
    pass


# --- stats -------------------------------------------------------------------

class DegenerateTable(TsFeatBenchError):
    pass


class UnsupportedK(TsFeatBenchError):
    pass


class AllZeroDifferences(TsFeatBenchError):
    pass


class MissingLengths(TsFeatBenchError):
    pass

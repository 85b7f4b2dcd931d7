"""Exception hierarchy.

Validation problems (bad input, wrong shapes, non-elliptic specs) derive from
:class:`ValidationError`; numerical failures (no spectral gap, unstable sweeps,
non-integer quadrature) derive from :class:`NumericalError`.  The CLI maps the
two families to exit codes 2 and 3.
"""


class CylIndexError(Exception):
    pass


class ValidationError(CylIndexError):
    pass


class NumericalError(CylIndexError):
    pass


class SchemaError(ValidationError):
    pass


class NotElliptic(ValidationError):
    pass


class MatrixSizeMismatch(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class SizeMismatch(ValidationError):
    pass


class SingularSample(NumericalError):
    pass


class SingularSymbol(NumericalError):
    pass


class PhaseJump(NumericalError):
    pass


class NonClosure(NumericalError):
    pass


class AliasedGrid(NumericalError):
    pass


class NonIntegerResult(NumericalError):
    pass


class NoSpectralGap(NumericalError):
    pass


class Unstable(NumericalError):
    pass


class NotIdempotent(NumericalError):
    pass

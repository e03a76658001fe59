"""Exception types shared across the package."""


class VucertError(Exception):
    """Base class for all errors raised by vucert."""


class InputError(VucertError, ValueError):
    """Malformed or out-of-domain input (bad shape, bad symbol, bad file)."""


class FieldMismatchError(InputError):
    """Operands live in cyclotomic fields with different conductors."""


class NotMonicError(InputError):
    """A polynomial operation needs a monic input with nonzero constant term."""


class NonCommutingError(InputError):
    """Matrices that must pairwise commute do not."""


class IncompleteEigenvaluesError(InputError):
    """Eigenvalue list does not account for the whole space; enlarge the field."""


class SingularMatrixError(InputError):
    """An invertible matrix was required."""


class HypothesisError(InputError):
    """A theorem's hypotheses are not met by the given data."""


class OracleDisagreement(VucertError, AssertionError):
    """An argument and its independent oracle reached different conclusions."""

"""Exception hierarchy shared by all modules."""


class SuperInvError(Exception):
    """Base class for all library errors."""


class ValidationError(SuperInvError):
    """Malformed input data (bad JSON, parity violation, out-of-range index)."""

    def __init__(self, message, cell=None):
        super().__init__(message)
        self.cell = cell  # (row, col), 1-based, when a matrix entry is at fault


class GeneratorCountMismatch(SuperInvError):
    """Operands live over Grassmann algebras with different generator counts."""


class ShapeMismatch(SuperInvError):
    """Matrix shapes are incompatible with the requested operation."""


class UnconstrainedParity(SuperInvError):
    """Operation needs a declared even or odd parity class."""


class ZeroBody(SuperInvError):
    """Scalar with zero body cannot be inverted."""


class SingularBody(SuperInvError):
    """Matrix whose body is singular over the rationals."""

    def __init__(self, message, rank=None):
        super().__init__(message)
        self.rank = rank


class NonSplitting(SuperInvError):
    """Characteristic polynomial has an irrational irreducible factor."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        # ascending coefficient list of the residual factor
        self.residual = residual


class SharedEigenvalue(SuperInvError):
    """Sylvester operator is singular: the two spectra intersect."""


class MultipleEigenvalue(SuperInvError):
    """A repeated eigenvalue where pairwise distinct ones are required."""


class ZeroEigenvalue(SuperInvError):
    """Zero eigenvalue where nonzero ones are required."""


class NotBlockDiagonalSquare(SuperInvError):
    """The square of the matrix is not exactly block diagonal."""


class SingularZ(SuperInvError):
    """Lower-left block has a singular body."""


class NotSymmetric(SuperInvError):
    """Polynomial is not symmetric; carries a witnessing transposition."""

    def __init__(self, message, transposition=None):
        super().__init__(message)
        self.transposition = transposition


class NotInvariant(SuperInvError):
    """Polynomial fails an invariance condition; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotInL(SuperInvError):
    """Matrix is outside the common zero locus of the leading invariants."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ZeroDiscriminant(SuperInvError):
    """Closed-form denominator has zero body."""


class SamplingError(SuperInvError):
    """Rejection sampling exceeded its retry cap."""

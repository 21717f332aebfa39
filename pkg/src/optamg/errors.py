"""Exception hierarchy shared across the package.

Every numerical failure derives from :class:`NumericalError` so that callers
(notably the command line) can map it to a single exit status.
"""


class NumericalError(ArithmeticError):
    """Base class for mathematically meaningful failures."""


class SingularMatrixError(NumericalError):
    """A factorization or solve met a (numerically) singular matrix."""


class DenseLimitError(NumericalError):
    """A dense computation was requested above the configured size limit."""


class ComplexSpectrumError(NumericalError):
    """The pencil has eigenvalues whose imaginary parts exceed the tolerance."""


class NeutralVectorError(NumericalError):
    """An eigenvector has (nearly) zero indefinite norm ``v^T M v``."""


class DefectiveSpectrumError(NumericalError):
    """Eigenvectors of a cluster fail to span its invariant subspace."""


class NotSPDError(NumericalError):
    """A matrix required to be symmetric positive definite is not."""

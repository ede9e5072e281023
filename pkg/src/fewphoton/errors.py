"""Exception hierarchy.

Every error carries a short machine-readable ``name`` which the command line
front end reports in its JSON error payload.
"""


class FewPhotonError(Exception):
    name = "error"


class InvalidArgumentError(FewPhotonError, ValueError):
    name = "invalid-argument"


class DomainError(FewPhotonError, ValueError):
    """Raised when a closed form is requested outside the regime it covers."""

    name = "domain-error"


class DegenerateSpectrumError(FewPhotonError, ArithmeticError):
    """The requested spectral decomposition does not exist (too close to an EP)."""

    name = "degenerate-spectrum"


class PrincipalValuePointError(FewPhotonError, ValueError):
    name = "principal-value-point"


class InsufficientDataError(FewPhotonError, ValueError):
    name = "insufficient-data"


class ComplexityLimitError(FewPhotonError, ValueError):
    name = "complexity-limit"


class NumericalInstabilityError(FewPhotonError, ArithmeticError):
    name = "numerical-instability"


class QuadratureWarning(UserWarning):
    """Adaptive quadrature stopped at its subdivision cap above tolerance."""

"""Shared exception types.

Everything raised on purpose by this package derives from :class:`EfdaError`,
so simulation drivers can catch one base class when counting failed trials.
"""


class EfdaError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(EfdaError, ValueError):
    """Natural parameter lies outside the family's open parameter space."""


class SupportError(EfdaError, ValueError):
    """Observation lies outside the support of the family."""


class DegenerateDataError(EfdaError, ValueError):
    """Sufficient-statistic mean sits on the boundary of the moment range."""


class UnsupportedFamilyError(EfdaError, ValueError):
    """Operation is not defined for this family (e.g. scalar-only ops)."""


class EmptyClassError(EfdaError, ValueError):
    """A class label required by the fit has no observations."""


class NonConvergenceError(EfdaError, RuntimeError):
    """Iterative solver exhausted its iteration budget."""


class DataFormatError(EfdaError, ValueError):
    """Malformed data or config file content."""

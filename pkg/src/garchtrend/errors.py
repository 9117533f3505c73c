"""Exception hierarchy shared by every module.

Each class maps to one CLI exit code (see :mod:`garchtrend.cli`).
"""


class GarchTrendError(Exception):
    """Base class for all package errors."""


class DomainError(GarchTrendError, ValueError):
    """An argument lies outside the domain of the operation."""


class DegenerateDataError(GarchTrendError, ValueError):
    """Input data carry no information (e.g. zero sample variance)."""


class DataFormatError(GarchTrendError, ValueError):
    """An input file could not be parsed."""

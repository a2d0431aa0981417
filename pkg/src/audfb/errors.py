"""Exception types shared across the package."""

from __future__ import annotations


class AudfbError(Exception):
    """Base class for all library errors."""


class DomainError(AudfbError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ShapeError(AudfbError, ValueError):
    """Array lengths or shapes are inconsistent."""


class NotAFrameError(AudfbError, ArithmeticError):
    """The vector system or filter bank has lower frame bound zero."""


class ConvergenceError(AudfbError, RuntimeError):
    """An iterative solver failed to reach its tolerance.

    Attributes
    ----------
    residuals : list of float
        Relative residual (or update) norms, one entry per iteration.
    """

    def __init__(self, message: str, residuals: list[float] | None = None):
        super().__init__(message)
        self.residuals = list(residuals) if residuals is not None else []


class UnsupportedConfigError(AudfbError, ValueError):
    """A structurally valid request falls outside what this implementation supports."""


class ContainerError(AudfbError, ValueError):
    """A coefficient or mask container file is malformed or inconsistent."""

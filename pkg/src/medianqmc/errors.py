"""Semantic exception hierarchy shared across the package."""

from __future__ import annotations


class QmcError(Exception):
    """Base class for all package errors."""


class DomainError(QmcError, ValueError):
    """A numeric argument lies outside the mathematical domain of an operation."""


class WeightError(QmcError, ValueError):
    """A weight scheme is malformed or missing a required coordinate subset."""


class SizeError(QmcError, ValueError):
    """A requested enumeration exceeds the declared size budget."""


class ContractViolation(QmcError, ValueError):
    """A caller violated an explicit precondition (e.g. even-length median input)."""


class EvaluationError(QmcError, ArithmeticError):
    """An integrand produced a non-finite value at a quadrature node.

    Carries the offending node index, and the replicate index once the error
    has propagated through a multi-replicate run.
    """

    def __init__(self, message: str, node_index: int | None = None,
                 replicate_index: int | None = None):
        super().__init__(message)
        self.node_index = node_index
        self.replicate_index = replicate_index


class AccuracyError(QmcError, ArithmeticError):
    """A quadrature failed to reach the requested tolerance within budget."""


class InsufficientDataError(QmcError, ValueError):
    """Too few usable rows for a regression."""


class ConfigError(QmcError, ValueError):
    """A run configuration is inconsistent (e.g. missing true integral)."""

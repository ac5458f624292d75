"""Shared exception types."""

from __future__ import annotations


class RetraceError(Exception):
    """Base class for toolkit errors."""


class TransportError(RetraceError):
    """Network failure that persisted after bounded retries."""


class DecodeError(RetraceError):
    """Malformed API response."""

    def __init__(self, message: str, record_index: int | None = None):
        super().__init__(message)
        self.record_index = record_index


class ConfigurationError(RetraceError):
    """Missing or unreadable configuration artifact (tables, databases, paths)."""


class ValidationError(RetraceError):
    """Input violates a documented precondition or invariant."""


class ConflictError(RetraceError):
    """Optimistic write lost the race against a newer version."""

    def __init__(self, message: str, current_version: int):
        super().__init__(message)
        self.current_version = current_version


class DependencyError(RetraceError):
    """A pipeline stage is missing an upstream artifact."""


class SelectionError(RetraceError):
    """Coherence curve admits no plateau under the configured rule."""

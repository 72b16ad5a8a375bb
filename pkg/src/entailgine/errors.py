"""Exception hierarchy shared across the engine.

Every error raised by this package derives from :class:`EngineError`, so
callers (and the CLI) can catch one base type. Remote-backend failures are
split into distinct classes because retry and reporting logic differ per
failure mode.
"""

from __future__ import annotations

from typing import Sequence


class EngineError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(EngineError):
    """An input violated a documented invariant (bad scores, bad config, ...)."""


class ProtocolError(EngineError):
    """A backend response violated the scoring protocol."""


class EmptyDocumentError(ValidationError):
    """A pipeline that requires at least one span received an empty document."""


class TuningError(ValidationError):
    """Threshold tuning received an input it cannot be tuned on."""


class MetricError(ValidationError):
    """A metric precondition (shape, class presence) was violated."""


class BackendError(EngineError):
    """A scoring backend failed."""


class BatchScoreError(BackendError):
    """A batch could not be scored; carries the failing input indices."""

    def __init__(self, message: str, indices: Sequence[int]):
        super().__init__(message)
        self.indices = tuple(indices)


class RemoteError(BackendError):
    """Base class for remote-backend failures."""


class RemoteHTTPError(RemoteError):
    """The remote scorer returned a non-200 status (after retries)."""

    def __init__(self, message: str, status: int | None = None):
        super().__init__(message)
        self.status = status


class RemoteMalformedError(RemoteError):
    """The remote scorer's response body could not be parsed."""


class RemoteLengthMismatchError(RemoteError):
    """The remote scorer returned a different number of scores than requested."""

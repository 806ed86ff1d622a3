"""Exception hierarchy shared by all engine modules.

Every error carries a stable machine ``code`` so the HTTP layer can map
failures to (status, code) pairs without string matching.
"""

from __future__ import annotations


class RoEngineError(Exception):
    """Base class for all modeled failures."""

    code = "EngineError"


class DuplicateId(RoEngineError):
    code = "DuplicateId"


class UnknownId(RoEngineError):
    code = "UnknownId"


class DuplicateResource(RoEngineError):
    code = "DuplicateResource"


class ImmutableObject(RoEngineError):
    code = "ImmutableObject"


class UnknownTarget(RoEngineError):
    code = "UnknownTarget"


class EmptyBody(RoEngineError):
    code = "EmptyBody"


class ManifestSyntaxError(RoEngineError):
    """Malformed manifest text; reports the offending line and column."""

    code = "SyntaxError"

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class ModelError(RoEngineError):
    """Well-formed manifest that violates a model invariant."""

    code = "ModelError"


class NotMutable(RoEngineError):
    code = "NotMutable"


class NotPublic(RoEngineError):
    code = "NotPublic"


class NotLive(RoEngineError):
    code = "NotLive"


class NotReleased(RoEngineError):
    code = "NotReleased"


class RegistryUnavailable(RoEngineError):
    code = "RegistryUnavailable"


class UnknownChecklist(RoEngineError):
    code = "UnknownChecklist"


class EmptyHistory(RoEngineError):
    code = "EmptyHistory"


class UnknownDocument(RoEngineError):
    code = "UnknownDocument"


class ContextSizeOutOfRange(RoEngineError):
    code = "ContextSizeOutOfRange"


class UnknownCategory(RoEngineError):
    code = "UnknownCategory"


class NoPath(RoEngineError):
    code = "NoPath"


class NoCommonAncestor(RoEngineError):
    code = "NoCommonAncestor"


class DatasetTooSmall(RoEngineError):
    code = "DatasetTooSmall"


class UnknownFacet(RoEngineError):
    code = "UnknownFacet"


class InvalidBox(RoEngineError):
    code = "InvalidBox"

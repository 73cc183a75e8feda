"""Typed domain errors shared by the library, CLI, and service layers."""

from __future__ import annotations


class DefectDepError(Exception):
    """Base class for all domain errors; ``code`` is the stable machine name."""

    code = "error"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class MalformedXml(DefectDepError):
    code = "malformed-xml"


class UnsupportedVersion(DefectDepError):
    code = "unsupported-version"


class DanglingReference(DefectDepError):
    code = "dangling-reference"


class InvalidModel(DefectDepError):
    code = "invalid-model"


class EmptyProductModel(DefectDepError):
    code = "empty-product-model"


class DefectExceedsProduct(DefectDepError):
    code = "defect-exceeds-product"


class UnknownVersion(DefectDepError):
    code = "unknown-version"


class DuplicateVersion(DefectDepError):
    code = "duplicate-version"


class DuplicateDefect(DefectDepError):
    code = "duplicate-defect"


class InvalidDefect(DefectDepError):
    code = "invalid-defect"


class UnknownSeverityLevel(DefectDepError):
    code = "unknown-severity-level"


class UnknownFactorLevel(DefectDepError):
    code = "unknown-factor-level"


class EmptyConfig(DefectDepError):
    code = "empty-config"


class InvalidPriorityConfig(DefectDepError):
    code = "invalid-priority-config"


class NotFound(DefectDepError):
    code = "not-found"

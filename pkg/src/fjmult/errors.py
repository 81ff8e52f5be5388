"""Exception hierarchy shared by the library and the command line."""

from __future__ import annotations


class FJError(Exception):
    """Base class; ``code`` is the machine-readable tag used in JSON errors."""

    code = "error"

    def to_json(self) -> dict:
        return {"error": self.code, "message": str(self)}


class InvalidFieldError(FJError, ValueError):
    code = "invalid-field"


class UsageError(FJError, ValueError):
    code = "usage"


class ConsistencyError(FJError, AssertionError):
    code = "internal-consistency"


class SizeError(FJError, ValueError):
    code = "size-limit"


class NoDistinguishedError(FJError, ValueError):
    code = "no-distinguished-representation"


class ConstructionError(FJError, RuntimeError):
    code = "construction"


class ValidationError(FJError, RuntimeError):
    code = "validation"


class SchemaError(FJError, ValueError):
    code = "schema"

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(message)
        self.pointer = pointer

    def to_json(self) -> dict:
        out = super().to_json()
        out["pointer"] = self.pointer
        return out

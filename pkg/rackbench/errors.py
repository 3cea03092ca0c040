from typing import Any, Optional


class RackbenchError(Exception):
    """Base class for every domain error raised by rackbench."""

    error_code = "rackbench_error"

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class DegreeMismatchError(RackbenchError, ValueError):
    error_code = "degree_mismatch"


class GroupTooLargeError(RackbenchError, ValueError):
    error_code = "group_too_large"

    def __init__(self, cap: int):
        super().__init__(f"group too large: more than {cap} elements (cap={cap})")
        self.cap = cap


class InvalidStructureError(RackbenchError, ValueError):
    error_code = "invalid_structure"


class OrderOutOfRangeError(RackbenchError, ValueError):
    error_code = "order_out_of_range"


class NotInClassError(RackbenchError, ValueError):
    """Raised when a labeled digraph is outside D (or Q)."""

    error_code = "not_in_class"

    def __init__(self, detail: str, vertex: Optional[int] = None, label: Optional[int] = None):
        super().__init__(detail)
        self.vertex = vertex
        self.label = label


class InputParseError(RackbenchError, ValueError):
    error_code = "parse_error"


class BudgetExceededError(RackbenchError, RuntimeError):
    """Census ran out of wall clock or node budget; carries partial progress."""

    error_code = "budget_exceeded"

    def __init__(self, detail: str, progress: Any = None):
        super().__init__(detail)
        self.progress = progress

from __future__ import annotations

from typing import Any


class K0Error(ValueError):
    """Base class for every semantic error raised by k0lattice."""


class DimensionMismatch(K0Error):
    def __init__(self, left: int, right: int) -> None:
        super().__init__(f"dimension mismatch: n={left} vs n={right}")
        self.left = left
        self.right = right


class NotALatticeClass(K0Error):
    pass


class NotNilpotent(K0Error):
    pass


class NotUnipotent(K0Error):
    pass


class NotInCommutant(K0Error):
    pass


class NotAnIsometry(K0Error):
    """The operator does not preserve the Euler form over Q."""


class NotALatticeIsometry(K0Error):
    """A real isometry that does not preserve the integer lattice."""


class InconsistencyError(K0Error):
    """An input contradicts a structural fact the computation relies on."""


class VerificationError(K0Error):
    """A computed result failed its own certificate check."""


class BudgetExceeded(K0Error):
    def __init__(self, message: str, partial: dict[str, Any]) -> None:
        super().__init__(message)
        self.partial = partial


class MutationIndexError(K0Error):
    pass


class MalformedWord(K0Error):
    pass

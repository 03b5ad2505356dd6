"""Exception types shared across the package."""

from __future__ import annotations


class NetworkError(ValueError):
    """A graph is not a valid phylogenetic network, or an operation's precondition fails."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class NotTreeChildError(NetworkError):
    pass


class NewickSyntaxError(ValueError):
    """Malformed eNewick text. ``offset`` is the byte offset of the offending character."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class CapExceededError(ValueError):
    """Brute-force enumeration refused because the network has too many reticulations."""

    def __init__(self, reticulations: int, cap: int):
        super().__init__(
            f"network has k={reticulations} reticulations, above the enumeration cap of {cap}"
        )
        self.reticulations = reticulations
        self.cap = cap

from __future__ import annotations


class ParseError(ValueError):
    """Input text could not be parsed; ``position`` is a 0-based offset."""

    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class SupportOverflow(ValueError):
    """Combined support of two permutations exceeds the degree."""


class SupportTooLarge(ValueError):
    """A classical element's support is too large for the star construction."""


class GuardExceeded(RuntimeError):
    """A resource guard (group order, degree, sweep cap) would be exceeded."""

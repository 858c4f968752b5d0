"""Exception hierarchy."""

from __future__ import annotations


class LCSError(Exception):
    """Base class for every error raised by the library."""


class ParityError(LCSError):
    pass


class UnknownGenerator(LCSError):
    pass


class SlotCollision(LCSError):
    pass


class DimensionMismatch(LCSError):
    pass


class RepresentationError(LCSError):
    pass


class AxiomError(LCSError):
    """Invalid structure data, e.g. structure constants failing super-Jacobi."""


class ParseError(LCSError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message = message
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line else ""
        super().__init__(where + message)


class SemanticError(ParseError):
    pass

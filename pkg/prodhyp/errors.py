"""
Module defines exceptions raised by the toolkit
"""


class GeometryError(Exception):
    """
    Base class for exceptions
    """
    def __init__(self, msg: str) -> None:
        super().__init__(msg)
        self.msg = msg

    def __repr__(self) -> str:
        return f"{type(self).__name__}: '{self.msg}'"

    def __str__(self) -> str:
        return self.msg

class DomainError(GeometryError, ValueError):
    """
    Exception is raised when parameters are out of their valid range
    """

class InputShapeError(DomainError):
    """
    Exception is raised on vectors of the wrong length
    """

class DegeneratePlaneError(DomainError):
    """
    Exception is raised on attempt to take the sectional curvature of a degenerate plane
    """

class NoRealSolution(DomainError):
    """
    Exception is raised when a construction has no real solution
    """

class FrameIndexError(GeometryError, IndexError):
    """
    Exception is raised on frame indices outside of 1..n
    """

class FocalPointError(GeometryError, ArithmeticError):
    """
    Exception is raised when the parallel family degenerates
    """
    def __init__(self, msg: str, s: float, curvature: float) -> None:
        super().__init__(msg)
        self.s = s
        self.curvature = curvature

class InvariantViolation(GeometryError, ValueError):
    """
    Exception is raised when a value type invariant doesn't hold
    """

class BranchPreconditionError(GeometryError, ValueError):
    """
    Exception is raised when a proof branch is entered with data it doesn't cover
    """

class ConfigError(GeometryError, ValueError):
    """
    Exception is raised on malformed or invalid run configs
    """
    def __init__(self, msg: str, line: int|None = None, field: str|None = None) -> None:
        if line is not None:
            msg = f"line {line}: {msg}"
        elif field is not None:
            msg = f"{field}: {msg}"
        super().__init__(msg)
        self.line = line
        self.field = field

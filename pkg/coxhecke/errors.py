"""
Error types raised by the engine.

Input problems derive from ValueError, budget and internal consistency
failures from RuntimeError, so callers catching builtins keep working.
"""

from typing import Optional


class EngineError(Exception):
    """Root of every error raised by coxhecke."""


# ── Input validation ─────────────────────────────────────

class MatrixError(EngineError, ValueError):
    pass


class MatrixShapeError(MatrixError):
    pass


class AsymmetricError(MatrixError):

    def __init__(self, i: int, j: int, m_ij: int, m_ji: int):
        self.i, self.j = i, j
        super().__init__(f"Asymmetric Coxeter matrix at ({i},{j}): {m_ij} != {m_ji}")


class BadDiagonalError(MatrixError):

    def __init__(self, i: int, value: int):
        self.i = i
        super().__init__(f"Diagonal entry ({i},{i}) must be 1, got {value}")


class BadOrderError(MatrixError):

    def __init__(self, i: int, j: int, value: int):
        self.i, self.j = i, j
        super().__init__(
            f"Entry ({i},{j}) must be >= 2 or 0 (infinity), got {value}"
        )


class IndexOutOfRangeError(EngineError, ValueError):

    def __init__(self, index: int, rank: int):
        self.index = index
        super().__init__(f"Generator index {index} out of range for rank {rank}")


class NotSphericalError(EngineError, ValueError):
    pass


class LengthMismatchError(EngineError, ValueError):
    pass


class NotFiniteError(EngineError, ValueError):
    pass


class NotIrreducibleError(EngineError, ValueError):
    pass


class NonInvertibleBError(EngineError, ValueError):
    pass


# ── Runtime failures ─────────────────────────────────────

class ResourceLimitError(EngineError, RuntimeError):

    def __init__(self, phase: str, budget: int, detail: Optional[str] = None):
        self.phase = phase
        self.budget = budget
        msg = f"Node budget {budget} exceeded during {phase}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class InvariantViolationError(EngineError, RuntimeError):
    pass


class InconsistentRecursionError(InvariantViolationError):
    pass

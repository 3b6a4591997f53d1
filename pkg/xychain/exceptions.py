"""exception types for xychain"""

from typing import Any, Dict, Optional


class XYChainError(Exception):
    """base class for every error raised by xychain"""


class InvalidParameterError(XYChainError, ValueError):
    """physical or grid parameters outside their allowed domain"""


class SizeGuardError(InvalidParameterError):
    """request exceeds a desk-scale size guard (dense ed, brute-force wick)"""


class SweepFileError(InvalidParameterError):
    """sweep file that cannot be parsed back into a grid"""


class NumericalResidueError(XYChainError, ArithmeticError):
    """float residue too large to be treated as rounding noise"""


class VerificationError(XYChainError):
    """free-fermion pipeline disagrees with the exact-diagonalization oracle

    args:
        message: human readable description
        point: the offending parameter point, if any
    """

    def __init__(self, message: str, point: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.point = point or {}

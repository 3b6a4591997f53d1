"""float-residue policy shared by the services"""

import logging

from ..exceptions import NumericalResidueError

logger = logging.getLogger(__name__)

# imaginary parts and negative radicands at or below this are rounding noise
RESIDUE_TOLERANCE = 1e-10


def ensure_real(value: complex, label: str, tolerance: float = RESIDUE_TOLERANCE) -> float:
    """return the real part after checking the imaginary residue

    raises:
        NumericalResidueError: |imag| above tolerance
    """
    value = complex(value)
    if abs(value.imag) > tolerance:
        raise NumericalResidueError(
            f"{label} should be real but has imaginary part {value.imag:.3e}"
        )
    if value.imag != 0.0:
        logger.debug("dropping imaginary residue %.3e on %s", value.imag, label)
    return value.real


def ensure_imaginary(value: complex, label: str, tolerance: float = RESIDUE_TOLERANCE) -> float:
    """return the imaginary part after checking the real residue"""
    return ensure_real(complex(value) * -1j, label, tolerance)


def clamp_non_negative(value: float, label: str, tolerance: float = RESIDUE_TOLERANCE) -> float:
    """clamp values in [-tolerance, 0) to 0, reject anything more negative"""
    if value < -tolerance:
        raise NumericalResidueError(f"{label} is negative beyond rounding: {value:.3e}")
    if value < 0.0:
        logger.debug("clamping %s=%.3e to 0", label, value)
        return 0.0
    return value


def clamp_unit(value: float, label: str, tolerance: float = RESIDUE_TOLERANCE) -> float:
    """clamp values within tolerance of [0, 1] onto the interval"""
    value = clamp_non_negative(value, label, tolerance)
    if value > 1.0 + tolerance:
        raise NumericalResidueError(f"{label} exceeds 1 beyond rounding: {value:.12g}")
    return min(value, 1.0)

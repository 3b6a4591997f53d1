"""bloch vector -> reduced density matrix, transfer fidelity, one-tangle, entropy"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.special import entr

from ..exceptions import InvalidParameterError
from ..schemas import BlochVector, ChainSpec, InputState
from ..utils.numerics import clamp_unit
from .chain_model import mode_arrays
from .wick_engine import bloch_vector

# bloch vectors longer than 1/2 by more than this are rejected
BLOCH_NORM_TOLERANCE = 1e-8


@dataclass(frozen=True)
class ReducedDensityMatrix:
    """2x2 single-site state in the (up, down) basis"""
    matrix: np.ndarray

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def determinant(self) -> float:
        return float(np.linalg.det(self.matrix).real)


def reduced_density(b: BlochVector) -> ReducedDensityMatrix:
    """rho = [[1/2 + sz, sx - i sy], [sx + i sy, 1/2 - sz]]

    raises:
        InvalidParameterError: |b| > 1/2 + 1e-8
    """
    if b.norm > 0.5 + BLOCH_NORM_TOLERANCE:
        raise InvalidParameterError(f"bloch vector longer than 1/2: |b|={b.norm:.12g}")
    off_diagonal = b.sx - 1j * b.sy
    return ReducedDensityMatrix(
        matrix=np.array(
            [[0.5 + b.sz, off_diagonal], [off_diagonal.conjugate(), 0.5 - b.sz]],
            dtype=complex,
        )
    )


def fidelity(input_state: InputState, b: BlochVector) -> float:
    """F = sqrt(1/2 + (beta^2 - alpha^2) sz + 2 alpha beta sx), the square-root fidelity"""
    alpha, beta = input_state.alpha, input_state.beta
    radicand = 0.5 + (beta ** 2 - alpha ** 2) * b.sz + 2.0 * alpha * beta * b.sx
    return math.sqrt(clamp_unit(radicand, "fidelity radicand"))


def one_tangle(b: BlochVector) -> float:
    """tau = 4 det rho = 1 - 4 |b|^2"""
    return clamp_unit(1.0 - 4.0 * (b.sx ** 2 + b.sy ** 2 + b.sz ** 2), "one-tangle")


def binary_entropy(x: float) -> float:
    """h(x) = -x log2 x - (1 - x) log2 (1 - x)"""
    return float((entr(x) + entr(1.0 - x)) / math.log(2.0))


def entanglement_entropy(tau: float) -> float:
    """von neumann entropy of a pure-state site with one-tangle tau, in bits

    raises:
        InvalidParameterError: tau outside [0, 1]
    """
    if not 0.0 <= tau <= 1.0:
        raise InvalidParameterError(f"one-tangle must lie in [0, 1], got {tau}")
    return binary_entropy(0.5 * (1.0 + math.sqrt(1.0 - tau)))


def von_neumann_entropy(rho: ReducedDensityMatrix) -> float:
    """-Tr rho log2 rho by eigendecomposition"""
    eigenvalues = np.clip(rho.eigenvalues(), 0.0, 1.0)
    return float(np.sum(entr(eigenvalues)) / math.log(2.0))


def linear_entropy(rho: ReducedDensityMatrix) -> float:
    """1 - Tr rho^2, which is tau / 2 for a qubit"""
    return float(1.0 - np.trace(rho.matrix @ rho.matrix).real)


def isotropic_fidelity(spec: ChainSpec, t: float, r: int) -> float:
    """closed form at gamma = 0 for alpha = beta = 1/sqrt(2)

    F = sqrt(1/2 + (1/2N) sum_k cos[k(r-1) - lambda_k t])
    """
    if spec.anisotropy != 0.0:
        raise InvalidParameterError("the isotropic closed form needs gamma = 0")
    if not 1 <= r <= spec.n_sites:
        raise InvalidParameterError(f"site r must lie in 1..{spec.n_sites}, got {r}")

    k, lam, _, _ = mode_arrays(spec)
    radicand = 0.5 + np.sum(np.cos(k * (r - 1) - lam * t)) / (2.0 * spec.n_sites)
    return math.sqrt(clamp_unit(float(radicand), "fidelity radicand"))


def fermion_pipeline(
    spec: ChainSpec, t: float, r: int, input_state: InputState
) -> Tuple[BlochVector, float, float]:
    """(bloch vector, F, tau) from the free-fermion solution"""
    b = bloch_vector(spec, t, r, input_state)
    return b, fidelity(input_state, b), one_tangle(b)

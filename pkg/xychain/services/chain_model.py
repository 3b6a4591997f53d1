"""chain parameters, momentum grid, dispersion and bogoliubov coefficients

the fermionic hamiltonian of the periodic xy chain is diagonal in the
bogoliubov modes eta_k with energies lambda_k on the grid k = 2 pi m / N.

the field enters as +h sum_i S_i^z, so for h > 0 the all-down vacuum is the
low-energy state. every closed form below sees it through the diagonal
term J cos k - h.
"""

import logging
import math
from functools import lru_cache
from typing import List, Tuple

import numpy as np
from pydantic import ValidationError

from ..exceptions import InvalidParameterError
from ..schemas import BogoliubovMode, ChainSpec, MomentumGrid

logger = logging.getLogger(__name__)

MIN_SITES = 3

# lambda_k at or below this is the zero-energy degeneracy
DEGENERATE_ENERGY = 1e-14

# sin k below this on the grid is an exact zero (k = 0, pi)
_SIN_ZERO = 1e-15


def build_chain(coupling: float, anisotropy: float, field: float, n_sites: int) -> ChainSpec:
    """validate and build a chain in the canonical (J, gamma, h) form

    args:
        coupling: exchange J
        anisotropy: gamma
        field: transverse field h
        n_sites: number of sites N, at least 3

    returns:
        chain spec

    raises:
        InvalidParameterError: non-finite inputs or N < 3
    """
    for name, value in (("coupling", coupling), ("anisotropy", anisotropy), ("field", field)):
        if not math.isfinite(float(value)):
            raise InvalidParameterError(f"{name} must be finite, got {value}")

    if isinstance(n_sites, bool) or int(n_sites) != n_sites:
        raise InvalidParameterError(f"n_sites must be an integer, got {n_sites}")
    if n_sites < MIN_SITES:
        raise InvalidParameterError(
            f"n_sites must be at least {MIN_SITES} (periodic bonds double-count below that), got {n_sites}"
        )

    try:
        return ChainSpec(
            n_sites=int(n_sites),
            coupling=float(coupling),
            anisotropy=float(anisotropy),
            field=float(field),
        )
    except ValidationError as e:
        raise InvalidParameterError(str(e)) from e


def build_chain_from_exchange(jx: float, jy: float, field: float, n_sites: int) -> ChainSpec:
    """convert (Jx, Jy) to the canonical (J, gamma) form and build the chain

    raises:
        InvalidParameterError: Jx + Jy == 0 or any build_chain failure
    """
    total = float(jx) + float(jy)
    if not math.isfinite(total):
        raise InvalidParameterError("jx and jy must be finite")
    if total == 0.0:
        raise InvalidParameterError("jx + jy must be non-zero to define gamma")
    return build_chain(total / 2.0, (float(jx) - float(jy)) / total, field, n_sites)


def exchange_couplings(spec: ChainSpec) -> Tuple[float, float]:
    """(Jx, Jy) for a canonical chain"""
    return (
        spec.coupling * (1.0 + spec.anisotropy),
        spec.coupling * (1.0 - spec.anisotropy),
    )


def momentum_grid(n_sites: int) -> MomentumGrid:
    """wave numbers k = 2 pi m / N with -N/2 < m <= N/2, ascending in m

    raises:
        InvalidParameterError: N < 3
    """
    if n_sites < MIN_SITES:
        raise InvalidParameterError(f"n_sites must be at least {MIN_SITES}, got {n_sites}")

    indices = tuple(range(-((n_sites - 1) // 2), n_sites // 2 + 1))
    # pi * (2m/N) keeps k = pi exact for even N
    modes = tuple(math.pi * (2.0 * m / n_sites) for m in indices)
    return MomentumGrid(indices=indices, modes=modes)


def _sin(k: float) -> float:
    s = math.sin(k)
    return 0.0 if abs(s) < _SIN_ZERO else s


def diagonal_term(spec: ChainSpec, k: float) -> float:
    """J cos k - h"""
    return spec.coupling * math.cos(k) - spec.field


def dispersion(spec: ChainSpec, k: float) -> float:
    """lambda_k = sqrt((J cos k - h)^2 + J^2 gamma^2 sin^2 k)"""
    if not math.isfinite(k):
        raise InvalidParameterError(f"wave number must be finite, got {k}")
    return math.hypot(
        diagonal_term(spec, k),
        spec.coupling * spec.anisotropy * _sin(k),
    )


def bogoliubov_coefficients(spec: ChainSpec, k: float) -> Tuple[float, float]:
    """(alpha_k, beta_k) for one wave number

    beta_k carries sign(J gamma sin k) with sign(0) = +1. a zero-energy mode
    gets (1, 0); every formula multiplies it by sin(lambda_k t) = 0.
    """
    mode = _mode(spec, k)
    return mode.alpha, mode.beta


def _mode(spec: ChainSpec, k: float) -> BogoliubovMode:
    lam = dispersion(spec, k)
    gap = spec.coupling * spec.anisotropy * _sin(k)

    if lam <= DEGENERATE_ENERGY:
        logger.debug("zero-energy mode at k=%.6f for %s", k, spec)
        return BogoliubovMode(k=k, lam=lam, alpha=1.0, beta=0.0, degenerate=True)

    ratio = min(1.0, max(-1.0, diagonal_term(spec, k) / lam))
    sign = -1.0 if gap < 0.0 else 1.0
    return BogoliubovMode(
        k=k,
        lam=lam,
        alpha=math.sqrt((1.0 - ratio) / 2.0),
        beta=sign * math.sqrt((1.0 + ratio) / 2.0),
    )


def bogoliubov_modes(spec: ChainSpec) -> List[BogoliubovMode]:
    """bogoliubov data for the whole momentum grid, in grid order"""
    return [_mode(spec, k) for k in momentum_grid(spec.n_sites).modes]


@lru_cache(maxsize=256)
def mode_arrays(spec: ChainSpec) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(k, lambda, alpha, beta) as read-only arrays over the grid

    cached per chain; a sweep reuses them for every t.
    """
    modes = bogoliubov_modes(spec)
    arrays = tuple(
        np.array([getattr(mode, name) for mode in modes], dtype=float)
        for name in ("k", "lam", "alpha", "beta")
    )
    for array in arrays:
        array.setflags(write=False)
    return arrays


def strong_field_dispersion(spec: ChainSpec, k: float) -> float:
    """second-order expansion of lambda_k in J/h

    |h| [1 - (J/h) cos k + (J/h)^2 gamma^2 sin^2 k / 2], accurate to (J/h)^3
    """
    if spec.field == 0.0:
        raise InvalidParameterError("strong-field expansion needs a non-zero field")
    x = spec.coupling / spec.field
    cos_k, sin_k = math.cos(k), _sin(k)
    return abs(spec.field) * (
        1.0 - x * cos_k + 0.5 * x * x * spec.anisotropy ** 2 * sin_k ** 2
    )


def weak_field_dispersion(spec: ChainSpec, k: float) -> float:
    """lambda_k written in powers of h/J

    |J| sqrt(-2 (h/J) cos k + (h/J)^2 + cos^2 k + gamma^2 sin^2 k)
    """
    if spec.coupling == 0.0:
        raise InvalidParameterError("weak-field form needs a non-zero coupling")
    y = spec.field / spec.coupling
    cos_k, sin_k = math.cos(k), _sin(k)
    radicand = -2.0 * y * cos_k + y * y + cos_k ** 2 + spec.anisotropy ** 2 * sin_k ** 2
    return abs(spec.coupling) * math.sqrt(max(0.0, radicand))

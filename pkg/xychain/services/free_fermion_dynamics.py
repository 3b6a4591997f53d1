"""heisenberg evolution of the jordan-wigner fermions and their vacuum contractions

c_j(t) = sum_l [a~_lj(t) c_l + b~_lj(t) c_l^dagger], with

    a~_lj(t) = (1/N) sum_k e^{ik(l-j)} [e^{i lambda_k t} - 2i alpha_k^2 sin lambda_k t]
    b~_lj(t) = (2/N) sum_k e^{ik(l-j)} alpha_k beta_k sin lambda_k t

site indices are 1-based in the physics and 0-based in every array.
"""

from dataclasses import dataclass

import numpy as np

from ..schemas import ChainSpec
from .chain_model import mode_arrays


@dataclass(frozen=True)
class PropagatorPair:
    """coefficient matrices a~[l, j], b~[l, j] at one time"""
    a_tilde: np.ndarray
    b_tilde: np.ndarray
    time: float

    @property
    def n_sites(self) -> int:
        return self.a_tilde.shape[0]


@dataclass(frozen=True)
class ContractionTable:
    """vacuum two-point functions of A_l = c_l^dagger + c_l and B_l = c_l^dagger - c_l

    ab[j, m] = <0|A_j(t) B_m(t)|0>, aa and bb likewise; a_c1[j] and b_c1[j]
    hold the symmetrized insertion <0|X_j(t) c_1^dagger + c_1 X_j(t)|0>.
    """
    ab: np.ndarray
    aa: np.ndarray
    bb: np.ndarray
    a_c1: np.ndarray
    b_c1: np.ndarray
    time: float

    @property
    def n_sites(self) -> int:
        return self.ab.shape[0]


def _site_offsets(n_sites: int) -> np.ndarray:
    sites = np.arange(1, n_sites + 1)
    return sites[:, None] - sites[None, :]


def propagator(spec: ChainSpec, t: float) -> PropagatorPair:
    """a~(t), b~(t) by direct momentum sums"""
    k, lam, alpha, beta = mode_arrays(spec)
    n = spec.n_sites

    phases = np.exp(1j * _site_offsets(n)[:, :, None] * k[None, None, :])
    sin_lt = np.sin(lam * t)
    a_k = np.exp(1j * lam * t) - 2j * alpha ** 2 * sin_lt
    b_k = (2.0 * alpha * beta * sin_lt).astype(complex)

    return PropagatorPair(
        a_tilde=phases @ a_k / n,
        b_tilde=phases @ b_k / n,
        time=float(t),
    )


def transfer_amplitude(spec: ChainSpec, t: float, r: int) -> complex:
    """a~_1r(t), the amplitude for an excitation on site 1 to reach site r"""
    return complex(propagator(spec, t).a_tilde[0, r - 1])


def contraction_table(spec: ChainSpec, t: float) -> ContractionTable:
    """all five contraction blocks from their closed momentum sums

    terms odd in k cancel pairwise on the symmetric grid and are left out.
    """
    k, lam, alpha, beta = mode_arrays(spec)
    n = spec.n_sites
    identity = np.eye(n, dtype=complex)

    # [j, m, k] with offset j - m
    kd = _site_offsets(n)[:, :, None] * k[None, None, :]
    cos_d, sin_d = np.cos(kd).astype(complex), np.sin(kd).astype(complex)

    sin_lt, cos_lt = np.sin(lam * t), np.cos(lam * t)
    sin2_lt = sin_lt ** 2
    sin_2lt = np.sin(2.0 * lam * t)
    ab_prod = alpha * beta
    x = 1.0 - 2.0 * alpha ** 2

    ab = (
        identity
        - (8.0 / n) * (cos_d @ (ab_prod ** 2 * sin2_lt))
        + (4.0 / n) * (sin_d @ (ab_prod * x * sin2_lt))
    )
    pair = (2j / n) * (sin_d @ (ab_prod * sin_2lt))
    aa = identity + pair
    bb = -identity + pair

    # [j, k] with offset 1 - j
    k1 = (1 - np.arange(1, n + 1))[:, None] * k[None, :]
    cos_1, sin_1 = np.cos(k1), np.sin(k1)
    a_c1 = ((2.0 / n) * (cos_1 @ cos_lt)).astype(complex)
    b_c1 = (-2j / n) * (cos_1 @ (x * sin_lt) + sin_1 @ (2.0 * ab_prod * sin_lt))

    return ContractionTable(ab=ab, aa=aa, bb=bb, a_c1=a_c1, b_c1=b_c1, time=float(t))


def contractions_from_propagator(pair: PropagatorPair) -> ContractionTable:
    """the same five blocks assembled from a~, b~ by vacuum contraction

    A_j(t) = sum_l [u_lj c_l + u_lj^* c_l^dagger] with u = a~ + b~^*,
    B_j(t) = sum_l [-v_lj c_l + v_lj^* c_l^dagger] with v = a~ - b~^*.
    """
    u = pair.a_tilde + pair.b_tilde.conj()
    v = pair.a_tilde - pair.b_tilde.conj()
    return ContractionTable(
        ab=u.T @ v.conj(),
        aa=u.T @ u.conj(),
        bb=-(v.T @ v.conj()),
        a_c1=(2.0 * u[0, :].real).astype(complex),
        b_c1=-2j * v[0, :].imag,
        time=pair.time,
    )

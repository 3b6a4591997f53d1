"""exact diagonalization in the full 2^N fock space

basis index bit (l - 1) is the occupation of site l (1 = spin up); c_l carries
the jordan-wigner parity string over sites < l. the fermionic hamiltonian with
c_{N+1} = c_1 is the truth source; the spin hamiltonian is a diagnostic, since
for periodic spins the two differ by a parity-dependent boundary term.
"""

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import List, Optional, Tuple

import numpy as np
from scipy import sparse

from ..config import get_settings
from ..exceptions import InvalidParameterError, NumericalResidueError, SizeGuardError
from ..schemas import BlochVector, ChainSpec, InputState
from .chain_model import exchange_couplings
from .free_fermion_dynamics import ContractionTable, PropagatorPair
from .observables import fidelity, one_tangle

logger = logging.getLogger(__name__)

HERMITIAN_TOLERANCE = 1e-12
STATE_NORM_TOLERANCE = 1e-10


@dataclass(frozen=True)
class Spectrum:
    """eigenvalues and eigenvector columns of a hamiltonian"""
    energies: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class FockOperator:
    """dense operator on the 2^N fock space; the spectrum is computed once"""
    matrix: np.ndarray
    n_sites: int

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def spectrum(self) -> Spectrum:
        logger.debug("diagonalizing %dx%d hamiltonian", self.dim, self.dim)
        energies, vectors = np.linalg.eigh(self.matrix)
        return Spectrum(energies=energies, vectors=vectors)


@dataclass(frozen=True)
class StateVector:
    """unit-norm fock-space state"""
    amplitudes: np.ndarray

    def __post_init__(self):
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1.0) > STATE_NORM_TOLERANCE:
            raise NumericalResidueError(f"state norm {norm:.15g} differs from 1")

    @property
    def n_sites(self) -> int:
        return int(self.amplitudes.shape[0]).bit_length() - 1


def _check_size(n_sites: int) -> None:
    limit = get_settings().ed_max_sites
    if n_sites > limit:
        raise SizeGuardError(f"dense exact diagonalization is limited to N <= {limit}, got {n_sites}")
    if n_sites < 1:
        raise InvalidParameterError(f"n_sites must be positive, got {n_sites}")


def _lowering(n_sites: int, site: int, with_string: bool) -> sparse.csr_matrix:
    dim = 1 << n_sites
    bit = 1 << (site - 1)
    states = np.arange(dim, dtype=np.int64)
    source = states[(states & bit) != 0]
    target = source ^ bit

    data = np.ones(source.shape[0])
    if with_string:
        parity = np.zeros_like(source)
        for lower in range(site - 1):
            parity ^= (source >> lower) & 1
        data = 1.0 - 2.0 * parity

    return sparse.csr_matrix((data, (target, source)), shape=(dim, dim))


@lru_cache(maxsize=16)
def fermion_operators(n_sites: int) -> Tuple[sparse.csr_matrix, ...]:
    """annihilation operators c_1 ... c_N"""
    _check_size(n_sites)
    return tuple(_lowering(n_sites, site, with_string=True) for site in range(1, n_sites + 1))


@lru_cache(maxsize=16)
def spin_operators(n_sites: int) -> Tuple[List[sparse.csr_matrix], List[sparse.csr_matrix], List[sparse.csr_matrix]]:
    """(S^+, S^-, S^z) per site, no strings"""
    _check_size(n_sites)
    lowering = [_lowering(n_sites, site, with_string=False) for site in range(1, n_sites + 1)]
    raising = [op.T.tocsr() for op in lowering]
    states = np.arange(1 << n_sites)
    s_z = [
        sparse.diags(((states >> (site - 1)) & 1) - 0.5, format="csr")
        for site in range(1, n_sites + 1)
    ]
    return raising, lowering, s_z


def total_occupation(n_sites: int) -> np.ndarray:
    """diagonal of sum_i c_i^dagger c_i"""
    states = np.arange(1 << n_sites)
    return np.array([bin(s).count("1") for s in states], dtype=float)


def _to_fock(hamiltonian: sparse.spmatrix, n_sites: int) -> FockOperator:
    matrix = hamiltonian.toarray()
    if np.max(np.abs(matrix - matrix.conj().T)) > HERMITIAN_TOLERANCE:
        raise NumericalResidueError("hamiltonian is not hermitian")
    return FockOperator(matrix=matrix, n_sites=n_sites)


def build_fermion_hamiltonian(spec: ChainSpec) -> FockOperator:
    """H = -sum_i {J/2 [(c_i^+ c_{i+1} - c_i c_{i+1}^+) + gamma (c_i^+ c_{i+1}^+ - c_i c_{i+1})]
    - h (c_i^+ c_i - 1/2)} with c_{N+1} = c_1
    """
    n = spec.n_sites
    _check_size(n)
    c = fermion_operators(n)
    identity = sparse.identity(1 << n, format="csr")
    J, gamma, h = spec.coupling, spec.anisotropy, spec.field

    hamiltonian = sparse.csr_matrix((1 << n, 1 << n))
    for i in range(n):
        ci, cj = c[i], c[(i + 1) % n]
        ci_dag, cj_dag = ci.T, cj.T
        hopping = ci_dag @ cj - ci @ cj_dag
        pairing = ci_dag @ cj_dag - ci @ cj
        hamiltonian = hamiltonian - (
            0.5 * J * (hopping + gamma * pairing) - h * (ci_dag @ ci - 0.5 * identity)
        )
    return _to_fock(hamiltonian, n)


def build_spin_hamiltonian(spec: ChainSpec) -> FockOperator:
    """H = -sum_i (Jx S_i^x S_{i+1}^x + Jy S_i^y S_{i+1}^y) + h sum_i S_i^z, periodic"""
    n = spec.n_sites
    _check_size(n)
    raising, lowering, s_z = spin_operators(n)
    jx, jy = exchange_couplings(spec)

    hamiltonian = sparse.csr_matrix((1 << n, 1 << n))
    for i in range(n):
        j = (i + 1) % n
        xx = 0.25 * (raising[i] + lowering[i]) @ (raising[j] + lowering[j])
        # S^y S^y = -(S^+ - S^-)(S^+ - S^-) / 4 stays real
        yy = -0.25 * (raising[i] - lowering[i]) @ (raising[j] - lowering[j])
        hamiltonian = hamiltonian - (jx * xx + jy * yy) + spec.field * s_z[i]
    return _to_fock(hamiltonian, n)


def initial_state(n_sites: int, input_state: InputState) -> StateVector:
    """(alpha + beta c_1^dagger)|0>"""
    _check_size(n_sites)
    amplitudes = np.zeros(1 << n_sites, dtype=complex)
    amplitudes[0] = input_state.alpha
    amplitudes[1] = input_state.beta
    return StateVector(amplitudes=amplitudes)


def _propagate(hamiltonian: FockOperator, amplitudes: np.ndarray, t: float) -> np.ndarray:
    spectrum = hamiltonian.spectrum
    coefficients = spectrum.vectors.conj().T @ amplitudes
    return spectrum.vectors @ (np.exp(-1j * spectrum.energies * t) * coefficients)


def evolve(hamiltonian: FockOperator, psi0: StateVector, t: float) -> StateVector:
    """e^{-iHt} psi0 through the cached eigendecomposition"""
    return StateVector(amplitudes=_propagate(hamiltonian, psi0.amplitudes, t))


def site_bloch(psi: StateVector, r: int) -> BlochVector:
    """(<S_r^x>, <S_r^y>, <S_r^z>) by direct operator expectation

    <S^x> = Re <S^+>, <S^y> = Im <S^+>, <S^z> = P(up) - 1/2
    """
    amplitudes = psi.amplitudes
    n_sites = psi.n_sites
    if not 1 <= r <= n_sites:
        raise InvalidParameterError(f"site r must lie in 1..{n_sites}, got {r}")

    bit = 1 << (r - 1)
    states = np.arange(amplitudes.shape[0])
    down = states[(states & bit) == 0]
    up = down | bit

    s_plus = np.vdot(amplitudes[up], amplitudes[down])
    p_up = float(np.sum(np.abs(amplitudes[up]) ** 2))
    return BlochVector(sx=float(s_plus.real), sy=float(s_plus.imag), sz=p_up - 0.5)


def _pipeline(
    hamiltonian: FockOperator, t: float, r: int, input_state: InputState
) -> Tuple[BlochVector, float, float]:
    psi = evolve(hamiltonian, initial_state(hamiltonian.n_sites, input_state), t)
    b = site_bloch(psi, r)
    return b, fidelity(input_state, b), one_tangle(b)


def oracle_pipeline(
    spec: ChainSpec,
    t: float,
    r: int,
    input_state: InputState,
    hamiltonian: Optional[FockOperator] = None,
) -> Tuple[BlochVector, float, float]:
    """(bloch vector, F, tau) from the fermionic hamiltonian

    pass a prebuilt hamiltonian to reuse its eigendecomposition across t.
    """
    hamiltonian = hamiltonian if hamiltonian is not None else build_fermion_hamiltonian(spec)
    return _pipeline(hamiltonian, t, r, input_state)


def spin_oracle_pipeline(
    spec: ChainSpec,
    t: float,
    r: int,
    input_state: InputState,
    hamiltonian: Optional[FockOperator] = None,
) -> Tuple[BlochVector, float, float]:
    """as oracle_pipeline on the periodic spin hamiltonian (diagnostic only)"""
    hamiltonian = hamiltonian if hamiltonian is not None else build_spin_hamiltonian(spec)
    return _pipeline(hamiltonian, t, r, input_state)


def _vacuum_and_excitations(
    spec: ChainSpec, t: float, hamiltonian: Optional[FockOperator]
) -> Tuple[Tuple[sparse.csr_matrix, ...], np.ndarray, List[np.ndarray]]:
    hamiltonian = hamiltonian if hamiltonian is not None else build_fermion_hamiltonian(spec)
    c = fermion_operators(spec.n_sites)
    vacuum = np.zeros(1 << spec.n_sites, dtype=complex)
    vacuum[0] = 1.0
    vacuum_t = _propagate(hamiltonian, vacuum, t)
    excited_t = [_propagate(hamiltonian, c_l.T @ vacuum, t) for c_l in c]
    return c, vacuum_t, excited_t


def heisenberg_propagator(
    spec: ChainSpec, t: float, hamiltonian: Optional[FockOperator] = None
) -> PropagatorPair:
    """a~_lj = <0|c_j(t) c_l^dagger|0>, b~_lj = <0|c_l c_j(t)|0> by explicit evolution"""
    c, vacuum_t, excited_t = _vacuum_and_excitations(spec, t, hamiltonian)
    n = spec.n_sites
    a_tilde = np.empty((n, n), dtype=complex)
    b_tilde = np.empty((n, n), dtype=complex)
    for j in range(n):
        cj_vacuum = c[j] @ vacuum_t
        for l in range(n):
            a_tilde[l, j] = np.vdot(vacuum_t, c[j] @ excited_t[l])
            b_tilde[l, j] = np.vdot(excited_t[l], cj_vacuum)
    return PropagatorPair(a_tilde=a_tilde, b_tilde=b_tilde, time=float(t))


def heisenberg_contractions(
    spec: ChainSpec, t: float, hamiltonian: Optional[FockOperator] = None
) -> ContractionTable:
    """all five contraction blocks from explicit fock-space evolution"""
    c, vacuum_t, excited_t = _vacuum_and_excitations(spec, t, hamiltonian)
    n = spec.n_sites
    a_ops = [op.T + op for op in c]
    b_ops = [op.T - op for op in c]

    a_vac = [op @ vacuum_t for op in a_ops]
    b_vac = [op @ vacuum_t for op in b_ops]
    # <0|X Y|0> = (X^dagger psi, Y psi); A^dagger = A, B^dagger = -B
    ab = np.array([[np.vdot(a_vac[j], b_vac[m]) for m in range(n)] for j in range(n)])
    aa = np.array([[np.vdot(a_vac[j], a_vac[m]) for m in range(n)] for j in range(n)])
    bb = np.array([[-np.vdot(b_vac[j], b_vac[m]) for m in range(n)] for j in range(n)])

    first = excited_t[0]
    a_c1 = np.array([np.vdot(vacuum_t, op @ first) + np.vdot(first, op @ vacuum_t) for op in a_ops])
    b_c1 = np.array([np.vdot(vacuum_t, op @ first) + np.vdot(first, op @ vacuum_t) for op in b_ops])
    return ContractionTable(ab=ab, aa=aa, bb=bb, a_c1=a_c1, b_c1=b_c1, time=float(t))

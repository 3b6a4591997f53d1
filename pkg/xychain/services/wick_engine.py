"""single-site spin expectations on (alpha + beta c_1^dagger)|0> via wick's theorem

S_r^x = (1/2) A_1 B_1 ... A_{r-1} B_{r-1} A_r and S_r^y swaps the last A_r for
B_r with prefactor -i/2. only the alpha*beta cross term survives, and the
two insertions <0|X c_1^dagger|0> + <0|c_1 X|0> fold into one extra operator
C1 at the right end of the string, so the whole expectation is a single
pfaffian of a 2r x 2r antisymmetric contraction matrix.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, List, Literal, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..config import get_settings
from ..exceptions import InvalidParameterError, SizeGuardError
from ..schemas import BlochVector, ChainSpec, InputState
from ..utils.numerics import RESIDUE_TOLERANCE, ensure_real
from .free_fermion_dynamics import (
    ContractionTable,
    PropagatorPair,
    contraction_table,
    propagator,
)

logger = logging.getLogger(__name__)

Method = Literal["pfaffian", "bruteforce"]


class Operator(NamedTuple):
    """one linear fermion operator in a string"""
    kind: Literal["A", "B", "C1"]
    site: int
    time: Literal["t", "0"] = "t"


C1 = Operator("C1", 1, "0")


@dataclass(frozen=True)
class MajoranaString:
    """ordered operator product with a scalar prefactor

    all A/B operators sit at time t; at most one C1 (time 0), and only
    in the last position.
    """
    ops: Tuple[Operator, ...]
    prefactor: complex = 1.0

    def __post_init__(self):
        if len(self.ops) % 2:
            raise InvalidParameterError("wick's theorem needs an even number of operators")
        for position, op in enumerate(self.ops):
            if op.kind == "C1" and position != len(self.ops) - 1:
                raise InvalidParameterError("the C1 insertion must be the last operator")
            if op.kind != "C1" and op.time != "t":
                raise InvalidParameterError("only C1 may carry time 0")

    def __len__(self) -> int:
        return len(self.ops)

    @classmethod
    def for_spin_x(cls, r: int) -> "MajoranaString":
        return cls(ops=_jordan_wigner_tail(r) + (Operator("A", r), C1), prefactor=0.5)

    @classmethod
    def for_spin_y(cls, r: int) -> "MajoranaString":
        return cls(ops=_jordan_wigner_tail(r) + (Operator("B", r), C1), prefactor=-0.5j)


def _jordan_wigner_tail(r: int) -> Tuple[Operator, ...]:
    ops: List[Operator] = []
    for s in range(1, r):
        ops.extend((Operator("A", s), Operator("B", s)))
    return tuple(ops)


def contract(left: Operator, right: Operator, table: ContractionTable) -> complex:
    """<0|left right|0> for left standing before right in the string"""
    if left.kind == "C1":
        raise InvalidParameterError("C1 cannot stand left of another operator")

    j = left.site - 1
    if right.kind == "C1":
        return table.a_c1[j] if left.kind == "A" else table.b_c1[j]

    m = right.site - 1
    if left.kind == "A":
        return table.aa[j, m] if right.kind == "A" else table.ab[j, m]
    # {A_m, B_j} = 0 at equal times
    return -table.ab[m, j] if right.kind == "A" else table.bb[j, m]


def contraction_matrix(string: MajoranaString, table: ContractionTable) -> np.ndarray:
    """antisymmetric matrix with entry (i, j), i < j, the contraction of op_i with op_j"""
    n_sites = table.n_sites
    for op in string.ops:
        if not 1 <= op.site <= n_sites:
            raise InvalidParameterError(f"operator site {op.site} outside 1..{n_sites}")

    size = len(string)
    matrix = np.zeros((size, size), dtype=complex)
    for i, j in combinations(range(size), 2):
        value = contract(string.ops[i], string.ops[j], table)
        matrix[i, j] = value
        matrix[j, i] = -value
    return matrix


def pfaffian(matrix: np.ndarray) -> complex:
    """pfaffian by skew-symmetric gaussian elimination with partial pivoting

    the input is antisymmetrized first; odd sizes and structurally singular
    matrices give 0.
    """
    a = np.array(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidParameterError("pfaffian needs a square matrix")

    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    if a.size and np.max(np.abs(a + a.T)) > RESIDUE_TOLERANCE * scale:
        logger.debug("pfaffian input has a symmetric part, keeping (A - A^T) / 2")
    a = 0.5 * (a - a.T)

    n = a.shape[0]
    if n % 2:
        return 0.0j

    result = 1.0 + 0.0j
    for k in range(0, n - 1, 2):
        pivot = k + 1 + int(np.argmax(np.abs(a[k + 1:, k])))
        if pivot != k + 1:
            a[[k + 1, pivot], :] = a[[pivot, k + 1], :]
            a[:, [k + 1, pivot]] = a[:, [pivot, k + 1]]
            result = -result

        if a[k + 1, k] == 0.0:
            return 0.0j

        result *= a[k, k + 1]
        if k + 2 < n:
            tau = a[k, k + 2:] / a[k, k + 1]
            column = a[k + 2:, k + 1]
            a[k + 2:, k + 2:] += np.outer(tau, column) - np.outer(column, tau)

    return result


def perfect_matchings(items: Sequence[int]) -> Iterator[List[Tuple[int, int]]]:
    """every partition of items into ordered pairs (first, later)"""
    items = list(items)
    if not items:
        yield []
        return

    first = items.pop(0)
    for i, partner in enumerate(items):
        for rest in perfect_matchings(items[:i] + items[i + 1:]):
            yield [(first, partner)] + rest


def matching_sign(matching: Sequence[Tuple[int, int]]) -> int:
    """parity of the permutation (i1 j1 i2 j2 ...)"""
    order = [index for pair in matching for index in pair]
    inversions = sum(
        1 for a, b in combinations(range(len(order)), 2) if order[a] > order[b]
    )
    return -1 if inversions % 2 else 1


def pfaffian_by_matchings(matrix: np.ndarray) -> complex:
    """signed sum over all perfect matchings, (n-1)!! terms"""
    total = 0.0j
    for matching in perfect_matchings(range(matrix.shape[0])):
        term = complex(matching_sign(matching))
        for i, j in matching:
            term *= matrix[i, j]
        total += term
    return total


def wick_bruteforce(
    string: MajoranaString,
    table: ContractionTable,
    max_operators: Optional[int] = None,
) -> complex:
    """prefactor times the explicit wick pairing sum

    raises:
        SizeGuardError: more operators than the brute-force guard allows
    """
    limit = max_operators if max_operators is not None else get_settings().bruteforce_max_operators
    if len(string) > limit:
        raise SizeGuardError(
            f"brute-force wick expansion limited to {limit} operators, got {len(string)}"
        )
    return string.prefactor * pfaffian_by_matchings(contraction_matrix(string, table))


def wick_pfaffian(string: MajoranaString, table: ContractionTable) -> complex:
    """prefactor times the pfaffian of the contraction matrix"""
    return string.prefactor * pfaffian(contraction_matrix(string, table))


def _evaluate(string: MajoranaString, table: ContractionTable, method: Method) -> complex:
    if method == "pfaffian":
        return wick_pfaffian(string, table)
    if method == "bruteforce":
        return wick_bruteforce(string, table)
    raise InvalidParameterError(f"unknown wick method {method!r}")


def _check_site(spec: ChainSpec, r: int) -> None:
    if isinstance(r, bool) or int(r) != r or not 1 <= r <= spec.n_sites:
        raise InvalidParameterError(f"site r must lie in 1..{spec.n_sites}, got {r}")


def spin_x(
    spec: ChainSpec,
    t: float,
    r: int,
    input_state: InputState,
    table: Optional[ContractionTable] = None,
    method: Method = "pfaffian",
) -> float:
    """<S_r^x(t)> on (alpha + beta c_1^dagger)|0>"""
    _check_site(spec, r)
    weight = input_state.alpha * input_state.beta
    if weight == 0.0:
        return 0.0

    table = table if table is not None else contraction_table(spec, t)
    value = weight * _evaluate(MajoranaString.for_spin_x(r), table, method)
    return ensure_real(value, f"<S_{r}^x>")


def spin_y(
    spec: ChainSpec,
    t: float,
    r: int,
    input_state: InputState,
    table: Optional[ContractionTable] = None,
    method: Method = "pfaffian",
) -> float:
    """<S_r^y(t)>, the S^x string with A_r -> B_r and 1/2 -> -i/2"""
    _check_site(spec, r)
    weight = input_state.alpha * input_state.beta
    if weight == 0.0:
        return 0.0

    table = table if table is not None else contraction_table(spec, t)
    value = weight * _evaluate(MajoranaString.for_spin_y(r), table, method)
    return ensure_real(value, f"<S_{r}^y>")


def spin_z(
    spec: ChainSpec,
    t: float,
    r: int,
    input_state: InputState,
    table: Optional[ContractionTable] = None,
    pair: Optional[PropagatorPair] = None,
) -> float:
    """<S_r^z(t)> = -(1/2)[<0|A_r B_r|0> + 2 beta^2 (|b~_1r|^2 - |a~_1r|^2)]"""
    _check_site(spec, r)
    table = table if table is not None else contraction_table(spec, t)
    pair = pair if pair is not None else propagator(spec, t)

    a_1r = pair.a_tilde[0, r - 1]
    b_1r = pair.b_tilde[0, r - 1]
    value = -0.5 * (
        table.ab[r - 1, r - 1]
        + 2.0 * input_state.beta ** 2 * (abs(b_1r) ** 2 - abs(a_1r) ** 2)
    )
    return ensure_real(value, f"<S_{r}^z>")


def bloch_vector(
    spec: ChainSpec,
    t: float,
    r: int,
    input_state: InputState,
    method: Method = "pfaffian",
) -> BlochVector:
    """all three components, sharing one contraction table and propagator"""
    table = contraction_table(spec, t)
    pair = propagator(spec, t)
    return BlochVector(
        sx=spin_x(spec, t, r, input_state, table=table, method=method),
        sy=spin_y(spec, t, r, input_state, table=table, method=method),
        sz=spin_z(spec, t, r, input_state, table=table, pair=pair),
    )

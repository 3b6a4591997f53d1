"""pydantic schemas for the chain model, sweeps and the http api"""

import math
from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# normalization tolerance for alpha^2 + beta^2 and alpha_k^2 + beta_k^2
NORM_TOLERANCE = 1e-12


class _Frozen(BaseModel):
    """immutable model base, rejects nan/inf everywhere"""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)


# physical model

class ChainSpec(_Frozen):
    """periodic anisotropic xy chain in a transverse field, canonical (J, gamma, h)"""
    n_sites: int = Field(..., ge=3, description="number of sites N")
    coupling: float = Field(..., description="exchange J = (Jx + Jy) / 2")
    anisotropy: float = Field(..., description="gamma = (Jx - Jy) / (Jx + Jy)")
    field: float = Field(..., description="transverse field h")


class MomentumGrid(_Frozen):
    """wave numbers k = 2 pi m / N, -N/2 < m <= N/2, ascending in m"""
    indices: Tuple[int, ...]
    modes: Tuple[float, ...]

    @model_validator(mode="after")
    def _check_lengths(self):
        if len(self.indices) != len(self.modes):
            raise ValueError("indices and modes must have the same length")
        return self

    def as_array(self) -> np.ndarray:
        return np.asarray(self.modes, dtype=float)


class BogoliubovMode(_Frozen):
    """single momentum mode of the diagonal hamiltonian"""
    k: float
    lam: float = Field(..., ge=0.0, serialization_alias="lambda")
    alpha: float
    beta: float
    degenerate: bool = False

    @model_validator(mode="after")
    def _check_normalization(self):
        if abs(self.alpha ** 2 + self.beta ** 2 - 1.0) > NORM_TOLERANCE:
            raise ValueError("alpha_k^2 + beta_k^2 must equal 1")
        return self


class InputState(_Frozen):
    """encoded state alpha|0> + beta|1> on site 1, real amplitudes"""
    alpha: float
    beta: float

    @model_validator(mode="after")
    def _check_normalization(self):
        if abs(self.alpha ** 2 + self.beta ** 2 - 1.0) > NORM_TOLERANCE:
            raise ValueError("alpha^2 + beta^2 must equal 1")
        return self

    @classmethod
    def from_alpha(cls, alpha: float) -> "InputState":
        """build the state with beta = sqrt(1 - alpha^2)"""
        if not 0.0 <= alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        return cls(alpha=alpha, beta=math.sqrt(max(0.0, 1.0 - alpha * alpha)))

    @classmethod
    def vacuum(cls) -> "InputState":
        """all spins down"""
        return cls(alpha=1.0, beta=0.0)

    @property
    def is_vacuum(self) -> bool:
        return self.beta == 0.0


class BlochVector(_Frozen):
    """single-site spin expectations (<S^x>, <S^y>, <S^z>)"""
    sx: float
    sy: float
    sz: float

    @property
    def norm(self) -> float:
        return math.sqrt(self.sx ** 2 + self.sy ** 2 + self.sz ** 2)

    def as_array(self) -> np.ndarray:
        return np.array([self.sx, self.sy, self.sz])


# sweeps

class SweepConfig(_Frozen):
    """(t, gamma) grid on a fixed chain, receiver site and input state"""
    n_sites: int = Field(..., ge=3)
    coupling: float
    field: float
    receiver: int = Field(..., ge=1, description="receiver site r, never inferred")
    input_state: InputState
    t_min: float = 0.0
    t_max: float = 50.0
    t_steps: int = Field(default=201, ge=1)
    gamma_min: float = 0.0
    gamma_max: float = 1.0
    gamma_steps: int = Field(default=101, ge=1)
    unbounded_gamma: bool = Field(default=False, description="allow gamma outside [0, 1]")
    workers: int = Field(default=1, ge=1)

    @field_validator("t_min", "t_max")
    @classmethod
    def _check_time(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("times must be finite")
        return value

    @model_validator(mode="after")
    def _check_ranges(self):
        if self.t_min > self.t_max:
            raise ValueError("t_min must not exceed t_max")
        if self.gamma_min > self.gamma_max:
            raise ValueError("gamma_min must not exceed gamma_max")
        if not self.unbounded_gamma and (self.gamma_min < 0.0 or self.gamma_max > 1.0):
            raise ValueError("gamma range must lie in [0, 1] unless unbounded_gamma is set")
        if self.receiver > self.n_sites:
            raise ValueError(f"receiver site must lie in 1..{self.n_sites}")
        return self

    @property
    def cell_count(self) -> int:
        return self.t_steps * self.gamma_steps

    def t_values(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.t_steps)

    def gamma_values(self) -> np.ndarray:
        return np.linspace(self.gamma_min, self.gamma_max, self.gamma_steps)

    def chain(self, gamma: float) -> ChainSpec:
        return ChainSpec(
            n_sites=self.n_sites,
            coupling=self.coupling,
            anisotropy=float(gamma),
            field=self.field,
        )


class SweepRow(_Frozen):
    """one grid cell, columns in csv order"""
    t: float
    gamma: float
    sx: float
    sy: float
    sz: float
    fidelity: float
    tangle: float


class SweepMetadata(_Frozen):
    """metadata block written ahead of the rows"""
    schema_version: int = 1
    code_version: str
    timestamp: str
    n_sites: int
    coupling: float
    field: float
    receiver: int
    alpha: float
    beta: float
    vacuum: bool
    t_min: float
    t_max: float
    t_steps: int
    gamma_min: float
    gamma_max: float
    gamma_steps: int


class SweepResult(_Frozen):
    """full grid, gamma-major then t"""
    metadata: SweepMetadata
    rows: List[SweepRow]


class PeakRecord(_Frozen):
    """strict local maximum of a swept quantity"""
    t: float
    gamma: float
    value: float


class PointRecord(_Frozen):
    """single (t, gamma) evaluation"""
    t: float
    gamma: float
    n_sites: int
    coupling: float
    field: float
    receiver: int
    alpha: float
    beta: float
    sx: float
    sy: float
    sz: float
    fidelity: float
    tangle: float
    entropy: float


class ObservableDeviations(_Frozen):
    """absolute deviation per reported observable"""
    sx: float
    sy: float
    sz: float
    tangle: float
    fidelity: float

    def largest(self) -> float:
        return max(self.sx, self.sy, self.sz, self.tangle, self.fidelity)


class VerifyPointReport(_Frozen):
    """deviations at one sampled point"""
    t: float
    gamma: float
    deviations: ObservableDeviations
    deviation: float = Field(..., description="largest entry of deviations")
    spin_deviation: float


class VerifyReport(_Frozen):
    """free-fermion vs exact-diagonalization comparison"""
    n_sites: int
    coupling: float
    field: float
    receiver: int
    alpha: float
    beta: float
    points: int
    seed: int
    tolerance: float
    max_deviation: float
    max_deviations: ObservableDeviations = Field(..., description="per-observable maximum over all points")
    spin_max_deviation: float
    worst_point: Optional[VerifyPointReport] = None
    passed: bool


# http requests

class PointRequest(_Frozen):
    """request schema for a single point"""
    n_sites: int = Field(default=5, ge=3)
    coupling: float = Field(..., description="exchange J")
    anisotropy: float = Field(..., description="gamma")
    field: float = Field(..., description="transverse field h")
    receiver: int = Field(default=3, ge=1)
    alpha: float = Field(default=math.sqrt(3.0) / 2.0, ge=0.0, le=1.0)
    vacuum: bool = Field(default=False, description="start from all spins down")
    t: float = Field(..., description="evaluation time, negative values run backward")


class SweepRequest(_Frozen):
    """request schema for a (t, gamma) grid sweep"""
    n_sites: int = Field(default=5, ge=3)
    coupling: float
    field: float
    receiver: int = Field(default=3, ge=1)
    alpha: float = Field(default=math.sqrt(3.0) / 2.0, ge=0.0, le=1.0)
    vacuum: bool = False
    t_min: float = 0.0
    t_max: float = 50.0
    t_steps: int = Field(default=201, ge=1)
    gamma_min: float = 0.0
    gamma_max: float = 1.0
    gamma_steps: int = Field(default=101, ge=1)
    unbounded_gamma: bool = False
    timestamp: Optional[str] = Field(default=None, description="metadata timestamp, \"now\" for wall clock")


class PeaksRequest(_Frozen):
    """request schema for peak finding on a sweep result"""
    result: SweepResult
    quantity: Literal["fidelity", "tangle"] = "fidelity"
    top_k: int = Field(default=10, ge=1)
    first_along_t: bool = Field(default=False, description="only the earliest prominent maximum in t")
    gamma: Optional[float] = Field(default=None, description="column for first_along_t")
    prominence: float = Field(default=0.1, gt=0.0, le=1.0)


class VerifyRequest(_Frozen):
    """request schema for oracle verification"""
    n_sites: int = Field(default=5, ge=3)
    coupling: float
    field: float
    receiver: int = Field(default=3, ge=1)
    alpha: float = Field(default=math.sqrt(3.0) / 2.0, ge=0.0, le=1.0)
    vacuum: bool = False
    points: int = Field(default=50, ge=1)
    seed: int = 0
    t_min: float = 0.0
    t_max: float = 50.0
    gamma_min: float = 0.0
    gamma_max: float = 1.0

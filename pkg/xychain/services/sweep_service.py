"""point, sweep, peak and verification operations shared by the cli and the api"""

import logging
from datetime import datetime, timezone
from multiprocessing import Pool
from typing import Any, Dict, Iterable, List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import ValidationError
from scipy import signal

from .. import __version__
from ..config import get_settings
from ..exceptions import (
    InvalidParameterError,
    SizeGuardError,
    SweepFileError,
    VerificationError,
)
from ..schemas import (
    BlochVector,
    ChainSpec,
    InputState,
    ObservableDeviations,
    PeakRecord,
    PointRecord,
    SweepConfig,
    SweepMetadata,
    SweepResult,
    SweepRow,
    VerifyPointReport,
    VerifyReport,
)
from . import ed_oracle
from .chain_model import build_chain
from .observables import entanglement_entropy, fermion_pipeline

logger = logging.getLogger(__name__)

Quantity = Literal["fidelity", "tangle"]


def resolve_input_state(alpha: Optional[float], vacuum: bool = False) -> InputState:
    """vacuum input, or alpha|0> + sqrt(1 - alpha^2)|1>

    raises:
        InvalidParameterError: alpha outside [0, 1]
    """
    if vacuum:
        return InputState.vacuum()
    alpha = get_settings().default_alpha if alpha is None else alpha
    try:
        return InputState.from_alpha(float(alpha))
    except (ValueError, ValidationError) as e:
        raise InvalidParameterError(f"invalid input state: {e}") from e


def build_sweep_config(**fields) -> SweepConfig:
    """SweepConfig with pydantic errors mapped to InvalidParameterError"""
    try:
        return SweepConfig(**fields)
    except ValidationError as e:
        raise InvalidParameterError(f"invalid sweep configuration: {e}") from e


def resolve_timestamp(value: Optional[str] = None) -> str:
    """metadata timestamp: SOURCE_DATE_EPOCH by default, wall clock for "now" """
    if value is None:
        epoch = get_settings().source_date_epoch
        return datetime.fromtimestamp(epoch, tz=timezone.utc).isoformat()
    if value == "now":
        return datetime.now(tz=timezone.utc).isoformat()
    return value


def _evaluate(spec: ChainSpec, t: float, r: int, input_state: InputState) -> SweepRow:
    b, fidelity, tangle = fermion_pipeline(spec, t, r, input_state)
    return SweepRow(
        t=float(t),
        gamma=spec.anisotropy,
        sx=b.sx,
        sy=b.sy,
        sz=b.sz,
        fidelity=fidelity,
        tangle=tangle,
    )


def run_point(spec: ChainSpec, t: float, r: int, input_state: InputState) -> PointRecord:
    """single (t, gamma) record, evaluated exactly as one sweep cell"""
    if not np.isfinite(t):
        raise InvalidParameterError(f"time must be finite, got {t}")
    if not 1 <= r <= spec.n_sites:
        raise InvalidParameterError(f"receiver site must lie in 1..{spec.n_sites}, got {r}")

    row = _evaluate(spec, t, r, input_state)
    return PointRecord(
        t=row.t,
        gamma=row.gamma,
        n_sites=spec.n_sites,
        coupling=spec.coupling,
        field=spec.field,
        receiver=r,
        alpha=input_state.alpha,
        beta=input_state.beta,
        sx=row.sx,
        sy=row.sy,
        sz=row.sz,
        fidelity=row.fidelity,
        tangle=row.tangle,
        entropy=entanglement_entropy(row.tangle),
    )


def _column_job(args: Tuple[SweepConfig, float]) -> List[SweepRow]:
    config, gamma = args
    spec = config.chain(gamma)
    return [
        _evaluate(spec, t, config.receiver, config.input_state)
        for t in config.t_values()
    ]


def _metadata(config: SweepConfig, timestamp: str) -> SweepMetadata:
    return SweepMetadata(
        code_version=__version__,
        timestamp=timestamp,
        n_sites=config.n_sites,
        coupling=config.coupling,
        field=config.field,
        receiver=config.receiver,
        alpha=config.input_state.alpha,
        beta=config.input_state.beta,
        vacuum=config.input_state.is_vacuum,
        t_min=config.t_min,
        t_max=config.t_max,
        t_steps=config.t_steps,
        gamma_min=config.gamma_min,
        gamma_max=config.gamma_max,
        gamma_steps=config.gamma_steps,
    )


def run_sweep(config: SweepConfig, timestamp: Optional[str] = None) -> SweepResult:
    """evaluate the full (t, gamma) grid, rows gamma-major then t

    gamma columns go to a process pool when config.workers > 1; pool.map
    returns them in submission order, so the rows do not depend on workers.
    """
    jobs = [(config, float(gamma)) for gamma in config.gamma_values()]
    logger.info(
        "sweep N=%d J=%g h=%g r=%d: %d x %d cells on %d worker(s)",
        config.n_sites,
        config.coupling,
        config.field,
        config.receiver,
        config.t_steps,
        config.gamma_steps,
        config.workers,
    )

    if config.workers > 1 and len(jobs) > 1:
        with Pool(processes=min(config.workers, len(jobs))) as pool:
            columns = pool.map(_column_job, jobs)
    else:
        columns = [_column_job(job) for job in jobs]

    rows = [row for column in columns for row in column]
    logger.info("sweep finished with %d rows", len(rows))
    return SweepResult(metadata=_metadata(config, resolve_timestamp(timestamp)), rows=rows)


def _grid(rows: Sequence[SweepRow], quantity: Quantity) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    t_axis = np.array(sorted({row.t for row in rows}))
    gamma_axis = np.array(sorted({row.gamma for row in rows}))
    if len(rows) != t_axis.size * gamma_axis.size:
        raise SweepFileError(
            f"rows do not form a complete grid: {len(rows)} rows for "
            f"{t_axis.size} t x {gamma_axis.size} gamma values"
        )

    t_index = {t: i for i, t in enumerate(t_axis)}
    gamma_index = {g: j for j, g in enumerate(gamma_axis)}
    values = np.full((t_axis.size, gamma_axis.size), np.nan)
    for row in rows:
        i, j = t_index[row.t], gamma_index[row.gamma]
        if not np.isnan(values[i, j]):
            raise SweepFileError(f"duplicate grid cell at t={row.t}, gamma={row.gamma}")
        values[i, j] = getattr(row, quantity)
    return t_axis, gamma_axis, values


def find_peaks(
    rows: Iterable[SweepRow],
    quantity: Quantity = "fidelity",
    top_k: Optional[int] = None,
) -> List[PeakRecord]:
    """strict local maxima over the 4-neighbourhood of the (t, gamma) grid

    sorted by value descending, ties by (t, gamma) ascending.

    raises:
        InvalidParameterError: unknown quantity or top_k < 1
        SweepFileError: rows that do not form a complete grid
    """
    if quantity not in ("fidelity", "tangle"):
        raise InvalidParameterError(f"unknown quantity {quantity!r}")
    if top_k is not None and top_k < 1:
        raise InvalidParameterError(f"top_k must be positive, got {top_k}")

    rows = list(rows)
    if not rows:
        return []
    t_axis, gamma_axis, values = _grid(rows, quantity)

    n_t, n_gamma = values.shape
    peaks: List[PeakRecord] = []
    for i in range(n_t):
        for j in range(n_gamma):
            value = values[i, j]
            neighbours = [
                values[a, b]
                for a, b in ((i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1))
                if 0 <= a < n_t and 0 <= b < n_gamma
            ]
            if all(value > other for other in neighbours):
                peaks.append(
                    PeakRecord(t=float(t_axis[i]), gamma=float(gamma_axis[j]), value=float(value))
                )

    peaks.sort(key=lambda peak: (-peak.value, peak.t, peak.gamma))
    return peaks if top_k is None else peaks[:top_k]


def first_peak(
    rows: Iterable[SweepRow],
    quantity: Quantity = "tangle",
    gamma: Optional[float] = None,
    prominence: float = 0.1,
) -> Optional[PeakRecord]:
    """earliest maximum along t in one gamma column

    a maximum counts when its topographic prominence is at least
    `prominence` times the column's range, so shallow ripples on a rising
    flank are skipped. gamma may be omitted for a single-column sweep.

    raises:
        InvalidParameterError: unknown quantity, prominence outside (0, 1]
            or no column at gamma
        SweepFileError: rows that do not form a complete grid
    """
    if quantity not in ("fidelity", "tangle"):
        raise InvalidParameterError(f"unknown quantity {quantity!r}")
    if not 0.0 < prominence <= 1.0:
        raise InvalidParameterError(f"prominence must lie in (0, 1], got {prominence}")

    rows = list(rows)
    if not rows:
        return None
    t_axis, gamma_axis, values = _grid(rows, quantity)

    if gamma is None:
        if gamma_axis.size != 1:
            raise InvalidParameterError("gamma is required for a sweep with several gamma values")
        j = 0
    else:
        matches = np.flatnonzero(np.isclose(gamma_axis, gamma, rtol=0.0, atol=1e-12))
        if matches.size == 0:
            raise InvalidParameterError(f"no gamma column at {gamma}")
        j = int(matches[0])

    column = values[:, j]
    spread = float(np.max(column) - np.min(column))
    if spread == 0.0:
        return None
    indices, _ = signal.find_peaks(column, prominence=prominence * spread)
    if indices.size == 0:
        return None
    i = int(indices[0])
    return PeakRecord(t=float(t_axis[i]), gamma=float(gamma_axis[j]), value=float(column[i]))


def _deviations(
    free: Tuple[BlochVector, float, float], exact: Tuple[BlochVector, float, float]
) -> ObservableDeviations:
    (b, fidelity, tangle), (exact_b, exact_fidelity, exact_tangle) = free, exact
    return ObservableDeviations(
        sx=abs(b.sx - exact_b.sx),
        sy=abs(b.sy - exact_b.sy),
        sz=abs(b.sz - exact_b.sz),
        tangle=abs(tangle - exact_tangle),
        fidelity=abs(fidelity - exact_fidelity),
    )


def run_verify(
    n_sites: int,
    coupling: float,
    field: float,
    receiver: int,
    input_state: InputState,
    points: Optional[int] = None,
    seed: int = 0,
    t_range: Tuple[float, float] = (0.0, 50.0),
    gamma_range: Tuple[float, float] = (0.0, 1.0),
    tolerance: Optional[float] = None,
) -> VerifyReport:
    """compare the free-fermion pipeline against fermionic exact diagonalization

    deviations are kept per observable (sx, sy, sz, tau, F); a point fails
    on the largest of them. the spin-hamiltonian deviation is reported only.

    raises:
        SizeGuardError: N above the verification guard
        InvalidParameterError: bad chain, site or sampling ranges
    """
    settings = get_settings()
    points = settings.verify_points if points is None else points
    tolerance = settings.verify_tolerance if tolerance is None else tolerance

    if n_sites > settings.verify_max_sites:
        raise SizeGuardError(
            f"verification is limited to N <= {settings.verify_max_sites}, got {n_sites}"
        )
    if points < 1:
        raise InvalidParameterError(f"points must be positive, got {points}")
    if not 1 <= receiver <= n_sites:
        raise InvalidParameterError(f"receiver site must lie in 1..{n_sites}, got {receiver}")
    (t_min, t_max), (gamma_min, gamma_max) = t_range, gamma_range
    if t_min > t_max or gamma_min > gamma_max:
        raise InvalidParameterError("verification ranges must be ordered")

    rng = np.random.default_rng(seed)
    gammas = rng.uniform(gamma_min, gamma_max, size=points)
    times = rng.uniform(t_min, t_max, size=points)

    reports: List[VerifyPointReport] = []
    for gamma, t in zip(gammas, times):
        spec = build_chain(coupling, float(gamma), field, n_sites)
        free = fermion_pipeline(spec, float(t), receiver, input_state)
        deviations = _deviations(free, ed_oracle.oracle_pipeline(spec, float(t), receiver, input_state))
        spin = _deviations(free, ed_oracle.spin_oracle_pipeline(spec, float(t), receiver, input_state))
        reports.append(
            VerifyPointReport(
                t=float(t),
                gamma=float(gamma),
                deviations=deviations,
                deviation=deviations.largest(),
                spin_deviation=spin.largest(),
            )
        )

    worst = max(reports, key=lambda report: report.deviation)
    max_deviations = ObservableDeviations(
        **{
            name: max(getattr(report.deviations, name) for report in reports)
            for name in ObservableDeviations.model_fields
        }
    )
    report = VerifyReport(
        n_sites=n_sites,
        coupling=coupling,
        field=field,
        receiver=receiver,
        alpha=input_state.alpha,
        beta=input_state.beta,
        points=points,
        seed=seed,
        tolerance=tolerance,
        max_deviation=worst.deviation,
        max_deviations=max_deviations,
        spin_max_deviation=max(report.spin_deviation for report in reports),
        worst_point=worst,
        passed=worst.deviation < tolerance,
    )
    logger.info(
        "verify N=%d over %d points: max deviation %.3e "
        "(sx %.1e, sy %.1e, sz %.1e, tau %.1e, F %.1e; spin %.3e), %s",
        n_sites,
        points,
        report.max_deviation,
        max_deviations.sx,
        max_deviations.sy,
        max_deviations.sz,
        max_deviations.tangle,
        max_deviations.fidelity,
        report.spin_max_deviation,
        "passed" if report.passed else "FAILED",
    )
    return report


def ensure_passed(report: VerifyReport) -> VerifyReport:
    """raise VerificationError carrying the worst point when the report failed"""
    if report.passed:
        return report
    point: Dict[str, Any] = report.worst_point.model_dump() if report.worst_point else {}
    raise VerificationError(
        f"free-fermion pipeline deviates from exact diagonalization by "
        f"{report.max_deviation:.3e} (tolerance {report.tolerance:.1e})",
        point=point,
    )

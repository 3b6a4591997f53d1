"""unit tests for point, sweep, peaks and verify"""

import math

import pytest

from xychain.config import PRESETS
from xychain.exceptions import InvalidParameterError, SizeGuardError, SweepFileError, VerificationError
from xychain.schemas import InputState, SweepRow
from xychain.services.chain_model import build_chain
from xychain.services.sweep_service import (
    build_sweep_config,
    ensure_passed,
    find_peaks,
    first_peak,
    resolve_input_state,
    resolve_timestamp,
    run_point,
    run_sweep,
    run_verify,
)


def _config(encoded_state, **overrides):
    fields = dict(
        n_sites=5,
        coupling=1.0,
        field=0.1,
        receiver=3,
        input_state=encoded_state,
        t_min=0.0,
        t_max=10.0,
        t_steps=6,
        gamma_min=0.0,
        gamma_max=1.0,
        gamma_steps=4,
    )
    fields.update(overrides)
    return build_sweep_config(**fields)


def _rows(values, t_axis, gamma_axis):
    """synthetic rows with fidelity = values[i][j] at (t_i, gamma_j)"""
    return [
        SweepRow(t=t, gamma=g, sx=0.0, sy=0.0, sz=-0.5, fidelity=values[i][j], tangle=0.0)
        for j, g in enumerate(gamma_axis)
        for i, t in enumerate(t_axis)
    ]


class TestInputs:
    """test cases for input resolution"""

    def test_default_alpha(self):
        """test alpha defaults to sqrt(3)/2"""
        state = resolve_input_state(None)
        assert state.alpha == pytest.approx(math.sqrt(3.0) / 2.0)
        assert state.beta == pytest.approx(0.5)

    def test_vacuum_wins(self):
        """test the vacuum flag ignores alpha"""
        assert resolve_input_state(0.3, vacuum=True) == InputState.vacuum()

    def test_rejects_alpha_above_one(self):
        """test alpha > 1 is an invalid parameter"""
        with pytest.raises(InvalidParameterError):
            resolve_input_state(1.5)

    def test_rejects_gamma_outside_unit_interval(self, encoded_state):
        """test gamma > 1 needs unbounded_gamma"""
        with pytest.raises(InvalidParameterError, match="unbounded_gamma"):
            _config(encoded_state, gamma_max=1.5)
        assert _config(encoded_state, gamma_max=1.5, unbounded_gamma=True).gamma_max == 1.5

    def test_rejects_receiver_beyond_chain(self, encoded_state):
        """test r > N is rejected"""
        with pytest.raises(InvalidParameterError):
            _config(encoded_state, receiver=6)

    def test_timestamp(self):
        """test the default timestamp is fixed and explicit values pass through"""
        assert resolve_timestamp() == resolve_timestamp()
        assert resolve_timestamp("2020-01-01T00:00:00+00:00") == "2020-01-01T00:00:00+00:00"
        assert resolve_timestamp("now") != ""


class TestPoint:
    """test cases for single points"""

    @pytest.mark.parametrize("preset", sorted(PRESETS))
    def test_zero_time(self, preset, encoded_state):
        """test F(0) = alpha, tau(0) = 0 for every regime"""
        values = PRESETS[preset]
        spec = build_chain(values["coupling"], 0.5, values["field"], 5)
        record = run_point(spec, 0.0, 3, encoded_state)
        assert record.fidelity == pytest.approx(encoded_state.alpha, abs=1e-12)
        assert record.tangle == pytest.approx(0.0, abs=1e-12)
        assert record.entropy == pytest.approx(0.0, abs=1e-12)

    def test_negative_time_mirrors(self, weak_chain, encoded_state):
        """test backward evolution keeps sx, sz, F, tau and flips sy"""
        forward = run_point(weak_chain, 6.3, 3, encoded_state)
        backward = run_point(weak_chain, -6.3, 3, encoded_state)
        assert backward.t == -6.3
        assert backward.sx == pytest.approx(forward.sx, abs=1e-12)
        assert backward.sy == pytest.approx(-forward.sy, abs=1e-12)
        assert backward.sz == pytest.approx(forward.sz, abs=1e-12)
        assert backward.fidelity == pytest.approx(forward.fidelity, abs=1e-12)
        assert backward.tangle == pytest.approx(forward.tangle, abs=1e-12)

    def test_rejects_non_finite_time(self, weak_chain, encoded_state):
        """test t = nan is rejected"""
        with pytest.raises(InvalidParameterError):
            run_point(weak_chain, math.nan, 3, encoded_state)

    def test_rejects_bad_receiver(self, weak_chain, encoded_state):
        """test r outside 1..N is rejected"""
        with pytest.raises(InvalidParameterError):
            run_point(weak_chain, 1.0, 0, encoded_state)

    def test_point_equals_single_cell_sweep(self, encoded_state):
        """test a 1x1 sweep reproduces the point exactly"""
        config = _config(encoded_state, t_min=7.1, t_max=7.1, t_steps=1,
                         gamma_min=0.42, gamma_max=0.42, gamma_steps=1)
        row = run_sweep(config).rows[0]
        record = run_point(build_chain(1.0, 0.42, 0.1, 5), 7.1, 3, encoded_state)
        assert (row.sx, row.sy, row.sz, row.fidelity, row.tangle) == (
            record.sx, record.sy, record.sz, record.fidelity, record.tangle
        )


class TestSweep:
    """test cases for grid sweeps"""

    def test_row_order(self, encoded_state):
        """test rows run gamma-major then t, with the metadata filled in"""
        result = run_sweep(_config(encoded_state))
        assert len(result.rows) == 24
        assert [row.gamma for row in result.rows[:6]] == [0.0] * 6
        assert [row.t for row in result.rows[:6]] == pytest.approx([0.0, 2.0, 4.0, 6.0, 8.0, 10.0])
        assert result.rows[6].gamma == pytest.approx(1.0 / 3.0)
        assert result.metadata.t_steps == 6
        assert result.metadata.gamma_steps == 4
        assert result.metadata.vacuum is False

    def test_deterministic(self, encoded_state):
        """test repeated sweeps give identical results"""
        config = _config(encoded_state)
        assert run_sweep(config) == run_sweep(config)

    def test_workers_do_not_change_rows(self, encoded_state):
        """test a process pool gives the same rows as inline evaluation"""
        inline = run_sweep(_config(encoded_state))
        pooled = run_sweep(_config(encoded_state, workers=2))
        assert inline.rows == pooled.rows

    def test_zero_time_column(self, encoded_state):
        """test F = alpha and tau = 0 on every t = 0 cell"""
        result = run_sweep(_config(encoded_state))
        for row in result.rows:
            if row.t == 0.0:
                assert row.fidelity == pytest.approx(encoded_state.alpha, abs=1e-12)
                assert row.tangle == pytest.approx(0.0, abs=1e-12)


class TestPeaks:
    """test cases for local maxima"""

    def test_single_interior_peak(self):
        """test a single bump is found"""
        values = [[0.1, 0.2, 0.1], [0.2, 0.9, 0.3], [0.1, 0.2, 0.1]]
        peaks = find_peaks(_rows(values, [0.0, 1.0, 2.0], [0.0, 0.5, 1.0]))
        assert len(peaks) == 1
        assert (peaks[0].t, peaks[0].gamma, peaks[0].value) == (1.0, 0.5, 0.9)

    def test_monotone_grid_peaks_at_corner(self):
        """test a monotone ramp has one corner peak"""
        values = [[i + j for j in range(3)] for i in range(4)]
        peaks = find_peaks(_rows(values, [0.0, 1.0, 2.0, 3.0], [0.0, 0.5, 1.0]))
        assert [(p.t, p.gamma) for p in peaks] == [(3.0, 1.0)]

    def test_plateau_is_not_a_peak(self):
        """test equal neighbours are not strict maxima"""
        values = [[0.5, 0.5], [0.5, 0.5]]
        assert find_peaks(_rows(values, [0.0, 1.0], [0.0, 1.0])) == []

    def test_ordering_and_top_k(self):
        """test value descending, ties by t then gamma, then truncation"""
        values = [
            [0.8, 0.0, 0.8],
            [0.0, 0.0, 0.0],
            [0.9, 0.0, 0.8],
        ]
        rows = _rows(values, [0.0, 1.0, 2.0], [0.0, 0.5, 1.0])
        peaks = find_peaks(rows)
        assert [(p.t, p.gamma) for p in peaks] == [(2.0, 0.0), (0.0, 0.0), (0.0, 1.0), (2.0, 1.0)]
        assert find_peaks(rows, top_k=2) == peaks[:2]

    def test_tangle_quantity(self):
        """test peaks can be taken over the tangle column"""
        rows = [row.model_copy(update={"tangle": row.fidelity}) for row in
                _rows([[0.1, 0.2], [0.4, 0.3]], [0.0, 1.0], [0.0, 1.0])]
        peaks = find_peaks(rows, quantity="tangle")
        assert [(p.t, p.gamma) for p in peaks] == [(1.0, 0.0)]

    def test_incomplete_grid(self):
        """test missing cells are a sweep file error"""
        rows = _rows([[0.1, 0.2], [0.3, 0.4]], [0.0, 1.0], [0.0, 1.0])[:-1]
        with pytest.raises(SweepFileError):
            find_peaks(rows)

    def test_rejects_bad_arguments(self):
        """test unknown quantity and top_k < 1"""
        rows = _rows([[0.1]], [0.0], [0.0])
        with pytest.raises(InvalidParameterError):
            find_peaks(rows, quantity="entropy")
        with pytest.raises(InvalidParameterError):
            find_peaks(rows, top_k=0)


class TestFirstPeak:
    """test cases for the earliest prominent maximum along t"""

    column = [0.0, 0.30, 0.29, 0.5, 0.9, 0.2, 0.1, 0.6, 0.0]

    def _single_column(self):
        return _rows([[v] for v in self.column], [float(i) for i in range(9)], [0.5])

    def test_skips_shallow_ripple(self):
        """test a ripple below the prominence threshold is not the first peak"""
        peak = first_peak(self._single_column(), quantity="fidelity")
        assert (peak.t, peak.gamma, peak.value) == (4.0, 0.5, 0.9)

    def test_low_threshold_keeps_ripple(self):
        """test a small prominence returns the ripple"""
        peak = first_peak(self._single_column(), quantity="fidelity", prominence=0.001)
        assert peak.t == 1.0

    def test_selects_gamma_column(self):
        """test gamma picks one column of a multi-column grid"""
        values = [[v, 0.0] for v in self.column]
        rows = _rows(values, [float(i) for i in range(9)], [0.0, 1.0])
        assert first_peak(rows, quantity="fidelity", gamma=0.0).t == 4.0
        assert first_peak(rows, quantity="fidelity", gamma=1.0) is None

    def test_rejects_ambiguous_or_missing_column(self):
        """test several columns need gamma and gamma must exist"""
        rows = _rows([[0.1, 0.2], [0.3, 0.4]], [0.0, 1.0], [0.0, 1.0])
        with pytest.raises(InvalidParameterError, match="gamma"):
            first_peak(rows, quantity="fidelity")
        with pytest.raises(InvalidParameterError, match="no gamma column"):
            first_peak(rows, quantity="fidelity", gamma=0.5)

    def test_rejects_bad_prominence(self):
        """test prominence must lie in (0, 1]"""
        with pytest.raises(InvalidParameterError):
            first_peak(self._single_column(), quantity="fidelity", prominence=0.0)


class TestVerify:
    """test cases for oracle verification"""

    def test_passes_on_small_chain(self, encoded_state):
        """test N = 5 agrees with exact diagonalization"""
        report = run_verify(5, 1.0, 0.1, 3, encoded_state, points=10, seed=1)
        assert report.passed is True
        assert report.max_deviation < 1e-9
        assert report.points == 10
        assert ensure_passed(report) is report

    def test_per_observable_breakdown(self, encoded_state):
        """test sx, sy, sz, tau and F each carry their own maximum"""
        report = run_verify(4, 0.7, 0.4, 3, encoded_state, points=8, seed=5)
        breakdown = report.max_deviations.model_dump()
        assert set(breakdown) == {"sx", "sy", "sz", "tangle", "fidelity"}
        assert all(0.0 <= value < 1e-9 for value in breakdown.values())
        assert report.max_deviation == max(breakdown.values())
        assert report.worst_point.deviation == report.worst_point.deviations.largest()

    def test_reproducible(self, encoded_state):
        """test the same seed samples the same points"""
        first = run_verify(4, 0.5, 0.5, 2, encoded_state, points=5, seed=42)
        second = run_verify(4, 0.5, 0.5, 2, encoded_state, points=5, seed=42)
        assert first == second

    def test_backward_time_range(self, encoded_state):
        """test negative sampling times verify like positive ones"""
        report = run_verify(4, 1.0, 0.3, 2, encoded_state, points=5, t_range=(-20.0, 0.0))
        assert report.passed is True
        assert report.worst_point.t <= 0.0

    def test_size_guard(self, encoded_state):
        """test N above the verification limit is refused"""
        with pytest.raises(SizeGuardError):
            run_verify(11, 1.0, 0.1, 3, encoded_state, points=1)

    def test_failure_carries_worst_point(self, encoded_state):
        """test a failed report raises with the offending point"""
        report = run_verify(3, 1.0, 0.1, 2, encoded_state, points=3, tolerance=0.0)
        assert report.passed is False
        with pytest.raises(VerificationError) as info:
            ensure_passed(report)
        assert set(info.value.point) == {"t", "gamma", "deviations", "deviation", "spin_deviation"}
        assert set(info.value.point["deviations"]) == {"sx", "sy", "sz", "tangle", "fidelity"}


def _sweep(preset, input_state, **overrides):
    values = PRESETS[preset]
    config = build_sweep_config(
        n_sites=5,
        coupling=values["coupling"],
        field=values["field"],
        receiver=3,
        input_state=input_state,
        **overrides,
    )
    return run_sweep(config)


class TestRegimeTargets:
    """fidelity and tangle structure of the three regimes on five sites"""

    @pytest.mark.parametrize("t,gamma", [(27.70, 0.28), (7.10, 0.42)])
    def test_weak_field_fidelity_peaks(self, encoded_state, t, gamma):
        """test fidelity maxima within (0.5, 0.02) of the quoted (t, gamma) with F ~ 0.98"""
        result = _sweep(
            "weak",
            encoded_state,
            t_min=t - 1.0,
            t_max=t + 1.0,
            t_steps=41,
            gamma_min=gamma - 0.04,
            gamma_max=gamma + 0.04,
            gamma_steps=17,
        )
        peaks = find_peaks(result.rows)
        near = [p for p in peaks if abs(p.t - t) <= 0.5 and abs(p.gamma - gamma) <= 0.02]
        assert near
        assert max(p.value for p in near) == pytest.approx(0.98, abs=0.02)

    def test_weak_field_vacuum_tangle(self):
        """test the vacuum reaches tau ~ 1 at gamma = 1, t = 1.5"""
        record = run_point(build_chain(1.0, 1.0, 0.1, 5), 1.5, 3, InputState.vacuum())
        assert record.tangle == pytest.approx(1.0, abs=0.02)

    def test_strong_field_tangle_stays_small(self):
        """test the vacuum tangle at gamma = 1 never exceeds a few percent"""
        result = _sweep("strong", InputState.vacuum(), gamma_min=1.0, gamma_max=1.0, gamma_steps=1)
        tangles = [row.tangle for row in result.rows]
        assert 0.01 < max(tangles) < 0.05
        first = first_peak(result.rows)
        assert first.t == pytest.approx(1.5, abs=0.3)

    def test_intermediate_first_tangle_peak(self):
        """test the first vacuum tangle peak at gamma = 1 and that tau never reaches 1"""
        result = _sweep("intermediate", InputState.vacuum(), gamma_min=1.0, gamma_max=1.0, gamma_steps=1)
        first = first_peak(result.rows)
        assert first.t == pytest.approx(2.5, abs=0.3)
        assert first.value == pytest.approx(0.80, abs=0.03)
        assert max(row.tangle for row in result.rows) < 0.9

    def test_isotropic_vacuum_is_stationary(self):
        """test the vacuum is an eigenstate at gamma = 0 in every regime"""
        for preset in PRESETS:
            result = _sweep(preset, InputState.vacuum(), t_steps=51, gamma_min=0.0, gamma_max=0.0, gamma_steps=1)
            assert max(row.tangle for row in result.rows) == pytest.approx(0.0, abs=1e-12)

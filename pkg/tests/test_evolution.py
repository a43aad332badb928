import math

import numpy as np
import pytest

from geopump import (
    FieldCycle1D,
    LoopParams,
    ZeroFieldError,
    build_loop_operator,
    cosine_cycle_zeros,
    excited_state,
    ground_state,
    off_diagonal_magnitude,
    power,
    propagate_state,
    pump_1d,
    pump_trace,
    su2_defect,
    trajectory_angles,
    z2_index,
)

RNG = np.random.default_rng(77)


def _random_loop(rng):
    return LoopParams(
        rng.uniform(0.0, math.pi),
        rng.uniform(0.0, 2.0 * math.pi),
        rng.uniform(-math.pi / 2, math.pi / 2),
    )


def test_loop_operator_entries():
    lp = LoopParams(math.pi / 2, 0.7, 0.3)
    u = build_loop_operator(lp)
    ch, sh = math.cos(lp.theta / 2), math.sin(lp.theta / 2)
    assert u[0, 0] == pytest.approx(ch * np.exp(-1j * 0.3), abs=1e-15)
    assert u[0, 1] == pytest.approx(-sh * np.exp(-1j * 0.4), abs=1e-15)
    assert u[1, 0] == pytest.approx(sh * np.exp(1j * 0.4), abs=1e-15)
    assert u[1, 1] == pytest.approx(ch * np.exp(1j * 0.3), abs=1e-15)
    assert su2_defect(u) < 1e-15


def test_loop_operator_is_periodic_in_phase():
    base = build_loop_operator(LoopParams(1.1, 0.4, 0.2))
    shifted = build_loop_operator(LoopParams(1.1, 0.4, 0.2 + math.pi))
    np.testing.assert_allclose(shifted, -base, atol=1e-15)


class TestPumpTrace:
    def test_half_turn_alternates(self):
        trace = pump_trace(LoopParams(math.pi, 0.0, 0.4), 4)
        np.testing.assert_allclose(trace.q, [1.0, 0.0, 1.0, 0.0], atol=1e-12)
        assert trace.p[-1] == pytest.approx(0.5, abs=1e-12)

    def test_closed_loop_never_pumps(self):
        trace = pump_trace(LoopParams(0.0, 0.0, 0.7), 50)
        assert np.all(trace.q == 0.0)
        assert np.all(trace.p == 0.0)

    def test_prefix_mean(self):
        trace = pump_trace(_random_loop(RNG), 200)
        means = np.cumsum(trace.q) / np.arange(1, 201)
        np.testing.assert_allclose(trace.p, means, atol=1e-15)

    def test_q_matches_matrix_powers(self):
        lp = _random_loop(RNG)
        u = build_loop_operator(lp)
        trace = pump_trace(lp, 64)
        for j in range(1, 65):
            assert trace.q[j - 1] == pytest.approx(
                abs(power(u, j)[1, 0]) ** 2, abs=1e-12
            )

    def test_q_matches_closed_form_far_out(self):
        # the renormalized product must track |U^n|_{off} for long runs
        lp = LoopParams(1.9, 0.3, 0.45)
        trace = pump_trace(lp, 2000)
        for j in (1, 17, 500, 1024, 1025, 1999, 2000):
            assert trace.q[j - 1] == pytest.approx(
                off_diagonal_magnitude(lp, j) ** 2, abs=1e-9
            )

    def test_excited_initial_state(self):
        lp = _random_loop(RNG)
        u = build_loop_operator(lp)
        trace = pump_trace(lp, 16, initial=excited_state())
        for j in range(1, 17):
            assert trace.q[j - 1] == pytest.approx(
                abs(power(u, j)[1, 1]) ** 2, abs=1e-12
            )

    def test_probabilities_stay_in_unit_interval(self):
        trace = pump_trace(LoopParams(math.pi, 1.0, 0.0), 3000)
        assert np.all(trace.q >= 0.0) and np.all(trace.q <= 1.0)

    @pytest.mark.parametrize("cycles", [0, -3])
    def test_rejects_bad_cycle_count(self, cycles):
        with pytest.raises(ValueError):
            pump_trace(LoopParams(1.0), cycles)

    def test_rejects_bad_initial(self):
        with pytest.raises(ValueError):
            pump_trace(LoopParams(1.0), 5, initial=np.array([1.0, 0.0, 0.0]))
        with pytest.raises(ValueError):
            pump_trace(LoopParams(1.0), 5, initial=np.array([1.0, 1.0]))


class TestPropagateState:
    def test_norm_drift_is_tiny(self):
        _, drift = propagate_state(_random_loop(RNG), 100_000)
        assert drift < 1e-10

    def test_final_state_matches_power(self):
        lp = _random_loop(RNG)
        state, _ = propagate_state(lp, 500)
        expected = power(build_loop_operator(lp), 500) @ ground_state()
        np.testing.assert_allclose(state, expected, atol=1e-11)

    def test_identity_drive_is_exact(self):
        state, drift = propagate_state(LoopParams(0.0), 1000)
        assert drift == 0.0
        assert abs(state[1]) == 0.0


class TestZ2Index:
    @pytest.mark.parametrize(
        "field,spin,expected",
        [(1, 1, 0), (-1, 1, 1), (1, -1, 1), (-1, -1, 0)],
    )
    def test_values(self, field, spin, expected):
        assert z2_index(field, spin) == expected

    def test_zero_field(self):
        with pytest.raises(ZeroFieldError):
            z2_index(0, 1)

    @pytest.mark.parametrize("bad", [2, -3, 0])
    def test_bad_spin(self, bad):
        with pytest.raises(ValueError):
            z2_index(1, bad)

    def test_bad_field_magnitude(self):
        with pytest.raises(ValueError):
            z2_index(2, 1)


class TestCosineCycle:
    def test_centered_cycle_two_transversal(self):
        events = cosine_cycle_zeros(0.0)
        assert [e.time_fraction for e in events] == [0.25, 0.75]
        assert all(e.transversal for e in events)

    def test_high_tangential(self):
        (event,) = cosine_cycle_zeros(1.0)
        assert event.time_fraction == 0.5 and not event.transversal

    def test_low_tangential(self):
        (event,) = cosine_cycle_zeros(-1.0)
        assert event.time_fraction == 0.0 and not event.transversal

    @pytest.mark.parametrize("offset", [1.5, -2.0, 100.0])
    def test_gapped_cycle_is_quiet(self, offset):
        assert cosine_cycle_zeros(offset) == ()

    def test_zero_locations_solve_the_cosine(self):
        for offset in RNG.uniform(-0.999, 0.999, size=20):
            for event in cosine_cycle_zeros(float(offset)):
                assert offset + math.cos(2.0 * math.pi * event.time_fraction) == pytest.approx(
                    0.0, abs=1e-12
                )


class TestPump1D:
    def test_wraps_cycle_offset(self):
        events = pump_1d(FieldCycle1D(0.0))
        assert [(e.time_fraction, e.transversal) for e in events] == [
            (0.25, True),
            (0.75, True),
        ]

    def test_validation(self):
        with pytest.raises(ValueError):
            FieldCycle1D(0.0, omega=0.0)
        with pytest.raises(ValueError):
            FieldCycle1D(0.0, b0=-1.0)

    def test_strong_offset_never_closes(self):
        assert pump_1d(FieldCycle1D(2.5)) == ()


class TestTrajectoryAngles:
    def test_quarter_turn_walk(self):
        angles = trajectory_angles(LoopParams(math.pi / 2), 4)
        expected = [math.pi / 2, math.pi, 3 * math.pi / 2, 0.0]
        for got, want in zip(angles, expected):
            diff = abs(got - want) % (2.0 * math.pi)
            assert min(diff, 2.0 * math.pi - diff) < 1e-12

    def test_range_and_length(self):
        angles = trajectory_angles(_random_loop(RNG), 500)
        assert angles.shape == (500,)
        assert np.all(angles >= 0.0) and np.all(angles < 2.0 * math.pi)

    def test_uniformity_for_generic_drive(self):
        from scipy.stats import kstest

        angles = trajectory_angles(LoopParams(math.pi / 2, 0.0, 0.3), 20_000)
        assert kstest(angles / (2.0 * math.pi), "uniform").statistic < 0.02

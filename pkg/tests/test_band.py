import math

import numpy as np
import pytest

from geopump import (
    ChainParams,
    DriveCycle,
    GapClosedError,
    bloch_vector,
    min_gap,
    pump_profile,
    theta_of_k,
    tpt_events,
    winding_number,
)

RNG = np.random.default_rng(31337)


def _random_gapped(rng, floor=1e-3):
    while True:
        v, w = rng.uniform(-2.0, 2.0, size=2)
        if abs(abs(v) - abs(w)) > floor and abs(w) > floor:
            return ChainParams(float(v), float(w))


class TestChainParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            ChainParams(1.0, 1.0, l=0.0)
        with pytest.raises(ValueError):
            ChainParams(math.inf, 1.0)

    def test_bloch_vector_special_points(self):
        cp = ChainParams(0.7, 1.3)
        assert bloch_vector(0.0, cp) == pytest.approx((2.0, 0.0))
        dx, dy = bloch_vector(math.pi, cp)
        assert dx == pytest.approx(0.7 - 1.3)
        assert dy == pytest.approx(0.0, abs=1e-15)

    def test_bloch_vector_formula(self):
        cp = ChainParams(0.4, -0.9, l=2.0)
        k = 0.37
        dx, dy = bloch_vector(k, cp)
        assert dx == pytest.approx(0.4 - 0.9 * math.cos(2.0 * k))
        assert dy == pytest.approx(-0.9 * math.sin(2.0 * k))


class TestMinGap:
    @pytest.mark.parametrize(
        "v,w,expected", [(1.0, 2.0, 1.0), (2.0, 1.0, 1.0), (1.5, 1.5, 0.0), (-0.5, 2.0, 1.5)]
    )
    def test_values(self, v, w, expected):
        assert min_gap(ChainParams(v, w)) == pytest.approx(expected)

    def test_is_a_lower_bound_on_sampled_gaps(self):
        cp = _random_gapped(RNG)
        ks = np.linspace(-math.pi, math.pi, 501)
        gaps = [math.hypot(*bloch_vector(float(k), cp)) for k in ks]
        assert min(gaps) >= min_gap(cp) - 1e-12


class TestWinding:
    def test_topological_side(self):
        assert winding_number(ChainParams(0.5, 1.0)) == 1
        assert winding_number(ChainParams(-0.5, -1.0)) == 1

    def test_trivial_side(self):
        assert winding_number(ChainParams(1.5, 1.0)) == 0
        assert winding_number(ChainParams(-1.5, 1.0)) == 0

    def test_matches_modulus_criterion(self):
        for _ in range(200):
            cp = _random_gapped(RNG)
            expected = 1 if abs(cp.v) < abs(cp.w) else 0
            assert winding_number(cp) == expected

    def test_closed_gap_rejected(self):
        with pytest.raises(GapClosedError):
            winding_number(ChainParams(1.0, 1.0))

    def test_unresolvably_small_gap_rejected(self):
        with pytest.raises(GapClosedError):
            winding_number(ChainParams(1.0, 1.0 + 1e-9))

    def test_small_but_resolvable_gap(self):
        assert winding_number(ChainParams(1.0, 1.01)) == 1

    def test_validation(self):
        with pytest.raises(ValueError):
            winding_number(ChainParams(1.0, 0.0))
        with pytest.raises(ValueError):
            winding_number(ChainParams(0.5, 1.0), k_samples=32)

    def test_lattice_constant_is_irrelevant(self):
        assert winding_number(ChainParams(0.5, 1.0, l=3.7)) == 1


class TestDriveCycle:
    def test_validation(self):
        with pytest.raises(ValueError):
            DriveCycle(a=0.0, omega=-1.0)
        with pytest.raises(ValueError):
            DriveCycle(a=0.0, time_samples=4)
        with pytest.raises(ValueError):
            DriveCycle(a=0.0, w=0.0)

    def test_v_at(self):
        dc = DriveCycle(a=0.5)
        assert dc.v_at(0.0) == pytest.approx(1.5)
        assert dc.v_at(0.5) == pytest.approx(-0.5)

    def test_v_samples_covers_one_period(self):
        dc = DriveCycle(a=0.0, time_samples=64)
        samples = dc.v_samples()
        assert samples.shape == (64,)
        assert samples[0] == pytest.approx(1.0)


class TestTptEvents:
    def test_band_inverting_drive(self):
        events = tpt_events(DriveCycle(a=1.0))
        assert len(events) == 2
        for event in events:
            assert event.k_star == pytest.approx(math.pi)
            assert event.transversal
        assert [e.time_fraction for e in events] == [0.25, 0.75]

    def test_gapped_drive_is_silent(self):
        assert tpt_events(DriveCycle(a=3.0)) == ()

    def test_centered_drive_touches_tangentially(self):
        events = tpt_events(DriveCycle(a=0.0))
        assert len(events) == 2
        assert not any(e.transversal for e in events)
        k_stars = sorted(e.k_star for e in events)
        assert k_stars[0] == pytest.approx(0.0)
        assert k_stars[1] == pytest.approx(math.pi)

    def test_negative_offset_closes_at_zone_center(self):
        events = tpt_events(DriveCycle(a=-1.0))
        transversal = [e for e in events if e.transversal]
        assert len(transversal) == 2
        assert all(e.k_star == pytest.approx(0.0) for e in transversal)

    def test_event_times_solve_gap_closing(self):
        dc = DriveCycle(a=0.4)
        for event in tpt_events(dc):
            v = dc.v_at(event.time_fraction)
            sign = -1.0 if event.k_star > 1.0 else 1.0
            assert v + sign * dc.w == pytest.approx(0.0, abs=1e-12)

    def test_transversal_count_against_sign_changes(self):
        # brute-force oracle: count sign flips of the gap coordinate over
        # a dense sampling of the cycle at each closing momentum
        for a in np.linspace(-2.5, 2.5, 11):
            dc = DriveCycle(a=float(a), time_samples=4096)
            vs = dc.v_samples()
            for k_star, sign in ((math.pi, -1.0), (0.0, 1.0)):
                coord = vs + sign * dc.w
                # drop exact zeros so a sample landing on the crossing
                # still registers a single sign change
                signs = np.sign(coord)
                signs = signs[signs != 0]
                flips = int(np.sum(np.diff(signs) != 0))
                got = sum(
                    1
                    for e in tpt_events(dc)
                    if e.transversal and abs(e.k_star - k_star) < 1e-9
                )
                assert got == flips


class TestThetaOfK:
    def test_band_inversion_gives_half_turn(self):
        dc = DriveCycle(a=1.0)
        assert theta_of_k(dc, math.pi) == math.pi
        assert theta_of_k(dc, -math.pi) == math.pi
        assert theta_of_k(dc, 0.0) == 0.0
        assert theta_of_k(dc, 0.37) == 0.0

    def test_tangential_touch_stays_closed(self):
        dc = DriveCycle(a=0.0)
        assert theta_of_k(dc, math.pi) == 0.0
        assert theta_of_k(dc, 0.0) == 0.0

    def test_scaled_lattice(self):
        dc = DriveCycle(a=1.0, l=2.0)
        assert theta_of_k(dc, math.pi / 2.0) == math.pi


class TestPumpProfile:
    def test_band_inverting_profile(self):
        profile = pump_profile(DriveCycle(a=1.0), 128)
        assert profile.tpt_count == 2
        at_edge = np.isclose(np.abs(profile.k_values), math.pi)
        assert np.all(profile.p_g_values[at_edge] == 0.5)
        assert np.all(profile.p_g_values[~at_edge] == 0.0)
        assert set(np.unique(profile.theta_values)) <= {0.0, math.pi}

    def test_gapped_profile_is_flat(self):
        profile = pump_profile(DriveCycle(a=3.0), 64)
        assert profile.tpt_count == 0
        assert np.all(profile.p_g_values == 0.0)
        assert np.all(profile.theta_values == 0.0)

    def test_tangential_profile_is_flat(self):
        profile = pump_profile(DriveCycle(a=0.0), 64)
        assert profile.tpt_count == 0
        assert np.all(profile.p_g_values == 0.0)

    def test_zone_center_inversion(self):
        profile = pump_profile(DriveCycle(a=-1.0), 64)
        assert profile.tpt_count == 2
        at_center = np.isclose(profile.k_values, 0.0)
        assert np.all(profile.p_g_values[at_center] == 0.5)
        assert np.all(profile.p_g_values[~at_center] == 0.0)

    def test_grid_spans_zone(self):
        profile = pump_profile(DriveCycle(a=1.0, l=2.0), 32)
        assert profile.k_values[0] == pytest.approx(-math.pi / 2.0)
        assert profile.k_values[-1] < math.pi / 2.0

    def test_validation(self):
        with pytest.raises(ValueError):
            pump_profile(DriveCycle(a=1.0), 8)

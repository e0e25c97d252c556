"""Beamsplitter output, coincidence curves, delay scans, and path alternatives."""

import math

import numpy as np
import pytest

import support
from biphoton import (
    FrequencyGrid,
    JointAmplitude,
    SpdcParams,
    TwoPhotonState,
    apply_path1_delay,
    bs_transform,
    build_antisymmetric,
    build_two_color,
    build_type2_ultrafast,
    coherence_time,
    coincidence_probability,
    default_grid,
    delay_scan,
    feynman_decomposition,
    gaussian_line,
    normalize,
    type2_joint_envelope,
    wavelength_to_angular_frequency,
)

CENTER = wavelength_to_angular_frequency(780e-9)


@pytest.fixture(scope="module")
def minus_state():
    p = SpdcParams()
    return build_type2_ultrafast(p, default_grid(p)), p


def _symmetric_pair(n_points=64):
    # f_v1h2 = +f_h1v2: the fully bunching configuration
    grid = FrequencyGrid.centered(CENTER, 1.8e14, n_points)
    g = gaussian_line(grid, CENTER, 3e13)
    f1 = np.outer(g, g).astype(np.complex128)
    return normalize(
        TwoPhotonState(JointAmplitude(grid, f1), JointAmplitude(grid, f1.copy()))
    )


def test_minus_state_has_empty_bunching_channels(minus_state):
    state, _ = minus_state
    out = bs_transform(state)
    # the pi pair phase cancels the bunched channels down to the rounding
    # of exp(-i pi) itself
    assert out.probability_both_in_3 < 1e-30
    assert out.probability_both_in_4 < 1e-30
    assert out.probability_coincidence == pytest.approx(1.0, abs=1e-9)
    assert out.total_probability == pytest.approx(1.0, abs=1e-9)

    exact = build_antisymmetric(state.f_h1v2)
    exact_out = bs_transform(exact)
    # here f_v1h2 = -f_h1v2 holds bitwise, so the cancellation is exact
    assert np.all(exact_out.b_33.values == 0)
    assert np.all(exact_out.b_44.values == 0)


def test_plus_state_never_produces_coincidences():
    out = bs_transform(_symmetric_pair())
    assert np.all(out.a_43.values == 0)
    assert np.all(out.a_34.values == 0)
    assert out.probability_coincidence == 0.0
    assert out.probability_both_in_3 == pytest.approx(0.5, abs=1e-9)
    assert out.probability_both_in_4 == pytest.approx(0.5, abs=1e-9)
    assert out.channel_probabilities()["coincidence"] == 0.0


def test_total_probability_is_conserved_for_randomized_inputs():
    rng = np.random.default_rng(20260816)
    for _ in range(1000):
        state = support.make_random_state(rng, n_points=8)
        delay = float(rng.uniform(-1e-13, 1e-13))
        out = bs_transform(state, delay)
        assert abs(out.total_probability - 1.0) < 1e-9


def test_coincidence_probability_agrees_with_full_transform():
    rng = np.random.default_rng(42)
    for _ in range(20):
        state = support.make_random_state(rng, n_points=16)
        delay = float(rng.uniform(-2e-13, 2e-13))
        direct = coincidence_probability(state, delay)
        via_output = bs_transform(state, delay).probability_coincidence
        assert direct == pytest.approx(via_output, rel=1e-12, abs=1e-12)


def test_coincidence_at_zero_delay_follows_the_pair_phase():
    # P(0) = (1 - cos phi) / 2 regardless of walk-off or bandwidth
    # asymmetry, because both alternatives share one envelope
    grid = default_grid(SpdcParams())
    for phi in (0.0, math.pi / 3.0, math.pi / 2.0, 2.2, math.pi):
        state = build_type2_ultrafast(SpdcParams(phi=phi), grid)
        assert coincidence_probability(state) == pytest.approx(
            (1.0 - math.cos(phi)) / 2.0, abs=1e-9
        )


def test_coincidence_curve_matches_gaussian_envelope(minus_state):
    # frozen oracle: P(tau) = 1/2 + (1/2) exp(-Var(w_V - w_H) tau^2 / 2)
    # with the variance from closed-form 2x2 Gaussian moments
    state, p = minus_state
    var = support.difference_variance(
        support.type2_intensity_precision(p.sigma_h, p.sigma_v, p.pump_sigma)
    )
    for tau in (0.0, 5e-15, 12e-15, 30e-15, -20e-15, 60e-15):
        expected = 0.5 + 0.5 * support.interference_envelope(tau, var)
        assert coincidence_probability(state, tau) == pytest.approx(
            expected, abs=1e-7
        )


def test_coincidence_curve_is_independent_of_walkoff():
    # central claim: the peak shape depends only on |F|^2 through
    # w_V - w_H, so source walk-off cannot degrade it
    grid = default_grid(SpdcParams())
    with_walkoff = build_type2_ultrafast(SpdcParams(t_v=400e-15), grid)
    without = build_type2_ultrafast(SpdcParams(t_v=0.0), grid)
    for tau in (0.0, 10e-15, 25e-15, -40e-15):
        assert abs(
            coincidence_probability(with_walkoff, tau)
            - coincidence_probability(without, tau)
        ) < 1e-12


def test_coincidence_curve_shifts_with_common_emission_time():
    # retiming both photons together is a global phase reshuffle that
    # leaves every coincidence rate unchanged at the same delay
    grid = default_grid(SpdcParams())
    base = build_type2_ultrafast(SpdcParams(t_h=0.0, t_v=400e-15), grid)
    shifted = build_type2_ultrafast(SpdcParams(t_h=70e-15, t_v=470e-15), grid)
    for tau in (0.0, 15e-15, -35e-15):
        assert abs(
            coincidence_probability(base, tau)
            - coincidence_probability(shifted, tau)
        ) < 1e-12


def test_arm2_delay_translates_the_delay_axis():
    grid = default_grid(SpdcParams())
    base = build_type2_ultrafast(SpdcParams(extra_group_delay_arm2=0.0), grid)
    moved = build_type2_ultrafast(SpdcParams(extra_group_delay_arm2=25e-15), grid)
    for tau in (0.0, 10e-15, -30e-15, 55e-15):
        assert coincidence_probability(moved, tau + 25e-15) == pytest.approx(
            coincidence_probability(base, tau), abs=1e-12
        )


def test_mode_overlap_scales_only_the_interference_term():
    rng = np.random.default_rng(3)
    state = support.make_random_state(rng, n_points=16)
    for tau in (0.0, 3e-14):
        p_full = coincidence_probability(state, tau, mode_overlap=1.0)
        p_none = coincidence_probability(state, tau, mode_overlap=0.0)
        p_half = coincidence_probability(state, tau, mode_overlap=0.5)
        assert p_half == pytest.approx(0.5 * (p_full + p_none), abs=1e-12)
    for bad in (-0.1, 1.1, math.nan):
        with pytest.raises(ValueError):
            coincidence_probability(state, 0.0, mode_overlap=bad)


def test_coincidence_probability_is_clamped_to_unit_interval(minus_state):
    state, _ = minus_state
    p = coincidence_probability(state, 0.0)
    assert 0.0 <= p <= 1.0
    assert p == pytest.approx(1.0, abs=1e-9)


def test_apply_path1_delay_phases_the_correct_axes():
    rng = np.random.default_rng(9)
    state = support.make_random_state(rng, n_points=8)
    tau = 7e-14
    delayed = apply_path1_delay(state, tau)
    phase = np.exp(1j * state.grid.points() * tau)
    np.testing.assert_allclose(
        delayed.f_h1v2.values, state.f_h1v2.values * phase[:, None], rtol=1e-12
    )
    np.testing.assert_allclose(
        delayed.f_v1h2.values, state.f_v1h2.values * phase[None, :], rtol=1e-12
    )
    assert apply_path1_delay(state, 0.0) is state


def test_coherence_time_matches_closed_form(minus_state):
    state, p = minus_state
    expected = support.type2_coherence_time(p.sigma_h, p.sigma_v, p.pump_sigma)
    assert coherence_time(state) == pytest.approx(expected, rel=1e-6)


def test_coherence_time_rejects_degenerate_spread():
    grid = FrequencyGrid.centered(CENTER, 1e14, 16)
    diag = np.diag(np.ones(16)).astype(np.complex128)
    state = TwoPhotonState(
        JointAmplitude(grid, diag), JointAmplitude(grid, -diag)
    )
    # all weight sits on w_V = w_H, so the difference spread vanishes
    with pytest.raises(ValueError):
        coherence_time(state)


def test_delay_scan_summary_numbers(minus_state):
    state, _ = minus_state
    tau_c = coherence_time(state)
    axis = np.linspace(-12.0 * tau_c, 12.0 * tau_c, 121)
    curve = delay_scan(state, axis)
    assert curve.background == pytest.approx(0.5, abs=1e-3)
    assert curve.extremum == pytest.approx(1.0, abs=1e-6)
    assert abs(curve.extremum_delay) <= axis[1] - axis[0]
    assert curve.visibility == pytest.approx(1.0, abs=2e-3)
    assert np.all(np.diff(curve.delays) > 0)
    assert len(curve.samples) == 121

    dip_params = SpdcParams(phi=0.0)
    dip = build_type2_ultrafast(dip_params, default_grid(dip_params))
    dip_curve = delay_scan(dip, axis)
    assert dip_curve.extremum == pytest.approx(0.0, abs=1e-6)
    assert dip_curve.visibility == pytest.approx(1.0, abs=2e-3)


def test_delay_scan_visibility_tracks_mode_overlap(minus_state):
    state, _ = minus_state
    tau_c = coherence_time(state)
    axis = np.linspace(-12.0 * tau_c, 12.0 * tau_c, 121)
    curve = delay_scan(state, axis, mode_overlap=0.75)
    assert curve.visibility == pytest.approx(0.75, abs=2e-3)


def test_delay_scan_locates_an_arm2_offset():
    params = SpdcParams(extra_group_delay_arm2=30e-15)
    state = build_type2_ultrafast(params, default_grid(params))
    axis = np.linspace(-500e-15, 500e-15, 201)
    curve = delay_scan(state, axis)
    step = axis[1] - axis[0]
    assert abs(curve.extremum_delay - 30e-15) <= 0.5 * step + 1e-18


def test_delay_scan_accepts_unsorted_input(minus_state):
    state, _ = minus_state
    tau_c = coherence_time(state)
    rng = np.random.default_rng(5)
    axis = rng.permutation(np.linspace(-12.0 * tau_c, 12.0 * tau_c, 81))
    curve = delay_scan(state, axis)
    assert np.all(np.diff(curve.delays) > 0)
    with pytest.raises(ValueError):
        curve.rates[0] = 2.0


def test_delay_scan_rejects_short_spans(minus_state):
    state, _ = minus_state
    tau_c = coherence_time(state)
    with pytest.raises(ValueError, match="10 coherence times"):
        delay_scan(state, np.linspace(-5.0 * tau_c, 12.0 * tau_c, 50))
    with pytest.raises(ValueError):
        delay_scan(state, [0.0])
    with pytest.raises(ValueError):
        delay_scan(state, [-1e-12, math.nan, 1e-12])


def test_feynman_sums_reproduce_the_coincidence_amplitudes():
    rng = np.random.default_rng(11)
    for delay in (0.0, 4e-14):
        state = support.make_random_state(rng, n_points=16)
        out = bs_transform(state, delay)
        parts = feynman_decomposition(state, delay)
        # algebraic identity, exact down to the last bit
        np.testing.assert_array_equal(
            parts.psi_1.values + parts.psi_4.values, out.a_43.values
        )
        np.testing.assert_array_equal(
            parts.psi_2.values + parts.psi_3.values, out.a_34.values
        )


def test_feynman_overlap_separates_the_two_peak_mechanisms(minus_state):
    state, _ = minus_state
    # one shared envelope: the interfering alternatives are identical
    parts = feynman_decomposition(state)
    assert parts.overlap_14 == pytest.approx(1.0, abs=1e-12)
    assert parts.overlap_23 == pytest.approx(1.0, abs=1e-12)

    # color tied to path: the alternatives are disjoint in frequency and
    # cannot interfere, even though the Bell correlations are perfect
    grid = FrequencyGrid.centered(CENTER, 2.8e14, 256)
    disjoint = build_two_color("ii", CENTER - 1.2e14, CENTER + 1.2e14, 2e13, grid)
    parts2 = feynman_decomposition(disjoint)
    assert parts2.overlap_14 < 1e-9
    assert parts2.overlap_23 < 1e-9


def test_feynman_overlap_of_vanishing_alternative_is_zero():
    grid = FrequencyGrid.centered(CENTER, 1.8e14, 32)
    g = gaussian_line(grid, CENTER, 3e13)
    f1 = np.outer(g, g).astype(np.complex128)
    state = normalize(
        TwoPhotonState(
            JointAmplitude(grid, f1), JointAmplitude(grid, np.zeros_like(f1))
        )
    )
    parts = feynman_decomposition(state)
    assert parts.overlap_14 == 0.0
    assert parts.overlap_23 == 0.0

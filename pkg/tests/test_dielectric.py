"""Dielectric models, grids, the dispersion integral, and the sum rule."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from causlab import (
    FrequencyGrid,
    OscillatorSet,
    Resonance,
    Tabulated,
    Vacuum,
    eval_epsilon,
    kk_reconstruct,
    kk_roundtrip_error,
    passivity_check,
    sum_rule,
)
from causlab.errors import (
    PoleEvaluationError,
    PVAlignmentError,
    TailDominanceError,
    UnsupportedModelError,
)

from conftest import BROAD, INVERTED, PASSIVE, STRONG, UNDAMPED, VACUUM

# hypothesis building blocks: physically sane single lines
strengths = st.floats(min_value=-1.0, max_value=1.0).filter(lambda f: abs(f) > 1e-3)
frequencies = st.floats(min_value=0.2, max_value=5.0)
dampings = st.floats(min_value=0.01, max_value=0.8)
plasmas = st.floats(min_value=0.3, max_value=2.5)


def single_line(f, wp, W, g):
    return OscillatorSet(wp, (Resonance(f, W, g),))


# ---------------------------------------------------------------- evaluation


def test_vacuum_is_unity_everywhere():
    assert eval_epsilon(VACUUM, 3.0 + 2.0j) == 1.0 + 0.0j
    assert eval_epsilon(VACUUM, 0.0) == 1.0 + 0.0j
    out = eval_epsilon(VACUUM, np.array([0.0, 1.0, 2.0]) + 0j)
    assert np.all(out == 1.0)


def test_static_values_of_the_test_lines():
    # eps(0) = 1 + f wp^2 / W^2, directly from the rational form
    assert eval_epsilon(UNDAMPED, 0.0) == pytest.approx(1.25, abs=1e-15)
    assert eval_epsilon(INVERTED, 0.0) == pytest.approx(-3.0, abs=1e-12)


@given(f=strengths, wp=plasmas, W=frequencies, g=dampings,
       omega=st.floats(min_value=0.0, max_value=8.0))
@settings(max_examples=60, deadline=None)
def test_conjugate_symmetry_on_the_real_axis(f, wp, W, g, omega):
    model = single_line(f, wp, W, g)
    plus = eval_epsilon(model, complex(omega, 0.0))
    minus = eval_epsilon(model, complex(-omega, 0.0))
    assert abs(minus - np.conj(plus)) <= 1e-14 * abs(plus)


def test_high_frequency_limit_is_vacuum():
    for model in (PASSIVE, INVERTED, STRONG):
        top = max(r.frequency for r in model.resonances)
        assert abs(eval_epsilon(model, 1j * 1e4 * top) - 1.0) < 1e-6
        # and the approach is monotone once above the resonances
        rs = np.array([10.0, 30.0, 100.0, 300.0, 1000.0]) * top
        gaps = [abs(eval_epsilon(model, 1j * r) - 1.0) for r in rs]
        assert all(a > b for a, b in zip(gaps, gaps[1:]))


@given(W=frequencies, g=dampings)
@settings(max_examples=40, deadline=None)
def test_damped_poles_sit_below_the_real_axis(W, g):
    # the rational denominator W^2 - 2 i zeta g - zeta^2 vanishes at
    # zeta = -i g +/- sqrt(W^2 - g^2); both roots must have Im < 0
    disc = W * W - g * g
    root = math.sqrt(disc) if disc >= 0 else 1j * math.sqrt(-disc)
    for sign in (+1, -1):
        zeta = -1j * g + sign * root
        assert zeta.imag < 0


def test_pole_evaluation_is_refused():
    # undamped line: eps has a real pole exactly at W
    with pytest.raises(PoleEvaluationError):
        eval_epsilon(UNDAMPED, 2.0 + 0.0j)
    # and the damped pole at -i g + sqrt(W^2 - g^2)
    pole = -0.1j + math.sqrt(4.0 - 0.01)
    with pytest.raises(PoleEvaluationError):
        eval_epsilon(PASSIVE, pole)


# ------------------------------------------------------------------- tables


def test_table_round_trip(tmp_path):
    omegas = np.linspace(0.0, 4.0, 41)
    values = np.asarray(eval_epsilon(PASSIVE, omegas + 0j))
    table = Tabulated(omegas, values)
    path = tmp_path / "eps.csv"
    table.to_csv(path)
    back = Tabulated.from_csv(path)
    assert np.array_equal(back.omegas, table.omegas)
    assert np.array_equal(back.values, table.values)


def test_table_validation():
    with pytest.raises(ValueError):
        Tabulated(np.array([0.0]), np.array([1.0 + 0j]))  # too short
    with pytest.raises(ValueError):
        Tabulated(np.array([0.0, 0.0, 1.0]), np.ones(3, dtype=complex))
    with pytest.raises(ValueError):
        Tabulated(np.array([-1.0, 1.0]), np.ones(2, dtype=complex))


def test_table_refuses_complex_and_out_of_range_queries():
    table = Tabulated(np.linspace(0.0, 3.0, 31), np.full(31, 2.0 + 0.1j))
    with pytest.raises(UnsupportedModelError):
        eval_epsilon(table, 1.0 + 0.5j)
    with pytest.raises(ValueError):
        eval_epsilon(table, 5.0 + 0.0j)
    # negative frequencies come from conjugate symmetry
    assert eval_epsilon(table, -1.0 + 0.0j) == np.conj(eval_epsilon(table, 1.0 + 0.0j))


def test_table_grid_spans_the_table():
    table = Tabulated(np.linspace(0.0, 3.0, 31), np.full(31, 2.0 + 0.1j))
    grid = FrequencyGrid.for_model(table)
    assert grid.omega_max == pytest.approx(3.0)


# -------------------------------------------------------------------- grids


def test_grid_invariants():
    grid = FrequencyGrid.uniform(10.0, 101)
    assert grid.spacing == pytest.approx(0.1)
    assert grid.omegas[0] == 0.0
    with pytest.raises(ValueError):
        FrequencyGrid(np.array([0.0, 1.0, 3.0]))  # non-uniform
    with pytest.raises(ValueError):
        FrequencyGrid(np.array([0.5, 1.0, 1.5]))  # does not start at 0
    with pytest.raises(ValueError):
        FrequencyGrid.uniform(-1.0, 10)


def test_default_grid_follows_the_sampling_rules():
    grid = FrequencyGrid.for_model(PASSIVE)
    top = 2.0
    assert grid.omega_max == pytest.approx(20.0 * top)
    assert grid.spacing <= 0.1 / 16.0 + 1e-12


# ----------------------------------------------------------------- sum rule


def test_sum_rule_values():
    assert sum_rule(VACUUM) == 0.0
    assert sum_rule(PASSIVE) == pytest.approx(1.0, rel=1e-4)
    assert sum_rule(INVERTED) == pytest.approx(-4.0, rel=1e-4)
    # an undamped line is a delta in omega*Im eps; its weight is exact
    assert sum_rule(UNDAMPED) == pytest.approx(1.0, rel=1e-12)


def test_sum_rule_additivity():
    a = OscillatorSet(1.3, (Resonance(0.7, 1.2, 0.15),))
    b = OscillatorSet(1.3, (Resonance(-0.2, 2.6, 0.3),))
    both = OscillatorSet(1.3, (Resonance(0.7, 1.2, 0.15), Resonance(-0.2, 2.6, 0.3)))
    assert sum_rule(both) == pytest.approx(sum_rule(a) + sum_rule(b), rel=1e-6)


def test_sum_rule_tail_guard_fires_on_a_short_grid():
    with pytest.raises(TailDominanceError):
        sum_rule(PASSIVE, FrequencyGrid.uniform(3.0, 301))


def test_sum_rule_tail_guard_fires_on_a_truncated_table():
    omegas = np.linspace(0.0, 3.0, 301)
    values = np.asarray(eval_epsilon(PASSIVE, omegas + 0j))
    with pytest.raises(TailDominanceError):
        sum_rule(Tabulated(omegas, values))


# ---------------------------------------------------------------- passivity


def test_passivity_of_the_test_models():
    assert passivity_check(VACUUM)
    assert passivity_check(PASSIVE)
    assert passivity_check(STRONG)
    result = passivity_check(INVERTED)
    assert not result
    # the offender is the gain line itself: omega*Im eps at the line
    # centre is f*wp^2*Omega^2/(2*gamma*Omega) = -20 exactly
    assert result.worst_omega == pytest.approx(1.0, abs=1e-6)
    assert result.worst_product == pytest.approx(-20.0, rel=1e-9)


@given(f=st.floats(min_value=0.01, max_value=1.0), wp=plasmas,
       W=frequencies, g=dampings)
@settings(max_examples=40, deadline=None)
def test_positive_strength_is_passive(f, wp, W, g):
    assert passivity_check(single_line(f, wp, W, g))


# ------------------------------------------------------- dispersion integral


def test_zero_spectrum_reconstructs_vacuum():
    grid = FrequencyGrid.uniform(10.0, 201)
    assert kk_reconstruct(np.zeros(201), grid, 2.0 + 0.0j) == 1.0 + 0.0j
    assert kk_reconstruct(np.zeros(201), grid, 3.0j) == 1.0 + 0.0j


def _imag_spectrum(model, grid):
    return grid.omegas * np.asarray(eval_epsilon(model, grid.omegas + 0j)).imag


def test_real_axis_reconstruction_matches_closed_form():
    grid = FrequencyGrid.for_model(BROAD)
    g = _imag_spectrum(BROAD, grid)
    omega = grid.omegas[np.argmin(np.abs(grid.omegas - 1.0))]
    rebuilt = kk_reconstruct(g, grid, complex(omega, 0.0), tail_model=BROAD)
    direct = eval_epsilon(BROAD, complex(omega, 0.0))
    assert abs(rebuilt - direct) / abs(direct) < 1e-3


def test_off_axis_reconstruction_matches_closed_form():
    grid = FrequencyGrid.for_model(BROAD)
    g = _imag_spectrum(BROAD, grid)
    rebuilt = kk_reconstruct(g, grid, 3.0j, tail_model=BROAD)
    direct = eval_epsilon(BROAD, 3.0j)
    assert abs(rebuilt - direct) / abs(direct) < 1e-4


def test_reconstruction_requires_pv_alignment():
    grid = FrequencyGrid.uniform(40.0, 6401)
    g = _imag_spectrum(PASSIVE, grid)
    # a real query between samples cannot symmetrize the principal value
    with pytest.raises(PVAlignmentError):
        kk_reconstruct(g, grid, complex(grid.omegas[100] + 0.25 * grid.spacing, 0.0),
                       tail_model=PASSIVE)


def test_round_trip_error_is_tiny_for_passive_models():
    for model in (PASSIVE, BROAD, STRONG):
        worst, _ = kk_roundtrip_error(model)
        assert worst < 1e-3


def test_round_trip_error_does_not_flag_the_gain_medium():
    """The dispersion relation tests analyticity of eps, nothing more.

    The inverted medium keeps every pole of eps in the lower half
    plane, so its eps satisfies the same integral identity as a passive
    medium; its pathology (an upper-half-plane zero of eps, negative
    spectral weight) is invisible here.  This is the reason the
    causality assessment cannot rely on this check alone.
    """
    worst, _ = kk_roundtrip_error(INVERTED)
    assert worst < 1e-4

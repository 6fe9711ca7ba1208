"""Slab transmission/reflection: closed form, transfer matrix, spectra."""

from __future__ import annotations

import math
import warnings

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from causlab import FrequencyGrid, OscillatorSet, Resonance
from causlab.errors import BranchCrossingWarning, DenominatorZeroError, PhaseUnwrapError
from causlab.refraction import eval_eta
from causlab.slab import (
    SlabConfig,
    evaluate_spectrum,
    group_delay,
    reflection,
    transfer_matrix,
    transmission,
    transmission_via_transfer_matrix,
    write_spectrum_csv,
)

from conftest import INVERTED, PASSIVE, STRONG, UNDAMPED, VACUUM, make_etalon


def test_vacuum_is_transparent():
    slab = SlabConfig(VACUUM, 3.0)
    assert transmission(slab, 2.5 + 0j) == 1.0 + 0.0j
    assert reflection(slab, 2.5 + 0j) == 0.0 + 0.0j


def test_zero_thickness_is_transparent():
    assert transmission(SlabConfig(PASSIVE, 0.0), 1.3 + 0j) == 1.0 + 0.0j


def test_negative_thickness_is_rejected():
    with pytest.raises(ValueError):
        SlabConfig(PASSIVE, -1.0)


def test_half_wave_plates_transmit_perfectly(etalon):
    # w * eta = m pi  =>  tau = (-1)^m e^{-i w}; eta = 2, L = 1
    slab = SlabConfig(etalon, 1.0)
    for m in (1, 2, 3, 4):
        w = m * math.pi / 2.0
        expect = (-1.0) ** m * np.exp(-1j * w)
        assert abs(transmission(slab, w + 0j) - expect) < 1e-12


def test_quarter_wave_reflection(etalon):
    slab = SlabConfig(etalon, 1.0)
    rho = reflection(slab, math.pi / 4.0 + 0j)
    tau = transmission(slab, math.pi / 4.0 + 0j)
    # lossless eta = 2: rho = -(eta^2-1)/(eta^2+1) = -3/5, P = 1 - rho^2
    assert rho == pytest.approx(-0.6, abs=1e-12)
    assert abs(tau) ** 2 == pytest.approx(0.64, abs=1e-12)


def test_transmission_respects_real_signal_symmetry():
    for model, omega in ((PASSIVE, 1.7), (STRONG, 1.5), (INVERTED, 0.9)):
        slab = SlabConfig(model, 2.0)
        assert transmission(slab, -omega + 0j) == np.conj(transmission(slab, omega + 0j))


def test_lossless_slab_conserves_energy():
    grid = FrequencyGrid.uniform(8.0, 811)
    slab = SlabConfig(UNDAMPED, 1.0)
    tau = transmission(slab, grid.omegas + 0j)
    rho = reflection(slab, grid.omegas + 0j)
    total = np.abs(tau) ** 2 + np.abs(rho) ** 2
    assert np.max(np.abs(total - 1.0)) < 1e-9  # measured 1.2e-15


def test_absorbing_slabs_never_exceed_unit_energy():
    grid = FrequencyGrid.uniform(8.0, 811)
    for model in (PASSIVE, STRONG):
        response = evaluate_spectrum(SlabConfig(model, 1.0), grid)
        total = response.power + np.abs(response.rho) ** 2
        assert np.nanmax(total) <= 1.0 + 1e-9


def test_weak_line_approaches_vacuum():
    grid = FrequencyGrid.uniform(8.0, 811)
    devs = []
    for f in (1e-4, 1e-5):
        model = OscillatorSet(1.0, (Resonance(f, 2.0, 0.1),))
        tau = transmission(SlabConfig(model, 1.0), grid.omegas + 0j)
        devs.append(np.max(np.abs(tau - 1.0)))
    assert devs[0] < 1e-3  # measured 2.5e-4
    assert devs[1] < 0.2 * devs[0]  # deviation scales linearly with strength


def test_slab_pole_is_guarded():
    # a zero of the transmission denominator for the gain slab (L = 1)
    slab = SlabConfig(INVERTED, 1.0)
    with pytest.raises(DenominatorZeroError):
        transmission(slab, 1.229661276856399 + 0.02083371813036608j)


# ---------------------------------------------------------- transfer matrix


def test_transfer_matrix_routes_agree_at_spot_points():
    cases = (
        (PASSIVE, 1.3 + 0.0j, 2.0),
        (STRONG, 1.5 + 0.0j, 2.0),
        (INVERTED, 0.7 + 0.0j, 1.0),
        (PASSIVE, 1.1 + 0.7j, 2.0),
    )
    for model, zeta, L in cases:
        slab = SlabConfig(model, L)
        tau_mat, rho_mat = transmission_via_transfer_matrix(slab, zeta)
        assert abs(transmission(slab, zeta) - tau_mat) < 1e-12
        assert abs(reflection(slab, zeta) - rho_mat) < 1e-12


def test_transfer_matrix_is_unimodular():
    for model, omega, L in ((PASSIVE, 1.3, 2.0), (STRONG, 2.7, 1.0), (INVERTED, 0.5, 1.5)):
        M = transfer_matrix(SlabConfig(model, L), omega + 0j)
        assert abs(np.linalg.det(M) - 1.0) < 1e-12


@given(
    f=st.floats(min_value=-0.9, max_value=0.9).filter(lambda v: abs(v) > 1e-3),
    wp=st.floats(min_value=0.3, max_value=1.5),
    W=st.floats(min_value=0.5, max_value=4.0),
    g=st.floats(min_value=0.1, max_value=0.8),
    omega=st.floats(min_value=0.2, max_value=5.0),
    L=st.floats(min_value=0.0, max_value=1.5),
)
@settings(max_examples=50, deadline=None)
def test_routes_agree_for_translucent_slabs(f, wp, W, g, omega, L):
    """Closed form vs transfer matrix on random translucent slabs.

    The matrix route loses ~e^{2d} in relative accuracy at optical
    depth d, so the property restricts itself to d < 3; the opaque
    regime is exercised by the fixed spot checks and the wide sweep in
    the acceptance tests.
    """
    model = OscillatorSet(wp, (Resonance(f, W, g),))
    slab = SlabConfig(model, L)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BranchCrossingWarning)
        eta = eval_eta(model, omega + 0j)
    assume(abs((omega * eta * L).imag) < 3.0)
    tau = transmission(slab, omega + 0j)
    tau_mat, rho_mat = transmission_via_transfer_matrix(slab, omega + 0j)
    assert abs(tau - tau_mat) <= 1e-10 * max(1.0, abs(tau))
    assert abs(reflection(slab, omega + 0j) - rho_mat) <= 1e-10


# ----------------------------------------------------------------- spectra


def test_vacuum_spectrum_is_trivial():
    grid = FrequencyGrid.uniform(5.0, 101)
    response = evaluate_spectrum(SlabConfig(VACUUM, 2.0), grid)
    # rho vanishes identically; tau is 1 up to one sinc-vs-sin ulp
    assert np.all(response.rho == 0.0 + 0.0j)
    assert np.max(np.abs(response.tau - 1.0)) < 1e-12
    assert np.max(np.abs(response.power - 1.0)) < 1e-12
    assert np.max(np.abs(response.phase)) < 1e-12
    assert np.max(np.abs(response.delay)) < 1e-9
    assert response.flags == {}


def test_etalon_fringe_extrema(etalon):
    # FSR = pi/(eta L) = pi/16 spans exactly 256 samples of this grid,
    # so fringe maxima (P = 1) and minima (P = 0.64) land on samples
    grid = FrequencyGrid.uniform(2.0 * math.pi, 8193)
    response = evaluate_spectrum(SlabConfig(etalon, 8.0), grid)
    assert np.max(response.power) == pytest.approx(1.0, abs=1e-12)
    assert np.min(response.power) == pytest.approx(0.64, abs=1e-9)
    assert response.flags == {}


def test_etalon_mean_delay_over_one_fringe(etalon):
    """Averaged over a full fringe, the group delay is (eta - 1) L."""
    grid = FrequencyGrid.uniform(2.0 * math.pi, 8193)
    response = evaluate_spectrum(SlabConfig(etalon, 8.0), grid)
    k0, span = 4096, 256  # one free spectral range
    want = (2.0 - 1.0) * 8.0
    phase_slope = (response.phase[k0 + span] - response.phase[k0]) / (
        span * grid.spacing
    )
    assert phase_slope == pytest.approx(want, abs=1e-12)
    assert np.mean(response.delay[k0 : k0 + span]) == pytest.approx(want, abs=1e-9)


def test_delay_matches_log_derivative_of_tau():
    grid = FrequencyGrid.uniform(8.0, 8001)
    slab = SlabConfig(PASSIVE, 2.0)
    response = evaluate_spectrum(slab, grid)
    k, h = 6000, 1e-6
    omega = grid.omegas[k]
    lo = transmission(slab, omega - h + 0j)
    hi = transmission(slab, omega + h + 0j)
    independent = (np.log(hi) - np.log(lo)).imag / (2.0 * h)
    assert response.delay[k] == pytest.approx(independent, abs=1e-6)


def test_gain_slab_advances_the_envelope():
    grid = FrequencyGrid.uniform(3.0, 6001)
    slab = SlabConfig(INVERTED, 1.0)
    response = evaluate_spectrum(slab, grid)
    delay = group_delay(response, 1.0)
    assert delay < 0.0
    h = 1e-6
    independent = (
        np.log(transmission(slab, 1.0 + h + 0j))
        - np.log(transmission(slab, 1.0 - h + 0j))
    ).imag / (2.0 * h)
    assert delay == pytest.approx(independent, abs=1e-6)  # measured -25.4346


def test_group_delay_requires_interior_frequency():
    grid = FrequencyGrid.uniform(3.0, 301)
    response = evaluate_spectrum(SlabConfig(PASSIVE, 1.0), grid)
    with pytest.raises(ValueError):
        group_delay(response, 0.0)
    with pytest.raises(ValueError):
        group_delay(response, 3.0)


def test_unresolved_phase_steps_are_refused():
    with pytest.raises(PhaseUnwrapError):
        evaluate_spectrum(SlabConfig(PASSIVE, 5.0), FrequencyGrid.uniform(8.0, 21))


def test_literal_variant_breaks_zero_thickness_normalization():
    """The textbook transmission form is kept verbatim for comparison.

    It lacks the vacuum-transit normalization, so at L = 0 it returns
    2 eta / (1 + eta^2) instead of 1 -- that discrepancy is the reason
    the field-matching form is the default.
    """
    slab = SlabConfig(PASSIVE, 0.0)
    eta = eval_eta(PASSIVE, 1.3 + 0j)
    literal = transmission(slab, 1.3 + 0j, literal_variant=True)
    assert abs(literal - 2.0 * eta / (1.0 + eta**2)) < 1e-12
    assert literal != 1.0 + 0.0j


def test_spectrum_csv_round_trip(tmp_path):
    grid = FrequencyGrid.uniform(3.0, 301)
    response = evaluate_spectrum(SlabConfig(STRONG, 1.0), grid)
    out = tmp_path / "spectrum.csv"
    write_spectrum_csv(response, out)
    header = out.read_text().splitlines()[0]
    assert header == "omega,re_tau,im_tau,re_rho,im_rho,P,theta,t_delay"
    table = np.genfromtxt(out, delimiter=",", names=True)
    assert table.shape[0] == grid.size
    np.testing.assert_array_equal(table["P"], response.power)
    np.testing.assert_array_equal(table["t_delay"], response.delay)

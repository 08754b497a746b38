"""Smoke tests for the Python bindings against known operating points."""

import math

import numpy as np
import pytest

import cavitytrio as ct


def trio(kappa1, gain, kappa3, j1, j2):
    return ct.ResonatorChain(
        resonators=[
            ct.Resonator(0.0, ct.Role.Passive, kappa1, kappa1 / 2),
            ct.Resonator(0.0, ct.Role.Active, gain),
            ct.Resonator(0.0, ct.Role.Passive, kappa3),
        ],
        couplings_mhz=[j1, j2],
        kappa_ex_mhz=kappa1 / 2,
    )


def test_complete_transparency_at_the_tuned_coupling():
    chain = trio(10.0, 0.2, 5.0, 2.0, 1.0)
    sol = ct.steady_state_exact(chain, 0.2, ct.PumpDrive(0.0, 1.0))
    assert abs(sol.amplitudes[0]) == 0.0
    assert abs(sol.transmission) == pytest.approx(1.0, abs=1e-12)
    a1 = ct.steady_state_continued_fraction(chain, 0.2, ct.PumpDrive(0.0, 1.0))
    assert abs(a1) == 0.0


def test_dark_state_photon_ratio():
    chain = trio(10.0, 0.2, 5.0, 2.0, 1.0)
    dark = ct.dark_state(chain, 0.2, ct.PumpDrive(0.0, 1.0))
    assert abs(dark[1]) ** 2 / abs(dark[2]) ** 2 == pytest.approx(25.0, rel=1e-12)


def test_spectrum_returns_complex_array():
    chain = trio(10.0, 0.2, 5.0, 2.0, 1.0)
    grid = np.linspace(-2.0, 2.0, 101)
    eps = ct.susceptibility_spectrum(chain, 0.2, 5.0, list(grid))
    assert len(eps) == 101
    assert abs(eps[50]) == 0.0  # window center


def test_stability_threshold_matches_closed_form():
    chain = trio(20.0, 0.06, 6.0, 1.0, 0.6)
    th = ct.closed_form_thresholds(20.0, 0.06, 6.0, j1_mhz=1.0)
    assert th.min_stable_j2_mhz == pytest.approx(math.sqrt(0.06), rel=1e-12)
    below = ct.classify_stability(trio(20.0, 0.06, 6.0, 1.0, 0.2), 0.06, ct.PumpDrive(0.0, 1.0))
    above = ct.classify_stability(chain, 0.06, ct.PumpDrive(0.0, 1.0))
    assert not below.stable
    assert above.stable


def test_constant_gain_tuning_is_exact():
    chain = trio(10.0, 0.2, 5.0, 2.0, 1.3)
    result = ct.find_transparency_j2(
        chain, ct.ConstantGain(0.2), ct.PumpDrive(0.0, 1.0), 0.5, 2.0, 1e-10
    )
    assert result.value_mhz == pytest.approx(1.0, rel=1e-12)
    assert result.residual < 1e-12


def test_evolution_reaches_the_steady_state():
    chain = trio(10.0, 0.2, 5.0, 2.0, 1.0)
    controls = ct.EvolveControls()
    controls.steady_window_us = 10.0
    traj = ct.evolve(chain, ct.ConstantGain(0.2), ct.PumpDrive(0.0, 1.0), 60.0, controls)
    assert traj.stabilized_at_us is not None
    assert isinstance(traj.amplitudes[0], np.ndarray)
    photons = ct.final_photon_numbers(traj)
    assert photons[1] == pytest.approx(2.5, rel=1e-6)  # 2 kex (eps/J1)^2


def test_saturating_gain_settles_to_the_reported_rate():
    chain = trio(10.0, 0.2, 5.0, 20.0, 1.0)
    fp = ct.saturated_fixed_point(chain, ct.SaturatingGain(0.2, 1e8), ct.PumpDrive(0.0, 1e4))
    assert fp.g2s_mhz == pytest.approx(0.195, abs=0.005)


def test_noise_floor_power():
    assert ct.noise_floor_power(1550e-9) == pytest.approx(1.28e-19, rel=0.01)


def test_errors_surface_as_python_exceptions():
    with pytest.raises(ct.CavityTrioError):
        ct.transparency_condition_general(1.0, 1.0, 0.0, 5.0)
    with pytest.raises(ct.CavityTrioError):
        ct.ResonatorChain(
            resonators=[ct.Resonator(0.0, ct.Role.Passive, 10.0, 5.0)],
            couplings_mhz=[1.0],
            kappa_ex_mhz=5.0,
        )

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from hyperdistill.timing import (
    DelaySample,
    DelaySamples,
    Peak,
    TimingModel,
    coincidence_count,
    delay_histogram,
    empirical_fidelities,
    et_fidelity_vs_window,
    peak_populations,
    simulate_timetags,
    window_mass,
    write_histogram_csv,
)

DT = 2.6e-9
MODEL = TimingModel()


@pytest.fixture(scope="module")
def samples():
    return simulate_timetags(MODEL, 1_000_000, seed=20211)


def test_peak_populations():
    central, side = peak_populations()
    assert central == 0.5 and side == 0.25
    assert central / side == 2


def test_sigma_from_fwhm():
    assert MODEL.sigma == pytest.approx(339.7e-12, abs=0.05e-12)


def test_model_ordering_validation():
    with pytest.raises(ValueError):
        TimingModel(delta_t=2e-9, jitter_fwhm=800e-12)
    with pytest.raises(ValueError):
        TimingModel(delta_t=2.6e-9, pump_coherence=5e-9)
    with pytest.raises(ValueError):
        TimingModel(delta_t=-1.0)


def test_narrow_window():
    f = et_fidelity_vs_window(MODEL, DT / 4)
    assert f.phi_plus >= 0.999
    ref, _ = oracles.et_fidelities_quad(DT, 800e-12, DT / 4)
    assert f.phi_plus == pytest.approx(ref, abs=1e-12)


def test_wide_window_asymptote():
    f = et_fidelity_vs_window(MODEL, 100 * DT)
    np.testing.assert_allclose(f[:3], (0.5, 0.25, 0.25), atol=1e-9)


def test_window_two_delta_t_against_quadrature():
    f = et_fidelity_vs_window(MODEL, 2 * DT)
    # frozen from the quadrature oracle: side peaks half inside -> 2/3
    assert f.phi_plus == pytest.approx(0.6666666666666623, abs=1e-9)
    assert 0.5 < f.phi_plus < 1


@pytest.mark.parametrize("w", [0.1e-9, 0.65e-9, 1.3e-9, 2.6e-9, 4e-9, 7e-9])
def test_against_quadrature(w):
    f = et_fidelity_vs_window(MODEL, w)
    ref_c, ref_s = oracles.et_fidelities_quad(DT, 800e-12, w)
    assert f.phi_plus == pytest.approx(ref_c, abs=1e-10)
    assert f.psi_plus == pytest.approx(ref_s, abs=1e-10)


def test_limits():
    assert et_fidelity_vs_window(MODEL, 1e-15).phi_plus == pytest.approx(1, abs=1e-9)
    assert et_fidelity_vs_window(MODEL, 1e-3).phi_plus == pytest.approx(0.5, abs=1e-9)


def test_rejects_non_positive_window():
    for w in (0.0, -1e-9):
        with pytest.raises(ValueError):
            et_fidelity_vs_window(MODEL, w)
        with pytest.raises(ValueError):
            coincidence_count([], w)


def test_monotone_decreasing():
    ws = np.geomspace(1e-11, 3e-8, 400)
    fs = [et_fidelity_vs_window(MODEL, w) for w in ws]
    f = [x.phi_plus for x in fs]
    assert all(b <= a for a, b in zip(f, f[1:]))
    # near 1 the decrease is below double resolution; the side share stays resolvable
    # and strictly grows until it saturates at 1/4 in double precision
    side = [x.psi_plus for x, w in zip(fs, ws) if w < 8e-9]
    assert all(b > a for a, b in zip(side, side[1:]))


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-12, 1e-6))
def test_normalised_and_symmetric(w):
    f = et_fidelity_vs_window(MODEL, w)
    assert f.psi_plus == f.psi_minus
    assert f.phi_minus == 0
    assert f.phi_plus + f.psi_plus + f.psi_minus == pytest.approx(1, abs=1e-12)


def test_phase_error_moves_weight_to_phi_minus():
    m = TimingModel(phase_error=0.4)
    f = et_fidelity_vs_window(m, 1e-9)
    f0 = et_fidelity_vs_window(MODEL, 1e-9)
    assert f.phi_minus == pytest.approx(f0.phi_plus * math.sin(0.2) ** 2, abs=1e-15)
    assert sum(f) == pytest.approx(1, abs=1e-12)
    assert f.as_weights()[1] == f.phi_minus


def test_window_mass_symmetry():
    assert window_mass(DT, MODEL.sigma, 3e-9) == pytest.approx(window_mass(-DT, MODEL.sigma, 3e-9), abs=1e-16)


def test_simulation_reproducible():
    a = simulate_timetags(MODEL, 1000, seed=3)
    assert a == simulate_timetags(MODEL, 1000, seed=3)
    assert not a == simulate_timetags(MODEL, 1000, seed=4)


def test_simulation_shard_and_jobs_independent():
    a = simulate_timetags(MODEL, 600_000, seed=5)
    b = simulate_timetags(MODEL, 600_000, seed=5, n_jobs=3)
    assert a == b


def test_simulation_populations(samples):
    n = len(samples)
    counts = np.bincount(samples.peak, minlength=3)
    for c, p in zip(counts, (0.5, 0.25, 0.25)):
        assert abs(c - n * p) <= 3 * math.sqrt(n * p * (1 - p))


def test_histogram_peaks(samples, tmp_path):
    edges, counts = delay_histogram(samples, 100e-12, span=5e-9)
    centers = (edges[:-1] + edges[1:]) / 2
    peaks = [c for i, c in enumerate(centers[1:-1], 1) if counts[i] >= counts[i - 1] and counts[i] >= counts[i + 1] and counts[i] > counts.max() / 4]
    assert len(peaks) == 3
    np.testing.assert_allclose(sorted(peaks), [-DT, 0, DT], atol=0.1e-9)
    path = tmp_path / "h.csv"
    write_histogram_csv(path, edges, counts)
    lines = path.read_text().splitlines()
    assert lines[0] == "bin_start_s,bin_end_s,count"
    assert len(lines) == len(counts) + 1


@pytest.mark.parametrize("w", [0.5e-9, 2.6e-9, 10e-9])
def test_monte_carlo_vs_analytic(samples, w):
    kept, _ = coincidence_count(samples, w)
    emp = empirical_fidelities(samples, w)
    ana = et_fidelity_vs_window(MODEL, w)
    sd = math.sqrt(ana.phi_plus * (1 - ana.phi_plus) / kept)
    assert abs(emp.phi_plus - ana.phi_plus) <= 3 * sd + 1e-12


def test_coincidence_count_by_peak_at_delta_t(samples):
    n = len(samples)
    kept, by_peak = coincidence_count(samples, DT)
    assert kept == by_peak.sum()
    for peak, pop, mu in [(0, 0.5, 0.0), (1, 0.25, -DT), (2, 0.25, DT)]:
        p = pop * float(window_mass(mu, MODEL.sigma, DT))
        assert abs(by_peak[peak] - n * p) <= 3 * math.sqrt(n * p * (1 - p))


def test_coincidence_count_trivial():
    kept, by_peak = coincidence_count([], 1e-9)
    assert kept == 0 and list(by_peak) == [0, 0, 0]
    central = [DelaySample(d, Peak.CENTRAL) for d in np.linspace(-1e-9, 1e-9, 17)]
    kept, by_peak = coincidence_count(central, 1.0)
    assert kept == 17 and list(by_peak) == [17, 0, 0]


def test_delay_samples_list_round_trip():
    s = simulate_timetags(MODEL, 10, seed=1)
    assert DelaySamples.from_list(list(s)) == s
    assert isinstance(s[0].peak, Peak)

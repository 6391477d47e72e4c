import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cpdq_lab import (
    ConvergenceError,
    DispersionParams,
    Grid1D,
    Potential,
    WaveFunction,
    appendix_a_consistency,
    cr_bound_check,
    dispersion_checks,
    fisher_metrics,
    local_wkb_profile,
    natural_units,
    solve_tise,
    variational_ground_state,
)
from cpdq_lab.quantum import UnboundStateWarning, bohm_adiabaticity_report


@pytest.fixture(scope="module")
def harmonic_solution(consts):
    return solve_tise(Potential.harmonic(), Grid1D(-10.0, 10.0, 2000), 6, consts)


@pytest.fixture(scope="module")
def well_solution(consts):
    return solve_tise(Potential.infinite_well(1.0), Grid1D(0.0, 1.0, 2000),
                      5, consts)


def test_grid_invariants():
    with pytest.raises(ValueError):
        Grid1D(0.0, 1.0, 32)
    with pytest.raises(ValueError):
        Grid1D(1.0, 0.0, 128)
    g = Grid1D(0.0, 1.0, 101)
    assert g.h == pytest.approx(0.01)


class TestEigensolver:
    def test_harmonic_ladder(self, harmonic_solution):
        # oracle: E_n = (n + 1/2) * hbar * omega
        for n in range(6):
            assert harmonic_solution.energies[n] == pytest.approx(
                n + 0.5, rel=1e-3)

    def test_well_ground(self, well_solution):
        # oracle: E_n = n^2 pi^2 hbar^2 / (2 m L^2)
        assert well_solution.energies[0] == pytest.approx(
            math.pi**2 / 2.0, rel=1e-3)

    def test_free_particle_large_box_limit(self, consts):
        pot = Potential.free()
        with pytest.warns(UnboundStateWarning):
            e_small = solve_tise(pot, Grid1D(-10, 10, 512), 1,
                                 consts).energies[0]
        with pytest.warns(UnboundStateWarning):
            e_large = solve_tise(pot, Grid1D(-40, 40, 2048), 1,
                                 consts).energies[0]
        assert 0 < e_large < e_small

    def test_normalization_and_edges(self, harmonic_solution):
        for s in harmonic_solution.states:
            assert s.norm_sq() == pytest.approx(1.0, abs=1e-10)
            peak = np.abs(s.values).max()
            assert abs(s.values[0]) <= 1e-8 * peak
            assert abs(s.values[-1]) <= 1e-8 * peak

    def test_orthonormality(self, harmonic_solution):
        h = harmonic_solution.states[0].grid.h
        vecs = np.stack([s.values.real for s in harmonic_solution.states])
        gram = vecs @ vecs.T * h
        assert np.max(np.abs(gram - np.eye(len(vecs)))) <= 1e-8

    def test_node_counts(self, harmonic_solution):
        for n, s in enumerate(harmonic_solution.states):
            v = s.values.real
            sig = v[np.abs(v) > 1e-6 * np.abs(v).max()]
            assert int(np.sum(np.diff(np.sign(sig)) != 0)) == n

    def test_convergence_order(self, consts):
        coarse = solve_tise(Potential.harmonic(), Grid1D(-10, 10, 2000),
                            1, consts).energies[0]
        fine = solve_tise(Potential.harmonic(), Grid1D(-10, 10, 3999),
                          1, consts).energies[0]
        ratio = abs(coarse - 0.5) / abs(fine - 0.5)
        assert 3.5 <= ratio <= 4.5

    def test_too_many_states(self, consts):
        with pytest.raises(ValueError):
            solve_tise(Potential.harmonic(), Grid1D(-5, 5, 64), 63, consts)

    def test_unbound_warning(self, consts):
        with pytest.warns(UnboundStateWarning):
            solve_tise(Potential.soft_well(1.0, 0.5), Grid1D(-20, 20, 512),
                       8, consts)


class TestFisher:
    def test_gaussian_analytic(self, consts):
        # oracle: integral P'^2/P = 1/sigma^2 for a Gaussian density
        g = Grid1D(-12.0, 12.0, 96001)
        psi = WaveFunction.gaussian(g, sigma=1.0)
        fm = fisher_metrics(psi)
        assert fm.fi_classical == pytest.approx(1.0, abs=1e-6)
        assert fm.fi_generalized == pytest.approx(1.0, abs=1e-6)
        assert fm.fisher_length == pytest.approx(1.0, abs=1e-6)

    def test_plane_wave(self, consts):
        k = 2.0
        g = Grid1D(0.0, 4 * 2 * math.pi / k, 1025)
        psi = WaveFunction.plane_wave(g, k)
        fm = fisher_metrics(psi)
        assert fm.fi_generalized == pytest.approx(16.0, abs=1e-10)
        assert abs(fm.fisher_length - 0.25) <= 1e-8
        assert abs(fm.fi_classical) <= 1e-12

    def test_plane_wave_needs_whole_periods(self):
        with pytest.raises(ValueError):
            WaveFunction.plane_wave(Grid1D(0.0, 1.0, 128), 2.0)

    def test_gaussian_times_plane_wave(self, consts):
        # oracle: 4 integral |psi'|^2 = 1/sigma^2 + 4 k^2 = 37
        g = Grid1D(-12.0, 12.0, 8001)
        psi = WaveFunction.gaussian(g, sigma=1.0, k=3.0)
        fm = fisher_metrics(psi)
        assert fm.fi_generalized == pytest.approx(37.0, rel=1e-3)
        assert fm.fi_classical == pytest.approx(1.0, rel=1e-3)
        assert fm.decomposition_residual <= 1e-8 * fm.fi_generalized
        assert fm.correction < 0.0

    def test_well_fisher_lengths(self, well_solution):
        # delta_x = L / (2 n pi) exactly for the box eigenstates
        for n, s in enumerate(well_solution.states, start=1):
            fm = fisher_metrics(s)
            assert fm.fisher_length == pytest.approx(
                1.0 / (2 * n * math.pi), rel=5e-3)

    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_decomposition_identity_random_amplitudes(self, seed):
        # smooth random complex psi from a handful of Fourier modes
        rng = np.random.default_rng(seed)
        g = Grid1D(-8.0, 8.0, 1024)
        x = g.x
        vals = np.zeros_like(x, dtype=complex)
        for _ in range(4):
            a = rng.normal() + 1j * rng.normal()
            k = rng.uniform(-2.0, 2.0)
            vals += a * np.exp(1j * k * x)
        vals *= np.exp(-(x / 5.0) ** 2)
        psi = WaveFunction.normalized(g, vals)
        fm = fisher_metrics(psi)
        assert fm.decomposition_residual <= 1e-8 * max(fm.fi_generalized, 1.0)
        assert fm.correction <= 0.0
        assert fm.fi_generalized >= fm.fi_classical - 1e-10


class TestCramerRao:
    def test_gaussian_equality(self, consts):
        g = Grid1D(-12.0, 12.0, 96001)
        psi = WaveFunction.gaussian(g, sigma=1.0)
        _, sd = psi.mean_and_std()
        assert abs(cr_bound_check(psi, sd)) <= 1e-6

    def test_double_hump_strict_inequality(self, consts):
        g = Grid1D(-16.0, 16.0, 4001)
        x = g.x
        hump = (np.exp(-((x - 3) ** 2) / 2) + np.exp(-((x + 3) ** 2) / 2))
        psi = WaveFunction.normalized(g, hump)
        _, sd = psi.mean_and_std()
        assert cr_bound_check(psi, sd) > 0.0

    def test_plane_wave_equality(self, consts):
        g = Grid1D(0.0, 4 * math.pi, 1025)
        psi = WaveFunction.plane_wave(g, 2.0)
        assert abs(cr_bound_check(psi, 0.25)) <= 1e-8


class TestVariational:
    def test_harmonic(self, consts, harmonic_solution):
        res = variational_ground_state(Potential.harmonic(),
                                       Grid1D(-10.0, 10.0, 2000), consts)
        assert res.energy == pytest.approx(harmonic_solution.energies[0],
                                           rel=1e-4)
        assert res.iterations <= 5000

    def test_well(self, consts, well_solution):
        res = variational_ground_state(Potential.infinite_well(1.0),
                                       Grid1D(0.0, 1.0, 2000), consts)
        assert res.energy == pytest.approx(well_solution.energies[0],
                                           rel=1e-4)

    def test_converged_state_is_fixed_point(self, consts):
        grid = Grid1D(-10.0, 10.0, 2000)
        first = variational_ground_state(Potential.harmonic(), grid, consts)
        again = variational_ground_state(Potential.harmonic(), grid, consts,
                                         psi0=first.psi)
        assert again.iterations <= 2
        assert again.energy == pytest.approx(first.energy, rel=1e-9)

    def test_nonconvergence_carries_iterate(self, consts):
        with pytest.raises(ConvergenceError) as info:
            variational_ground_state(Potential.harmonic(),
                                     Grid1D(-10.0, 10.0, 2000), consts,
                                     max_iters=3, tol=1e-16)
        assert info.value.psi is not None
        assert info.value.iterations == 3


class TestWkb:
    def test_free_particle_validity_zero(self, consts):
        prof = local_wkb_profile(Potential.free(), 2.0,
                                 Grid1D(-5, 5, 256), consts)
        assert np.nanmax(prof.validity_metric) == 0.0

    def test_harmonic_values_at_origin(self, consts):
        # k = sqrt(E / (2 f^2 / m)) = sqrt(20) for E=10 in natural units
        g = Grid1D(-6.0, 6.0, 12001)
        prof = local_wkb_profile(Potential.harmonic(), 10.0, g, consts)
        mid = 6000
        assert prof.k_of_x[mid] == pytest.approx(math.sqrt(20.0), rel=1e-12)
        assert prof.delta_x_of_x[mid] == pytest.approx(0.1118033988749895,
                                                       rel=1e-10)

    def test_turning_point_masked_divergence(self, consts):
        g = Grid1D(-6.0, 6.0, 12001)
        prof = local_wkb_profile(Potential.harmonic(), 10.0, g, consts)
        assert np.any(~prof.allowed_mask)
        assert np.all(np.isnan(prof.validity_metric[~prof.allowed_mask]))
        allowed_validity = prof.validity_metric[prof.allowed_mask]
        assert np.nanmax(allowed_validity) > 10.0  # blows up near turning

    def test_no_allowed_region(self, consts):
        with pytest.raises(ValueError):
            local_wkb_profile(Potential.harmonic(), -1.0,
                              Grid1D(-5, 5, 128), consts)

    def test_wkb_matches_eigenstate_fisher_length(self, consts, well_solution):
        # flat box: local delta_x equals the state's global Fisher length
        for n, s in enumerate(well_solution.states, start=1):
            e_n = well_solution.energies[n - 1]
            prof = local_wkb_profile(Potential.infinite_well(1.0), e_n,
                                     Grid1D(0.0, 1.0, 2000), consts)
            valid = prof.validity_metric[prof.allowed_mask]
            assert np.nanmax(valid) <= 0.1
            fm = fisher_metrics(s)
            mid = np.nanmedian(prof.delta_x_of_x)
            assert fm.fisher_length == pytest.approx(mid, rel=5e-2)


class TestForceRecovery:
    def test_harmonic(self, consts):
        res = appendix_a_consistency(Potential.harmonic(), 10.0,
                                     Grid1D(-4.2, 4.2, 8401), consts)
        assert res <= 1e-3

    def test_linear(self, consts):
        res = appendix_a_consistency(Potential.linear(1.0), 5.0,
                                     Grid1D(-4.5, 5.0, 9501), consts)
        assert res <= 1e-3

    def test_free(self, consts):
        res = appendix_a_consistency(Potential.free(), 2.0,
                                     Grid1D(-5.0, 5.0, 512), consts)
        assert res == 0.0


class TestDispersion:
    def test_rest_frequency(self, consts):
        res = dispersion_checks(DispersionParams(k=0.0, m0=1.0, c=1.0, f=0.5),
                                consts)
        # omega(k=0) = m0 c^2 / (2f) = m0 c^2 / hbar
        assert res.omega_kg == pytest.approx(1.0, abs=1e-15)
        assert res.kg_residual <= 1e-12

    def test_massless_light_cone(self, consts):
        res = dispersion_checks(DispersionParams(k=3.0, m0=0.0, c=2.0, f=0.5),
                                consts)
        assert res.omega_kg == pytest.approx(6.0, rel=1e-15)

    def test_nonrelativistic_branch(self, consts):
        res = dispersion_checks(DispersionParams(k=2.0, m0=1.0, c=1.0, f=0.5),
                                consts)
        # hbar k^2 / 2m with hbar = 2f = 1, m = 1
        assert res.omega_nr == pytest.approx(2.0, abs=1e-15)
        assert res.nr_residual <= 1e-12

    def test_rejects_negative_mass(self, consts):
        with pytest.raises(ValueError):
            dispersion_checks(DispersionParams(k=1.0, m0=-1.0, c=1.0, f=0.5),
                              consts)


def test_bohm_report_fields(consts):
    rep = bohm_adiabaticity_report(Potential.harmonic(), 10.0,
                                   Grid1D(-6.0, 6.0, 2000), consts)
    assert set(rep) == {"max_dv_dt", "level_spacing", "bohm_ratio"}
    assert rep["level_spacing"] == pytest.approx(1.0, rel=1e-3)
    assert rep["bohm_ratio"] > 0.0

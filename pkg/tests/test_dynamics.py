import numpy as np
import pytest
from hypothesis import given, strategies as st

from ptchain.dynamics import (
    Constant,
    IntegrationError,
    Linear,
    dominant_frequency,
    evolve_driven,
    evolve_static,
    fit_decay_rate,
    populations,
    propagator,
)
from ptchain.effective import effective_params
from ptchain.model import ChainParams, build_hamiltonian, initial_ground_state


def eff_model(eps=0.0, gamma=0.1, g=1.0):
    return effective_params(ChainParams(2, eps, gamma, g))


DOWN = np.array([0.0, 1.0], dtype=complex)


class TestPopulations:
    def test_basis_state(self):
        assert np.array_equal(populations(np.array([1.0, 0.0])), [1.0, 0.0])

    def test_equal_superposition(self):
        p = populations(np.array([1.0, 1.0j]) / np.sqrt(2))
        assert np.max(np.abs(p - 0.5)) < 1e-15

    def test_normalization_built_in(self):
        assert np.array_equal(populations(np.array([2.0, 0, 0, 0])), [1, 0, 0, 0])

    def test_vanishing_norm_rejected(self):
        with pytest.raises(ValueError, match="undefined"):
            populations(np.zeros(2))

    @given(st.lists(st.complex_numbers(max_magnitude=10), min_size=1, max_size=8))
    def test_sums_to_one(self, amps):
        state = np.array(amps)
        if np.linalg.norm(state) < 1e-6:
            return
        assert abs(populations(state).sum() - 1.0) < 1e-12


class TestPropagator:
    def test_semigroup_property(self):
        h = build_hamiltonian(ChainParams(2, 0.3, 0.2, 1.0), 0.5)
        u1 = propagator(h, 0.7)
        u2 = propagator(h, 1.4)
        assert np.max(np.abs(u1 @ u1 - u2)) < 1e-11

    def test_unitary_for_hermitian(self):
        h = build_hamiltonian(ChainParams(2, 0.3, 0.0, 1.0), 0.5)
        u = propagator(h, 2.0)
        assert np.max(np.abs(u @ u.conj().T - np.eye(4))) < 1e-13


class TestEvolveStatic:
    def test_norm_conserved_for_hermitian(self):
        h = build_hamiltonian(ChainParams(2, 0.3, 0.0, 1.0), 0.4)
        traj = evolve_static(h, initial_ground_state(ChainParams(2)), np.linspace(0, 50, 501))
        assert np.max(np.abs(traj.raw_norm - 1.0)) < 1e-9

    def test_saturation_against_closed_form(self):
        """At the crossing the populations relax as P_up = sinh^2(l t)/cosh(2 l t):
        an independent analytic oracle for the matrix-exponential path."""
        eff = eff_model()
        grid = np.linspace(0, 80, 801)
        traj = evolve_static(
            np.array([[0, 1j * eff.ell], [1j * eff.ell, 0]]), DOWN, grid
        )
        p_up = traj.populations[:, 0]
        exact = np.sinh(eff.ell * grid) ** 2 / np.cosh(2 * eff.ell * grid)
        assert np.max(np.abs(p_up - exact)) < 1e-9

    def test_oscillation_in_preserved_phase(self):
        from ptchain.effective import effective_gap, effective_hamiltonian

        eff = eff_model()
        omega, decay = effective_gap(eff, 0.2)
        assert decay == 0.0
        grid = np.linspace(0, 60, 1201)
        traj = evolve_static(effective_hamiltonian(eff, 0.2), DOWN, grid)
        p_up = traj.populations[:, 0]
        # P_up returns near its start after one period
        period = 2 * np.pi / omega
        i = int(round(period / (grid[1] - grid[0])))
        assert abs(p_up[i] - p_up[0]) < 1e-3

    def test_nonuniform_grid(self):
        h = build_hamiltonian(ChainParams(2, 0.0, 0.1, 1.0), 0.4)
        uniform = evolve_static(h, initial_ground_state(ChainParams(2)), np.linspace(0, 10, 101))
        skewed = evolve_static(
            h, initial_ground_state(ChainParams(2)), np.array([0.0, 1.0, 3.0, 10.0])
        )
        assert np.max(np.abs(skewed.states[-1] - uniform.states[-1])) < 1e-10

    def test_grid_must_start_at_zero(self):
        with pytest.raises(ValueError):
            evolve_static(np.eye(2), DOWN, np.array([1.0, 2.0]))


class TestEvolveDriven:
    def test_hermitian_limit_stays_diabatic(self):
        eff = eff_model(gamma=0.0)
        traj = evolve_driven(eff, Linear(0.001))
        p = traj.populations[-1]
        assert p[1] > 1.0 - 1e-12 and p[0] < 1e-12

    def test_slow_sweep_equalizes(self):
        traj = evolve_driven(eff_model(), Linear(0.001))
        assert np.max(np.abs(traj.populations[-1] - 0.5)) < 0.02

    def test_fast_sweep_leaves_excess_in_start_state(self):
        p = evolve_driven(eff_model(), Linear(0.02)).populations[-1]
        assert p[1] > p[0]
        assert 0.55 < p[1] < 0.68

    def test_full_chain_handle(self):
        params = ChainParams(2, 0.0, 0.1, 1.0)
        traj = evolve_driven(params, Linear(0.01))
        assert traj.states.shape[1] == 4
        assert abs(traj.populations[-1].sum() - 1.0) < 1e-12

    def test_norm_conserved_for_hermitian_drive(self):
        traj = evolve_driven(ChainParams(2, 0.3, 0.0, 1.0), Linear(0.01))
        assert np.max(np.abs(traj.raw_norm - traj.raw_norm[0])) < 1e-8

    def test_frozen_schedule_matches_static(self):
        params = ChainParams(2, 0.2, 0.1, 1.0)
        grid = np.linspace(0, 20, 41)
        driven = evolve_driven(params, Constant(0.4), psi0=initial_ground_state(params), grid=grid)
        h = build_hamiltonian(params, 0.4)
        static = evolve_static(h, initial_ground_state(params), grid)
        assert np.max(np.abs(driven.states - static.states)) < 1e-9

    def test_step_halving_converges(self):
        eff = eff_model()
        a = evolve_driven(eff, Linear(0.001), rtol=1e-10, atol=1e-12).populations[-1]
        b = evolve_driven(eff, Linear(0.001), rtol=5e-11, atol=5e-13).populations[-1]
        assert np.max(np.abs(a - b)) < 1e-6

    def test_constant_schedule_requires_grid(self):
        with pytest.raises(ValueError, match="time grid"):
            evolve_driven(eff_model(), Constant(0.0))

    def test_rejects_nonpositive_speed(self):
        with pytest.raises(ValueError):
            Linear(0.0)

    def test_norm_guard_rescales_exactly(self):
        # pure gain: d psi/dt = c psi, norm e^{c t} overflows float range
        c = 1.0
        h = 1j * c * np.eye(2)
        grid = np.linspace(0.0, 800.0, 5)
        traj = evolve_driven(lambda s: h, Constant(0.0), psi0=np.array([0.6, 0.8j]), grid=grid)
        assert traj.log2_scale[-1] > 0
        log2_norm = traj.log2_scale[-1] + np.log2(traj.raw_norm[-1])
        assert abs(log2_norm - c * 800.0 / np.log(2)) / (c * 800.0 / np.log(2)) < 1e-9
        assert np.max(np.abs(traj.populations[-1] - [0.36, 0.64])) < 1e-9


class TestTrajectory:
    def test_populations_rows_sum_to_one(self):
        traj = evolve_driven(eff_model(), Linear(0.01))
        assert np.max(np.abs(traj.populations.sum(axis=1) - 1.0)) < 1e-12

    def test_raw_norm_recomputed(self):
        traj = evolve_driven(eff_model(), Linear(0.01))
        traj.states[-1] *= 2.0
        assert abs(traj.raw_norm[-1] - 2 * np.linalg.norm(traj.states[-1]) / 2) < 1e-12


class TestAnalysisHelpers:
    def test_dominant_frequency_pure_tone(self):
        t = np.linspace(0, 400, 4096, endpoint=False)
        omega = 0.7313
        got = dominant_frequency(t, 0.3 + 0.1 * np.cos(omega * t + 0.4))
        assert abs(got - omega) / omega < 5e-4

    def test_dominant_frequency_needs_uniform_grid(self):
        with pytest.raises(ValueError):
            dominant_frequency(np.array([0.0, 1.0, 3.0]), np.zeros(3))

    def test_fit_decay_rate_synthetic(self):
        t = np.linspace(0, 50, 501)
        rate = 0.173
        sig = 0.5 - 0.2 * np.exp(-rate * t)
        got = fit_decay_rate(t, sig, saturation=0.5, t_min=5, t_max=40)
        assert abs(got - rate) / rate < 1e-9

    def test_fit_decay_rate_window_guard(self):
        with pytest.raises(ValueError):
            fit_decay_rate(np.linspace(0, 1, 10), np.full(10, 0.5), 0.5, 0.2, 0.3)

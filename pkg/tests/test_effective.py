import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import linear_sum_assignment

from ptchain.effective import (
    EffectiveModel,
    SlopeCheckError,
    _check_slopes,
    effective_eigenvalues,
    effective_gap,
    effective_hamiltonian,
    effective_params,
)
from ptchain.model import ChainParams, build_hamiltonian
from ptchain.spectrum import NoCrossingError, eigenvalues


def params(eps=0.0, gamma=0.0, g=1.0):
    return ChainParams(n_qubits=2, epsilon=eps, gamma=gamma, coupling=g)


class TestEffectiveParams:
    def test_unbiased_scalars(self):
        eff = effective_params(params(gamma=0.1))
        assert abs(eff.s_cr - (np.sqrt(2) - 1)) < 1e-12
        assert abs(eff.w - (-1.276)) < 1e-3
        assert abs(eff.ell - 2 * 0.1 * eff.s_cr) < 1e-12

    def test_biased_scalars(self):
        eff = effective_params(params(eps=0.9))
        assert abs(eff.s_cr - 0.619) < 1e-3
        assert abs(eff.w - 0.477) < 1e-3
        assert eff.ell == 0.0

    def test_regression_values(self):
        # frozen from the closed forms; guards against accidental edits
        assert abs(effective_params(params()).w - (-1.2761423749153957)) < 1e-12
        assert abs(effective_params(params(eps=0.9)).w - 0.4769336481381115) < 1e-12

    def test_coupling_strength_example(self):
        eff = effective_params(params(gamma=0.1))
        assert abs(eff.ell - 0.08284271247461902) < 1e-14

    def test_rejects_strong_gain_loss(self):
        with pytest.raises(ValueError, match="weak gain/loss"):
            effective_params(ChainParams(2, 0.0, 1.0, 1.0))

    def test_propagates_no_crossing(self):
        with pytest.raises(NoCrossingError):
            effective_params(params(eps=1.1))

    @given(st.floats(0.0, 0.95), st.floats(0.0, 0.5))
    def test_slope_guard_passes_across_bias_range(self, eps, gamma):
        eff = effective_params(params(eps=eps, gamma=gamma))
        assert eff.g - eff.w > 0

    def test_slope_guard_catches_wrong_slope(self):
        p = params()
        with pytest.raises(SlopeCheckError):
            _check_slopes(p, np.sqrt(2) - 1, -(np.sqrt(2) - 1), w=-0.9)

    @given(st.floats(1e-4, 0.5))
    def test_coupling_linear_in_gamma(self, gamma):
        ratio = effective_params(params(gamma=gamma)).ell / gamma
        ref = effective_params(params(gamma=0.25)).ell / 0.25
        assert abs(ratio - ref) < 1e-10


class TestEffectiveHamiltonian:
    def test_at_crossing_point(self):
        eff = effective_params(params(gamma=0.1))
        h = effective_hamiltonian(eff, 0.0)
        assert np.array_equal(h, np.array([[0, 1j * eff.ell], [1j * eff.ell, 0]]))
        eigs = np.sort_complex(np.linalg.eigvals(h))
        assert np.max(np.abs(eigs - np.array([-1j * eff.ell, 1j * eff.ell]))) < 1e-15

    def test_hermitian_limit_diagonal(self):
        eff = effective_params(params())
        h = effective_hamiltonian(eff, 0.3)
        assert np.array_equal(h, np.diag([-0.3 * eff.g, -0.3 * eff.w]))

    def test_real_gap_outside_broken_region(self):
        eff = effective_params(params(gamma=0.1))
        eigs = effective_eigenvalues(eff, 0.2)
        assert np.max(np.abs(eigs.imag)) < 1e-14
        assert abs(eigs[0] - eigs[1]) > 0.1

    @given(st.floats(0.0, 0.9), st.floats(-0.5, 0.5), st.floats(0.0, 0.95))
    def test_quadratic_secular_consistency(self, gamma, s_tilde, eps):
        eff = effective_params(params(eps=eps, gamma=gamma))
        for e in effective_eigenvalues(eff, s_tilde):
            res = (e + eff.g * s_tilde) * (e + eff.w * s_tilde) + eff.ell**2
            assert abs(res) < 1e-12

    @given(st.floats(0.01, 0.9), st.floats(-0.5, 0.5))
    def test_broken_region_is_discriminant_sign(self, gamma, s_tilde):
        eff = effective_params(params(gamma=gamma))
        eigs = effective_eigenvalues(eff, s_tilde)
        inside = abs(s_tilde * (eff.g - eff.w) / 2) < eff.ell
        assert (np.max(np.abs(eigs.imag)) > 0) == inside

    def test_matrix_eigenvalues_match_closed_form(self):
        eff = effective_params(params(eps=0.3, gamma=0.2))
        for st_ in (-0.2, -0.01, 0.0, 0.05, 0.3):
            direct = np.linalg.eigvals(effective_hamiltonian(eff, st_))
            closed = effective_eigenvalues(eff, st_)
            cost = np.abs(direct[:, None] - closed[None, :])
            r, c = linear_sum_assignment(cost)
            assert np.max(cost[r, c]) < 1e-12


class TestEffectiveGap:
    def test_at_crossing(self):
        eff = effective_params(params(gamma=0.1))
        omega, decay = effective_gap(eff, 0.0)
        assert omega == 0.0
        assert abs(decay - 2 * eff.ell) < 1e-15

    def test_hermitian_gap(self):
        eff = effective_params(params())
        omega, decay = effective_gap(eff, 0.1)
        assert abs(omega - abs(eff.g - eff.w) * 0.1) < 1e-12
        assert decay == 0.0

    def test_both_vanish_at_exceptional_point(self):
        eff = effective_params(params(gamma=0.1))
        st_ep = 2 * eff.ell / (eff.g - eff.w)
        omega, decay = effective_gap(eff, st_ep)
        assert omega < 1e-7 and decay < 1e-7

    @given(st.floats(0.01, 0.9), st.floats(-0.5, 0.5))
    def test_exactly_one_nonzero_off_ep(self, gamma, s_tilde):
        eff = effective_params(params(gamma=gamma))
        st_ep = 2 * eff.ell / (eff.g - eff.w)
        if abs(abs(s_tilde) - st_ep) < 1e-6:
            return
        omega, decay = effective_gap(eff, s_tilde)
        assert (omega > 0) != (decay > 0)


class TestReductionFidelity:
    """The reduced eigenvalues track the two lowest branches of the full chain.

    Measured accuracy of the quadratic expansion over |s~| <= 0.1: worst
    deviation 0.092 delta at gamma = 0.1 (near the broken-region exit) and
    below 0.05 delta for gamma <= 0.05.  Asserted at those measured tiers;
    see the decisions ledger.
    """

    @staticmethod
    def _worst(eps, gamma):
        p = params(eps=eps, gamma=gamma)
        eff = effective_params(p)
        worst = 0.0
        for s_tilde in np.linspace(-0.1, 0.1, 41):
            full = eigenvalues(build_hamiltonian(p, eff.s_cr + s_tilde))
            low2 = full[np.argsort(full.real)][:2]
            red = effective_eigenvalues(eff, s_tilde) + eff.e_cr
            d1 = max(abs(red[0] - low2[0]), abs(red[1] - low2[1]))
            d2 = max(abs(red[0] - low2[1]), abs(red[1] - low2[0]))
            worst = max(worst, min(d1, d2))
        return worst

    @pytest.mark.parametrize("eps", [0.0, 0.9])
    @pytest.mark.parametrize("gamma", [0.0, 0.02, 0.05])
    def test_weak_gain_loss_tier(self, eps, gamma):
        assert self._worst(eps, gamma) < 5e-2

    @pytest.mark.parametrize("eps", [0.0, 0.9])
    def test_moderate_gain_loss_tier(self, eps):
        assert self._worst(eps, 0.1) < 0.1

    def test_slopes_match_exact_branches(self):
        # at gamma=0 the reduced branches -g s~ and -w s~ are tangent to the
        # full branches through the crossing
        p = params()
        eff = effective_params(p)
        h = 1e-6
        full = eigenvalues(build_hamiltonian(p, eff.s_cr + h))
        low2 = np.sort(full[np.argsort(np.abs(full - eff.e_cr))][:2].real)
        fd = (low2 - eff.e_cr) / h
        assert np.max(np.abs(np.sort(fd) - np.sort([-eff.g, -eff.w]))) < 1e-4


def test_effective_model_is_frozen():
    eff = effective_params(params(gamma=0.1))
    with pytest.raises(AttributeError):
        eff.w = 0.0

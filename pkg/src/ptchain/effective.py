"""Two-level reduction of the two-qubit chain around the lowest-level crossing.

Near the crossing the quartic characteristic polynomial factorizes to second
order in the detuning s_tilde = s - s_cr, giving a 2x2 non-Hermitian model
with linear diagonal branches of slopes -g and -w and an imaginary coupling
of magnitude ell = 2 gamma s_cr sqrt(g^2 - epsilon^2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ChainParams, build_hamiltonian
from .spectrum import crossing_point

SLOPE_RTOL = 0.05   # finite-difference guard on the printed slope expression
_SLOPE_STEP = 1e-5


class SlopeCheckError(Exception):
    """The closed-form branch slope disagrees with the finite-difference oracle."""


@dataclass(frozen=True)
class EffectiveModel:
    """Scalars defining the reduced 2x2 model; energies in units of delta."""

    s_cr: float
    e_cr: float
    g: float
    w: float
    ell: float
    params: ChainParams


def _second_branch_slope(s_cr: float, eps: float, g: float, d: float) -> float:
    """Slope of the non-singlet branch at the crossing, from the printed closed form."""
    num = g * s_cr * (2 * d**2 * (s_cr - 1) - g**2 * s_cr + 5 * s_cr * eps**2)
    den = (-5 * g**2 * s_cr**2 + s_cr**2 * eps**2 + d**2 * (s_cr - 1) ** 2) ** 2
    fac = -(d**2) + 5 * g**2 * s_cr**2 - d**2 * s_cr**2 - s_cr**2 * eps**2 + 2 * d**2 * s_cr
    return (num / den) * fac


def _check_slopes(params: ChainParams, s_cr: float, e_cr: float, w: float) -> None:
    """Compare {-g, -w} with finite-difference slopes of the full Hermitian spectrum.

    Guards the long printed expression for w against transcription errors.
    """
    h = _SLOPE_STEP
    eigs = np.linalg.eigvals(build_hamiltonian(params.hermitian(), s_cr + h))
    near = eigs[np.argsort(np.abs(eigs - e_cr))][:2]
    fd = np.sort(np.real(near - e_cr) / h)
    exact = np.sort([-params.g, -w])
    for got, want in zip(fd, exact):
        if abs(got - want) > SLOPE_RTOL * max(1e-12, abs(want)):
            raise SlopeCheckError(
                f"closed-form slopes {exact} disagree with finite differences {fd} "
                f"beyond {SLOPE_RTOL:.0%} for {params}"
            )


def effective_params(params: ChainParams, validate_slope: bool = True) -> EffectiveModel:
    """Reduce a two-qubit chain to the 2x2 crossing model.

    Requires |epsilon| < |g| (the crossing must exist) and gamma < delta
    (weak gain/loss, the regime in which the reduction is derived).  The
    closed-form slope w is cross-checked against a finite-difference oracle
    on the full spectrum unless ``validate_slope`` is disabled.
    """
    s_cr, e_cr = crossing_point(params)
    if params.gamma >= params.delta:
        raise ValueError(
            f"gamma={params.gamma} >= delta={params.delta}: outside the weak gain/loss "
            "regime assumed by the two-level reduction"
        )
    g, eps, d = params.g, params.epsilon, params.delta
    w = _second_branch_slope(s_cr, eps, g, d)
    if validate_slope:
        _check_slopes(params, s_cr, e_cr, w)
    ell = 2.0 * params.gamma * s_cr * np.sqrt(g**2 - eps**2)
    return EffectiveModel(s_cr=s_cr, e_cr=e_cr, g=g, w=w, ell=float(ell), params=params)


def effective_hamiltonian(eff: EffectiveModel, s_tilde: float) -> np.ndarray:
    """2x2 model matrix [[-g s~, i ell], [i ell, -w s~]] (sigma_x eigenbasis)."""
    return np.array(
        [[-eff.g * s_tilde, 1j * eff.ell], [1j * eff.ell, -eff.w * s_tilde]],
        dtype=complex,
    )


def effective_eigenvalues(eff: EffectiveModel, s_tilde: float) -> np.ndarray:
    """Both roots of the reduced secular equation (E + g s~)(E + w s~) + ell^2 = 0."""
    mean = -0.5 * (eff.g + eff.w) * s_tilde
    disc = (0.5 * (eff.g - eff.w) * s_tilde) ** 2 - eff.ell**2
    root = np.sqrt(complex(disc))
    return np.array([mean - root, mean + root])


def effective_gap(eff: EffectiveModel, s_tilde: float) -> tuple[float, float]:
    """(|Re(E1 - E2)|, |Im(E1 - E2)|) of the reduced model.

    The first entry is the oscillation frequency of the populations in the
    symmetry-preserved regime, the second the decay rate in the broken
    regime; exactly one is nonzero except at the exceptional points
    s~ = +-2 ell / |g - w| where both vanish.
    """
    disc = (0.5 * (eff.g - eff.w) * s_tilde) ** 2 - eff.ell**2
    if disc >= 0.0:
        return 2.0 * float(np.sqrt(disc)), 0.0
    return 0.0, 2.0 * float(np.sqrt(-disc))

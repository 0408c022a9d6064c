"""Closed-form sweep-through-crossing transition probability for the reduced model.

For a linear sweep at speed k through the gain/loss-broadened crossing, the
probability of ending in the ground state of the Hermitian part has the
closed form P = (e^X - 1)/(2 e^X - 1) with X = 2 pi ell^2 / ((g - w) k delta).
P grows monotonically from 0 (Hermitian limit) toward 1/2 (slow sweep).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .effective import EffectiveModel

V_MIN = 10.0  # operational cut on the validity parameter; the derivation assumes v >> 1


class FormulaDomainError(ValueError):
    """Parameters outside the closed form's domain (requires k > 0 and g > w)."""


@dataclass(frozen=True)
class LzsResult:
    p_ground: float      # in [0, 1/2)
    exponent: float      # X = 2 pi ell^2 / ((g - w) k delta)
    psi_down_sq: float   # e^X  (inf above X ~ 709; use exponent then)
    psi_up_sq: float     # e^X - 1
    validity: float      # s~_f sqrt((g - w)/(k delta)); trust the formula for v >= V_MIN


def _check_domain(eff: EffectiveModel, k: float) -> None:
    if not k > 0:
        raise FormulaDomainError(f"sweep speed k must be positive, got {k}")
    if not eff.g - eff.w > 0:
        raise FormulaDomainError(
            f"closed form requires g - w > 0, got g={eff.g}, w={eff.w}"
        )


def lzs_validity(eff: EffectiveModel, k: float, s_tilde_f: float | None = None) -> float:
    """Dimensionless validity parameter v = s~_f sqrt((g - w)/(k delta)).

    ``s_tilde_f`` defaults to 1 - s_cr, the end of a full sweep.  Values
    below V_MIN mean the asymptotic derivation of the closed form is not
    trustworthy and its output should be flagged, not asserted.
    """
    _check_domain(eff, k)
    if s_tilde_f is None:
        s_tilde_f = 1.0 - eff.s_cr
    return float(s_tilde_f * math.sqrt((eff.g - eff.w) / (k * eff.params.delta)))


def lzs_probability(eff: EffectiveModel, k: float) -> LzsResult:
    """Closed-form ground-state probability for a full linear sweep at speed k.

    The ratio (e^X - 1)/(2 e^X - 1) is evaluated as (1 - e^-X)/(2 - e^-X),
    which is exact and overflow-free for arbitrarily large X; the raw
    squared amplitudes e^X and e^X - 1 are reported as well and may
    overflow to inf for X above ~709.
    """
    _check_domain(eff, k)
    x = 2.0 * math.pi * eff.ell**2 / ((eff.g - eff.w) * k * eff.params.delta)
    em = math.expm1(-x)  # e^-X - 1, in (-1, 0]
    p = -em / (1.0 - em)
    try:
        psi_down_sq = math.exp(x)
    except OverflowError:
        psi_down_sq = math.inf
    psi_up_sq = math.expm1(x) if x < 700 else psi_down_sq
    return LzsResult(
        p_ground=p,
        exponent=x,
        psi_down_sq=psi_down_sq,
        psi_up_sq=psi_up_sq,
        validity=lzs_validity(eff, k),
    )

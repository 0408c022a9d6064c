"""Static and driven time evolution under non-Hermitian Hamiltonians.

Evolution is non-unitary for gamma > 0, so the raw state norm carries
physics: it is propagated untouched and only converted to normalized
population probabilities |psi_i|^2 / sum_j |psi_j|^2 at observation time.
To survive exponential growth or decay at tiny annealing speeds, the raw
state is rescaled by exact powers of two whenever its norm leaves
[2^-500, 2^+500]; the exponent is recorded per sample and populations are
unaffected.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from .effective import EffectiveModel, effective_hamiltonian
from .model import ChainParams, build_hamiltonian, initial_ground_state

ODE_RTOL = 1e-10
ODE_ATOL = 1e-12
TAU_EXP = 1e-11          # propagator semigroup self-check
TAU_ZERO = 1e-150        # vanishing-norm guard for population ratios
_LOG2_RESCALE = 500      # rescale when log2 ||psi|| leaves [-500, 500]


class IntegrationError(Exception):
    """Adaptive integration failed (step-size underflow or solver breakdown)."""


@dataclass(frozen=True)
class Constant:
    """Frozen control parameter: evolve in time at fixed s."""

    s0: float


@dataclass(frozen=True)
class Linear:
    """Linear annealing schedule s = t/T with dimensionless speed k = hbar/(delta T)."""

    k: float

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError(f"annealing speed k must be positive, got {self.k}")


Schedule = Constant | Linear


@dataclass
class Trajectory:
    """Sampled evolution: grid points, raw states, and power-of-two scale exponents.

    The physical amplitude at sample i is states[i] * 2.0**log2_scale[i].
    """

    grid: np.ndarray
    states: np.ndarray      # (n_samples, dim) complex
    log2_scale: np.ndarray  # (n_samples,) int

    @property
    def raw_norm(self) -> np.ndarray:
        """Euclidean norm of the stored (rescaled) states, recomputed on access."""
        return np.linalg.norm(self.states, axis=1)

    @property
    def populations(self) -> np.ndarray:
        """Normalized populations per sample; rows sum to 1."""
        return np.stack([populations(psi) for psi in self.states])


def populations(state: np.ndarray) -> np.ndarray:
    """Normalized occupation probabilities |psi_i|^2 / sum_j |psi_j|^2."""
    weights = np.abs(np.asarray(state, dtype=complex)) ** 2
    total = weights.sum()
    if not np.isfinite(total) or total <= TAU_ZERO**2:
        raise ValueError(f"state norm^2 = {total}: population ratios undefined")
    return weights / total


def _rescale(psi: np.ndarray) -> tuple[np.ndarray, int]:
    """Pull the norm back to O(1) by an exact power of two."""
    norm = np.linalg.norm(psi)
    if norm == 0.0 or not np.isfinite(norm):
        raise IntegrationError(f"state norm {norm} during evolution")
    exp = int(np.floor(np.log2(norm)))
    return psi * 2.0 ** (-exp), exp


def propagator(h: np.ndarray, dt: float, check: bool = True) -> np.ndarray:
    """exp(-i H dt) via scaling-and-squaring, self-checked on the semigroup property."""
    u = expm(-1j * h * dt)
    if check and dt != 0.0:
        u_half = expm(-1j * h * (dt / 2.0))
        err = np.max(np.abs(u_half @ u_half - u))
        if err > TAU_EXP * max(1.0, float(np.max(np.abs(u)))):
            raise IntegrationError(f"matrix exponential residual {err:.3e} exceeds {TAU_EXP}")
    return u


def evolve_static(h: np.ndarray, psi0: np.ndarray, t_grid: np.ndarray) -> Trajectory:
    """Propagate psi0 under a fixed Hamiltonian, sampling at t_grid.

    t_grid must start at 0 and increase; the propagator for each distinct
    step size is built once and reused.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid[0] != 0.0 or np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must start at 0 and be strictly increasing")
    psi = np.asarray(psi0, dtype=complex).copy()
    n, dim = len(t_grid), len(psi)
    states = np.empty((n, dim), dtype=complex)
    scales = np.zeros(n, dtype=np.int64)
    states[0] = psi
    cache: dict[float, np.ndarray] = {}
    scale_exp = 0
    for i in range(1, n):
        dt = float(t_grid[i] - t_grid[i - 1])
        u = cache.get(dt)
        if u is None:
            u = cache[dt] = propagator(h, dt)
        psi = u @ psi
        norm = np.linalg.norm(psi)
        if norm > 2.0**_LOG2_RESCALE or norm < 2.0**-_LOG2_RESCALE:
            psi, exp = _rescale(psi)
            scale_exp += exp
        states[i] = psi
        scales[i] = scale_exp
    return Trajectory(grid=t_grid, states=states, log2_scale=scales)


def _hamiltonian_of(model) -> callable:
    """Matrix-valued H(x) for a model handle: full chain H(s) or reduced H(s~)."""
    if isinstance(model, ChainParams):
        h0 = build_hamiltonian(model, 0.0)
        h1 = build_hamiltonian(model, 1.0) - h0
        return lambda s: h0 + s * h1
    if isinstance(model, EffectiveModel):
        return lambda st: effective_hamiltonian(model, st)
    if callable(model):
        return model
    raise TypeError(f"cannot build a Hamiltonian from {type(model).__name__}")


def default_initial_state(model) -> np.ndarray:
    """Ground state of the Hermitian part at the start of the sweep."""
    if isinstance(model, ChainParams):
        return initial_ground_state(model)
    if isinstance(model, EffectiveModel):
        # at s~ = -s_cr the diagonal is (g s_cr, w s_cr) with w < g
        return np.array([0.0, 1.0], dtype=complex)
    raise TypeError(f"no default initial state for {type(model).__name__}")


def default_span(model) -> tuple[float, float]:
    """Sweep range: s in [0, 1] for the chain, s~ in [-s_cr, 1 - s_cr] reduced."""
    if isinstance(model, EffectiveModel):
        return -model.s_cr, 1.0 - model.s_cr
    return 0.0, 1.0


def evolve_driven(
    model,
    schedule: Schedule,
    psi0: np.ndarray | None = None,
    grid: np.ndarray | None = None,
    rtol: float = ODE_RTOL,
    atol: float = ODE_ATOL,
) -> Trajectory:
    """Integrate the dimensionless Schrodinger equation along a schedule.

    For a Linear schedule the independent variable is the control parameter
    (i k dpsi/ds = H(s)/delta psi) and ``grid`` holds the s values to record,
    spanning [0, 1] for the full chain or [-s_cr, 1 - s_cr] for the reduced
    model.  For a Constant schedule the Hamiltonian is frozen at s0 and
    ``grid`` is a time grid.  ``model`` may be ChainParams, an
    EffectiveModel, or a matrix-valued callable.
    """
    h_of = _hamiltonian_of(model)
    delta = model.params.delta if isinstance(model, EffectiveModel) else getattr(model, "delta", 1.0)
    if psi0 is None:
        psi0 = default_initial_state(model)
    if isinstance(schedule, Linear):
        if grid is None:
            grid = np.linspace(*default_span(model), 501)
        factor = 1.0 / (schedule.k * delta)

        def rhs(s, y):
            return -1j * factor * (h_of(s) @ y)

    elif isinstance(schedule, Constant):
        if grid is None:
            raise ValueError("a time grid is required for a Constant schedule")
        h_frozen = h_of(schedule.s0)

        def rhs(t, y):
            return -1j * (h_frozen @ y)

    else:
        raise TypeError(f"unknown schedule {schedule!r}")

    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be a strictly increasing 1-d array")
    return _integrate_sampled(rhs, grid, np.asarray(psi0, dtype=complex), rtol, atol)


def _integrate_sampled(rhs, grid, psi0, rtol, atol) -> Trajectory:
    """Adaptive integration with dense-output sampling and norm-guarded restarts."""

    def too_big(t, y):
        return float(np.log2(np.linalg.norm(y))) - _LOG2_RESCALE

    def too_small(t, y):
        return float(np.log2(np.linalg.norm(y))) + _LOG2_RESCALE

    too_big.terminal = True
    too_big.direction = 1.0
    too_small.terminal = True
    too_small.direction = -1.0

    n, dim = len(grid), len(psi0)
    states = np.empty((n, dim), dtype=complex)
    scales = np.zeros(n, dtype=np.int64)
    states[0] = psi0
    t_cur, y_cur, scale_exp = float(grid[0]), psi0.copy(), 0
    t_end = float(grid[-1])
    next_i = 1
    while next_i < n:
        sol = solve_ivp(
            rhs,
            (t_cur, t_end),
            y_cur,
            method="DOP853",
            dense_output=True,
            events=[too_big, too_small],
            rtol=rtol,
            atol=atol,
        )
        if sol.status == -1:
            raise IntegrationError(f"integration failed near t={sol.t[-1]:.6g}: {sol.message}")
        t_seg_end = float(sol.t[-1])
        while next_i < n and grid[next_i] <= t_seg_end:
            states[next_i] = sol.sol(grid[next_i])
            scales[next_i] = scale_exp
            next_i += 1
        if sol.status == 0:
            break
        y_cur, exp = _rescale(sol.y[:, -1])
        scale_exp += exp
        t_cur = t_seg_end
    if next_i < n:
        raise IntegrationError(f"integration stopped at t={t_cur:.6g} before the grid end")
    return Trajectory(grid=grid, states=states, log2_scale=scales)


def dominant_frequency(t_grid: np.ndarray, signal: np.ndarray) -> float:
    """Angular frequency of the strongest non-DC Fourier peak of a uniform series.

    Hann-windowed FFT with parabolic interpolation of the log magnitude
    around the peak bin.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    signal = np.asarray(signal, dtype=float)
    steps = np.diff(t_grid)
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise ValueError("dominant_frequency requires a uniform time grid")
    n = len(signal)
    window = np.hanning(n)
    mags = np.abs(np.fft.rfft((signal - signal.mean()) * window))
    i = int(np.argmax(mags))
    df = 1.0 / (n * steps[0])
    if 0 < i < len(mags) - 1 and mags[i - 1] > 0 and mags[i + 1] > 0:
        la, lb, lc = np.log(mags[i - 1]), np.log(mags[i]), np.log(mags[i + 1])
        i = i + 0.5 * (la - lc) / (la - 2 * lb + lc)
    return float(2.0 * np.pi * i * df)


def fit_decay_rate(
    t_grid: np.ndarray,
    signal: np.ndarray,
    saturation: float,
    t_min: float,
    t_max: float,
) -> float:
    """Exponential approach rate of ``signal`` toward ``saturation``.

    Linear fit of log|signal - saturation| over the window [t_min, t_max];
    returns the positive rate.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    gap = np.abs(np.asarray(signal, dtype=float) - saturation)
    mask = (t_grid >= t_min) & (t_grid <= t_max) & (gap > 0)
    if mask.sum() < 4:
        raise ValueError("decay-fit window contains too few usable samples")
    slope, _ = np.polyfit(t_grid[mask], np.log(gap[mask]), 1)
    return float(-slope)

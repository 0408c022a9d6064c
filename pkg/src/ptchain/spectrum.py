"""Instantaneous spectra, symmetry-phase classification, and exceptional points.

Eigenvalues of the staggered-gain/loss chain are either real or come in
complex-conjugate pairs; the boundary between the two regimes is marked by
second-order exceptional points where a pair of eigenvalues and their
eigenvectors coalesce.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .model import ChainParams, build_hamiltonian

TAU_CONJ = 1e-9        # conjugation-closure tolerance
TAU_RES = 1e-10        # characteristic-polynomial residual bound
TAU_IM = 1e-9          # real/complex eigenvalue split (scaled by spectral radius)
TAU_SUM = 1e-10        # trace-zero sum rule
TAU_MATCH = 1e-6       # branch-tracking ambiguity margin (scaled)
TAU_S_EP = 1e-8        # bisection bracket width for exceptional points
TAU_EP_GAP = 1e-3      # eigenvalue coalescence gap at a located EP
EP_OVERLAP_MIN = 0.999  # eigenvector coalescence overlap at a located EP

MAX_DIM = 64


class SpectrumError(Exception):
    """Eigensolver failure or violated spectral structure."""


class NoCrossingError(SpectrumError):
    """The two lowest levels do not intersect for these parameters (|epsilon| >= |g|)."""


class AmbiguousBranchError(SpectrumError):
    """Branch tracking between neighbouring grid points is not unique; refine the grid."""


@dataclass(frozen=True)
class Phase:
    """Symmetry phase of a spectrum: 0 broken pairs means all eigenvalues real."""

    broken_pairs: int

    @property
    def all_real(self) -> bool:
        return self.broken_pairs == 0

    def __str__(self) -> str:
        return "all-real" if self.all_real else f"broken({self.broken_pairs})"


@dataclass(frozen=True)
class ExceptionalPoint:
    s: float
    energy: complex
    branch_pair: tuple[int, int]  # 0-based positions in the ascending-Re ordering
    overlap: float


@dataclass
class SpectrumCurve:
    """Continuity-ordered eigenvalue branches over an s grid."""

    s_values: np.ndarray
    energies: np.ndarray      # (n_points, dim) complex, branch j is column j
    broken_pairs: np.ndarray  # (n_points,) int

    def phase(self, i: int) -> Phase:
        return Phase(int(self.broken_pairs[i]))


def eigenvalues(op: np.ndarray) -> np.ndarray:
    """All eigenvalues of a dense square matrix, unordered.

    Each returned value is validated against the characteristic polynomial:
    |det(op - E I)| must stay below TAU_RES * max(1, ||op||) (checked for
    dim <= 8, where the determinant scale is comparable to the matrix norm).
    """
    dim = op.shape[0]
    if op.shape != (dim, dim):
        raise ValueError(f"operator must be square, got shape {op.shape}")
    if dim > MAX_DIM:
        raise ValueError(f"dense solve limited to dim <= {MAX_DIM}, got {dim}")
    try:
        eigs = np.linalg.eigvals(op)
    except np.linalg.LinAlgError as exc:
        raise SpectrumError(f"eigensolver did not converge on\n{op!r}") from exc
    if dim <= 8:
        scale = max(1.0, np.linalg.norm(op, np.inf))
        eye = np.eye(dim)
        for e in eigs:
            res = abs(np.linalg.det(op - e * eye))
            if res > TAU_RES * scale:
                raise SpectrumError(
                    f"eigenvalue {e} has residual |det(H - E I)| = {res:.3e} "
                    f"above {TAU_RES * scale:.3e} for\n{op!r}"
                )
    return eigs


def secular_coefficients(params: ChainParams, s: float) -> tuple[float, float, float]:
    """Coefficients (c2, c1, c0) of the two-qubit quartic E^4 + c2 E^2 + c1 E + c0."""
    if params.n_qubits != 2:
        raise ValueError("the closed-form quartic applies to n_qubits = 2 only")
    d, g, eps, gam = params.delta, params.g, params.epsilon, params.gamma
    c2 = 4 * gam**2 - d**2 * (1 - s) ** 2 - s**2 * (g**2 + eps**2)
    c1 = -(d**2) * g * s * (1 - s) ** 2
    c0 = s**2 * eps**2 * (g**2 * s**2 - 4 * gam**2)
    return c2, c1, c0


def secular_residual(params: ChainParams, s: float, energy: complex) -> float:
    """Magnitude of the two-qubit quartic characteristic polynomial at ``energy``.

    Vanishes (to TAU_RES) exactly when ``energy`` is an eigenvalue of H(s).
    """
    c2, c1, c0 = secular_coefficients(params, s)
    e = complex(energy)
    return abs(e**4 + c2 * e**2 + c1 * e + c0)


def conjugation_residual(eigs: np.ndarray) -> float:
    """Max matched distance between the eigenvalue multiset and its conjugate.

    Pairing by optimal assignment, not by sorting: conjugate pairs whose real
    parts agree only to rounding would otherwise be cross-paired.
    """
    conj = np.conj(eigs)
    cost = np.abs(eigs[:, None] - conj[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(np.max(cost[rows, cols]))


def _snap_degenerate_clusters(eigs: np.ndarray, scale: float) -> np.ndarray:
    """Replace eigenvalues inside defective-noise clusters by the cluster mean.

    Individual eigenvalues of a Jordan-type degeneracy carry O(eps^(1/m))
    numerical scatter, far above rounding, but the cluster mean equals the
    block trace and is accurate to rounding; snapping restores the
    real-or-conjugate-pair structure at such points.
    """
    thresh = 4.0 * float(np.finfo(float).eps) ** 0.25 * scale
    n = len(eigs)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(eigs[i] - eigs[j]) < thresh:
                parent[find(i)] = find(j)
    snapped = eigs.astype(complex).copy()
    for root in set(find(i) for i in range(n)):
        members = [i for i in range(n) if find(i) == root]
        if len(members) > 1:
            snapped[members] = eigs[members].mean()
    return snapped


def classify_phase(eigs: np.ndarray, tol: float | None = None) -> Phase:
    """Count complex-conjugate eigenvalue pairs with |Im E| above tolerance.

    Eigenvalues closer than the defective-degeneracy noise floor are
    classified through their cluster mean.  Raises SpectrumError if the
    multiset is not closed under conjugation, which signals an eigensolver
    failure or a non-symmetric input.
    """
    eigs = np.asarray(eigs, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(eigs))) if eigs.size else 1.0)
    if tol is None:
        tol = TAU_IM * scale
    snapped = _snap_degenerate_clusters(eigs, scale)
    closure = conjugation_residual(snapped)
    if closure > max(TAU_CONJ, 2 * tol):
        raise SpectrumError(f"eigenvalues not conjugation-closed (residual {closure:.3e})")
    n_complex = int(np.sum(np.abs(snapped.imag) >= tol))
    return Phase(n_complex // 2)


def _match_order(prev: np.ndarray, cur: np.ndarray, scale: float, where: str) -> np.ndarray:
    """Permutation of ``cur`` minimizing total distance to ``prev``.

    Flags an ambiguity when swapping two assigned branches costs less than
    TAU_MATCH * scale even though the branches are well separated at both
    grid points.  Pairs that are degenerate (crossing, exceptional point) or
    mutual complex conjugates (entry/exit of a broken region, where the sign
    of the imaginary part is a labelling convention) swap at zero cost by
    symmetry and are not tracking failures.
    """
    cost = np.abs(prev[:, None] - cur[None, :])
    rows, cols = linear_sum_assignment(cost)
    perm = np.empty_like(cols)
    perm[rows] = cols
    tau = TAU_MATCH * scale

    def distinct(u, v):
        return abs(u - v) > 1e3 * tau and abs(u - np.conj(v)) > 1e3 * tau

    n = len(prev)
    for a in range(n):
        for b in range(a + 1, n):
            margin = (
                cost[a, perm[b]] + cost[b, perm[a]] - cost[a, perm[a]] - cost[b, perm[b]]
            )
            separated = distinct(cur[perm[a]], cur[perm[b]]) and distinct(prev[a], prev[b])
            if margin < tau and separated:
                raise AmbiguousBranchError(
                    f"branch matching ambiguous at {where} (swap margin {margin:.3e}); "
                    "refine the grid"
                )
    return cur[perm]


def spectrum_sweep(params: ChainParams, s_grid: np.ndarray) -> SpectrumCurve:
    """Eigenvalues of H(s) on a grid, reordered into continuous branches.

    Branch 0 at the first grid point is the lowest by real part; subsequent
    points are matched to the previous point by nearest-neighbour assignment
    in the complex plane.
    """
    s_grid = np.asarray(s_grid, dtype=float)
    if s_grid.ndim != 1 or len(s_grid) < 2 or np.any(np.diff(s_grid) <= 0):
        raise ValueError("s_grid must be a strictly increasing 1-d array")
    dim = params.dim
    energies = np.empty((len(s_grid), dim), dtype=complex)
    broken = np.empty(len(s_grid), dtype=int)
    scale = 1.0
    for i, s in enumerate(s_grid):
        eigs = eigenvalues(build_hamiltonian(params, s))
        scale = max(scale, float(np.max(np.abs(eigs))))
        if i == 0:
            order = np.lexsort((np.imag(eigs), np.real(eigs)))
            energies[0] = eigs[order]
        else:
            energies[i] = _match_order(energies[i - 1], eigs, scale, f"s={s:.6g}")
        broken[i] = classify_phase(energies[i]).broken_pairs
    return SpectrumCurve(s_values=s_grid, energies=energies, broken_pairs=broken)


def crossing_point(params: ChainParams) -> tuple[float, float]:
    """Location (s_cr, E_cr) where the two lowest Hermitian levels intersect.

    Uses the closed form s_cr = delta / (delta + sqrt(2 (g^2 - epsilon^2))),
    an algebraic rearrangement of the quartic's double-root condition that
    stays finite at 2 (g^2 - epsilon^2) = delta^2, and E_cr = -g * s_cr.
    The gain/loss parameter does not enter.  Requires |epsilon| < |g|.
    """
    if params.n_qubits != 2:
        raise ValueError("the crossing-point closed form applies to n_qubits = 2 only")
    g, eps, d = params.g, params.epsilon, params.delta
    if abs(eps) >= abs(g):
        raise NoCrossingError(
            f"no crossing of the two lowest levels for |epsilon|={abs(eps)} >= |g|={abs(g)}"
        )
    s_cr = d / (d + np.sqrt(2.0 * (g**2 - eps**2)))
    return float(s_cr), float(-g * s_cr)


def _broken_pair_count(params: ChainParams, s: float, scale: float) -> int:
    eigs = eigenvalues(build_hamiltonian(params, s))
    return classify_phase(eigs, tol=TAU_IM * scale).broken_pairs


def _coalescing_pair(params: ChainParams, s: float):
    """Closest eigenvalue pair and their eigenvector overlap at a candidate EP."""
    h = build_hamiltonian(params, s)
    eigs, vecs = np.linalg.eig(h)
    order = np.lexsort((np.imag(eigs), np.real(eigs)))
    eigs, vecs = eigs[order], vecs[:, order]
    dim = len(eigs)
    best = None
    for a in range(dim):
        for b in range(a + 1, dim):
            gap = abs(eigs[a] - eigs[b])
            if best is None or gap < best[0]:
                best = (gap, a, b)
    gap, a, b = best
    overlap = abs(np.vdot(vecs[:, a], vecs[:, b])) / (
        np.linalg.norm(vecs[:, a]) * np.linalg.norm(vecs[:, b])
    )
    return gap, a, b, 0.5 * (eigs[a] + eigs[b]), float(overlap)


def find_exceptional_points(
    params: ChainParams,
    s_range: tuple[float, float] = (0.0, 1.0),
    scan_points: int = 2001,
) -> list[ExceptionalPoint]:
    """Locate all second-order exceptional points of H(s) inside ``s_range``.

    The broken-pair count is scanned on a uniform grid; each change is
    refined by bisection to a bracket below TAU_S_EP and validated by the
    coalescence of the closest eigenvalue pair (gap below TAU_EP_GAP,
    eigenvector overlap above EP_OVERLAP_MIN).  Broken regions narrower than
    the scan step are missed; raise ``scan_points`` to resolve them.
    """
    if params.gamma == 0.0:
        return []
    lo, hi = s_range
    ss = np.linspace(lo, hi, scan_points)
    scale = max(
        1.0,
        float(np.max(np.abs(eigenvalues(build_hamiltonian(params, lo))))),
        float(np.max(np.abs(eigenvalues(build_hamiltonian(params, hi))))),
    )
    counts = [_broken_pair_count(params, s, scale) for s in ss]
    found = []
    for i in range(scan_points - 1):
        if counts[i] == counts[i + 1]:
            continue
        a, b, ca = ss[i], ss[i + 1], counts[i]
        while b - a > TAU_S_EP:
            mid = 0.5 * (a + b)
            if _broken_pair_count(params, mid, scale) == ca:
                a = mid
            else:
                b = mid
        s_ep = 0.5 * (a + b)
        gap, ia, ib, energy, overlap = _coalescing_pair(params, s_ep)
        # near higher-order degeneracies the splitting grows faster than
        # sqrt(bracket); keep halving toward float resolution until the
        # colliding pair is actually tight
        floor = max(1e-15, 8 * np.finfo(float).eps * max(abs(a), abs(b)))
        while gap > TAU_EP_GAP * scale and b - a > floor:
            mid = 0.5 * (a + b)
            if _broken_pair_count(params, mid, scale) == ca:
                a = mid
            else:
                b = mid
            s_ep = 0.5 * (a + b)
            gap, ia, ib, energy, overlap = _coalescing_pair(params, s_ep)
        if gap > TAU_EP_GAP * scale:
            raise SpectrumError(
                f"phase boundary at s={s_ep:.9f} shows no eigenvalue coalescence "
                f"(gap {gap:.3e}); eigensolver or phase classification is inconsistent"
            )
        if overlap < EP_OVERLAP_MIN:
            # degenerate but diagonalizable (e.g. the double level at s=0):
            # a phase boundary yet not a second-order exceptional point
            continue
        found.append(
            ExceptionalPoint(s=float(s_ep), energy=complex(energy), branch_pair=(ia, ib), overlap=overlap)
        )
    return found

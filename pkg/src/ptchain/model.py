"""Hamiltonians, symmetry transforms, and initial states for XX-coupled qubit chains.

The chain interpolates between a transverse-field Hamiltonian at s=0 and an
XX-coupling-plus-bias Hamiltonian at s=1, with a staggered imaginary
longitudinal field of strength ``gamma`` that is held constant along the
interpolation.  All energies are expressed in units of the transition
amplitude ``delta``; computational basis order is |up,up>, |up,down>,
|down,up>, |down,down> with sigma_z |up> = +|up>.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_ID2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class ChainParams:
    """Physical parameters of the chain, in units of the transition amplitude.

    ``coupling`` maps qubit-pair distance |n - m| to the XX interaction
    strength; a bare float is shorthand for nearest-neighbour coupling only.
    """

    n_qubits: int
    epsilon: float = 0.0
    gamma: float = 0.0
    coupling: dict[int, float] | float = field(default_factory=lambda: {1: 1.0})
    delta: float = 1.0

    def __post_init__(self):
        if not isinstance(self.n_qubits, (int, np.integer)) or self.n_qubits < 1:
            raise ValueError(f"n_qubits must be a positive integer, got {self.n_qubits!r}")
        if isinstance(self.coupling, (int, float, np.floating)):
            object.__setattr__(self, "coupling", {1: float(self.coupling)})
        for d, val in self.coupling.items():
            if d < 1 or not np.isfinite(val):
                raise ValueError(f"bad coupling entry {d}: {val}")
        for name in ("epsilon", "gamma", "delta"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")
        if self.n_qubits % 2 == 1 and self.gamma != 0:
            # staggered gain/loss balances out only for an even number of qubits
            warnings.warn(
                f"n_qubits={self.n_qubits} is odd: the staggered imaginary field is "
                "unbalanced and the parity-time symmetry of the model is not guaranteed",
                stacklevel=2,
            )

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    @property
    def g(self) -> float:
        """Nearest-neighbour coupling strength."""
        return self.coupling.get(1, 0.0)

    def hermitian(self) -> "ChainParams":
        """Copy with the gain/loss switched off."""
        return replace(self, gamma=0.0)


def pauli_operator(axis: str, qubit_index: int, n_qubits: int) -> np.ndarray:
    """Embed a single-qubit Pauli matrix into the 2**n chain Hilbert space.

    ``qubit_index`` is 1-based; qubit 1 is the leftmost tensor factor.
    """
    if axis not in PAULI:
        raise ValueError(f"axis must be one of 'x', 'y', 'z', got {axis!r}")
    if not 1 <= qubit_index <= n_qubits:
        raise IndexError(f"qubit_index {qubit_index} out of range for {n_qubits} qubits")
    op = np.array([[1.0]], dtype=complex)
    for i in range(1, n_qubits + 1):
        op = np.kron(op, PAULI[axis] if i == qubit_index else _ID2)
    return op


def build_hamiltonian(params: ChainParams, s: float) -> np.ndarray:
    """Chain Hamiltonian at interpolation parameter s.

    H(s) = (1-s) * sum_n (delta/2) sigma_n^x
         + s * [ sum_{n<m} g(|n-m|)/2 (sigma_n^x sigma_m^x + sigma_n^y sigma_m^y)
                 + sum_n (epsilon/2) sigma_n^z ]
         + sum_n (-1)^n i gamma sigma_n^z

    Values of s outside [0, 1] are allowed for diagnostics but flagged.
    """
    if not np.isfinite(s):
        raise ValueError("s must be finite")
    if s < 0.0 or s > 1.0:
        warnings.warn(f"s={s} lies outside the interpolation range [0, 1]", stacklevel=2)
    n = params.n_qubits
    dim = params.dim
    h = np.zeros((dim, dim), dtype=complex)
    for q in range(1, n + 1):
        h += (1.0 - s) * 0.5 * params.delta * pauli_operator("x", q, n)
        h += s * 0.5 * params.epsilon * pauli_operator("z", q, n)
        h += (-1.0) ** q * 1j * params.gamma * pauli_operator("z", q, n)
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            strength = params.coupling.get(b - a)
            if strength:
                h += s * 0.5 * strength * (
                    pauli_operator("x", a, n) @ pauli_operator("x", b, n)
                    + pauli_operator("y", a, n) @ pauli_operator("y", b, n)
                )
    return h


def exchange_permutation(n_qubits: int) -> np.ndarray:
    """Permutation matrix reversing the qubit order (j <-> n_qubits + 1 - j)."""
    dim = 2**n_qubits
    perm = np.zeros((dim, dim))
    for idx in range(dim):
        bits = format(idx, f"0{n_qubits}b")
        perm[int(bits[::-1], 2), idx] = 1.0
    return perm


def pt_transform(op: np.ndarray, n_qubits: int) -> np.ndarray:
    """Apply the combined parity (qubit exchange) and time-reversal (complex
    conjugation) transformation to an operator.

    For two qubits this is the exchange j <-> 3 - j; chains with more qubits
    use the full reversal, which reduces to the same map at n_qubits = 2.
    """
    dim = 2**n_qubits
    if op.shape != (dim, dim):
        raise ValueError(f"operator shape {op.shape} does not match {n_qubits} qubits")
    perm = exchange_permutation(n_qubits)
    return perm @ np.conj(op) @ perm.T


def initial_ground_state(params: ChainParams) -> np.ndarray:
    """Normalized ground state of the Hermitian s=0 Hamiltonian.

    The s=0 Hamiltonian is a sum of single-qubit sigma_x terms, so the ground
    state is the product of single-qubit sigma_x ground states (1, -1)/sqrt(2).
    Built analytically to keep the initial condition solver-independent.
    """
    single = np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0)
    psi = np.array([1.0], dtype=complex)
    for _ in range(params.n_qubits):
        psi = np.kron(psi, single)
    return psi

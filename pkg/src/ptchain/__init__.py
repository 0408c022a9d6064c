"""Simulator for chains of XX-coupled qubits with balanced gain and loss.

Covers instantaneous complex spectra and their symmetry phases, exceptional
points, the two-level reduction around the lowest-level crossing, static and
driven (annealing) dynamics, the closed-form sweep transition probability,
and the full ground-state-preparation pipeline, plus a sweep/CSV/SVG layer
and CLI for regenerating figure data.
"""

__version__ = "0.1.0"

from .annealing import QaaResult, ground_probability, hermitian_eigenbasis, run_qaa
from .dynamics import (
    Constant,
    Linear,
    Trajectory,
    evolve_driven,
    evolve_static,
    populations,
)
from .effective import (
    EffectiveModel,
    effective_eigenvalues,
    effective_gap,
    effective_hamiltonian,
    effective_params,
)
from .lzs import LzsResult, lzs_probability, lzs_validity
from .model import (
    ChainParams,
    build_hamiltonian,
    initial_ground_state,
    pauli_operator,
    pt_transform,
)
from .spectrum import (
    ExceptionalPoint,
    NoCrossingError,
    Phase,
    SpectrumCurve,
    classify_phase,
    crossing_point,
    eigenvalues,
    find_exceptional_points,
    secular_residual,
    spectrum_sweep,
)
from .sweep_io import (
    Axis,
    ConfigError,
    ResultTable,
    SweepJob,
    emit_csv,
    emit_heatmap_svg,
    emit_lineplot_svg,
    job_from_dict,
    run_sweep,
)

__all__ = [
    "__version__",
    "Axis",
    "ChainParams",
    "ConfigError",
    "Constant",
    "EffectiveModel",
    "ExceptionalPoint",
    "Linear",
    "LzsResult",
    "NoCrossingError",
    "Phase",
    "QaaResult",
    "ResultTable",
    "SpectrumCurve",
    "SweepJob",
    "Trajectory",
    "build_hamiltonian",
    "classify_phase",
    "crossing_point",
    "effective_eigenvalues",
    "effective_gap",
    "effective_hamiltonian",
    "effective_params",
    "eigenvalues",
    "emit_csv",
    "emit_heatmap_svg",
    "emit_lineplot_svg",
    "evolve_driven",
    "evolve_static",
    "find_exceptional_points",
    "ground_probability",
    "hermitian_eigenbasis",
    "initial_ground_state",
    "job_from_dict",
    "lzs_probability",
    "lzs_validity",
    "pauli_operator",
    "populations",
    "pt_transform",
    "run_qaa",
    "run_sweep",
    "secular_residual",
    "spectrum_sweep",
]

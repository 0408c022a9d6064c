"""Parameter-sweep engine, CSV/SVG emission, and the JSON job format.

A SweepJob names a target quantity, a model variant, fixed parameters, and
up to two swept axes.  Grid points are pure independent evaluations; rows
are assembled in grid order (first axis outer), so output is deterministic
and byte-identical across reruns regardless of worker count.  Failed points
carry a message in the ``error`` column instead of being dropped.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .annealing import run_qaa
from .dynamics import (
    ODE_ATOL,
    ODE_RTOL,
    Linear,
    default_initial_state,
    default_span,
    evolve_static,
    evolve_driven,
)
from .effective import effective_eigenvalues, effective_gap, effective_hamiltonian, effective_params
from .lzs import V_MIN, lzs_probability
from .model import ChainParams, build_hamiltonian
from .spectrum import (
    TAU_CONJ,
    TAU_EP_GAP,
    TAU_IM,
    TAU_RES,
    TAU_S_EP,
    classify_phase,
    eigenvalues,
    find_exceptional_points,
    _match_order,
)

TARGETS = ("spectrum", "static", "driven", "lzs", "qaa", "ep")
MODELS = ("full", "effective")
AXIS_NAMES = ("gamma", "k", "epsilon", "s", "s_tilde0")
FIXED_KEYS = ("n_qubits", "delta", "epsilon", "gamma", "g", "k", "s", "s_tilde0")
MAX_EP_COLUMNS = 6

TOLERANCES = {
    "ode_rtol": ODE_RTOL,
    "ode_atol": ODE_ATOL,
    "tau_conj": TAU_CONJ,
    "tau_res": TAU_RES,
    "tau_im": TAU_IM,
    "tau_s_ep": TAU_S_EP,
    "tau_ep_gap": TAU_EP_GAP,
    "lzs_v_min": V_MIN,
}


class ConfigError(ValueError):
    """Invalid job configuration; rejected before any evaluation."""


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    count: int
    spacing: str = "linear"

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ConfigError(f"unknown axis {self.name!r}; expected one of {AXIS_NAMES}")
        if self.spacing not in ("linear", "log"):
            raise ConfigError(f"axis {self.name}: spacing must be 'linear' or 'log'")
        if self.count < 2:
            raise ConfigError(f"axis {self.name}: count must be >= 2")
        if not self.lo < self.hi:
            raise ConfigError(f"axis {self.name}: min must be < max")
        if self.spacing == "log" and self.lo <= 0:
            raise ConfigError(f"axis {self.name}: log spacing requires min > 0")

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.lo, self.hi, self.count)
        return np.linspace(self.lo, self.hi, self.count)


@dataclass
class SweepJob:
    target: str
    model: str = "full"
    fixed: dict = field(default_factory=dict)
    axes: list[Axis] = field(default_factory=list)
    outputs: list[str] | None = None
    time_max: float = 200.0
    time_count: int = 2001
    drive_count: int = 501
    ep_range: tuple[float, float] = (0.0, 1.0)
    ep_scan: int = 2001

    def __post_init__(self):
        if self.target not in TARGETS:
            raise ConfigError(f"unknown target {self.target!r}; expected one of {TARGETS}")
        if self.model not in MODELS:
            raise ConfigError(f"unknown model {self.model!r}; expected one of {MODELS}")
        for key, val in self.fixed.items():
            if key not in FIXED_KEYS:
                raise ConfigError(f"unknown fixed parameter {key!r}; expected one of {FIXED_KEYS}")
            if not np.isfinite(val):
                raise ConfigError(f"fixed parameter {key} = {val} is not finite")
        if len(self.axes) > 2:
            raise ConfigError("at most two axes are supported")
        names = [ax.name for ax in self.axes]
        if len(set(names)) != len(names):
            raise ConfigError(f"duplicate axis names {names}")
        for ax in self.axes:
            if ax.name in self.fixed:
                raise ConfigError(f"{ax.name} appears both as an axis and as a fixed value")
        self._validate_target()

    def _validate_target(self):
        names = {ax.name for ax in self.axes}
        if self.target == "spectrum":
            wanted = "s" if self.model == "full" else "s_tilde0"
            sweep_names = names - {wanted}
            if wanted not in names:
                raise ConfigError(f"spectrum target needs a {wanted!r} axis for model {self.model!r}")
            if not sweep_names <= {"gamma", "epsilon"}:
                raise ConfigError(f"spectrum second axis must be gamma or epsilon, got {sweep_names}")
        elif self.target == "static":
            if self.axes:
                raise ConfigError("static target produces a time trajectory and takes no axes")
            if self.model == "full" and "s" not in self.fixed:
                raise ConfigError("static target with the full model requires fixed 's'")
        elif self.target == "driven":
            if not names <= {"gamma", "k", "epsilon"}:
                raise ConfigError(f"driven axes must be among gamma, k, epsilon; got {names}")
            if "k" not in names and "k" not in self.fixed:
                raise ConfigError("driven target requires a sweep speed k (fixed or axis)")
        elif self.target == "lzs":
            if self.model != "effective":
                raise ConfigError("lzs target uses the reduced two-level model; set model='effective'")
            if not names <= {"gamma", "k", "epsilon"}:
                raise ConfigError(f"lzs axes must be among gamma, k, epsilon; got {names}")
            if "k" not in names and "k" not in self.fixed:
                raise ConfigError("lzs target requires a sweep speed k (fixed or axis)")
        elif self.target == "qaa":
            if self.model != "full":
                raise ConfigError("qaa target drives the full chain; set model='full'")
            if not names <= {"gamma", "k", "epsilon"}:
                raise ConfigError(f"qaa axes must be among gamma, k, epsilon; got {names}")
            if "k" not in names and "k" not in self.fixed:
                raise ConfigError("qaa target requires a sweep speed k (fixed or axis)")
        elif self.target == "ep":
            if not names <= {"gamma", "epsilon"}:
                raise ConfigError(f"ep axes must be among gamma, epsilon; got {names}")


def job_from_dict(data: dict) -> SweepJob:
    """Strict JSON-shaped dict -> SweepJob; unknown keys are rejected."""
    if not isinstance(data, dict):
        raise ConfigError(f"job must be an object, got {type(data).__name__}")
    known = {"target", "model", "fixed", "axes", "outputs", "time", "drive", "ep"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown job keys {sorted(unknown)}; expected a subset of {sorted(known)}")
    if "target" not in data:
        raise ConfigError("job is missing the required 'target' key")
    axes = []
    for entry in data.get("axes", []):
        extra = set(entry) - {"name", "min", "max", "count", "spacing"}
        if extra:
            raise ConfigError(f"unknown axis keys {sorted(extra)}")
        axes.append(
            Axis(
                name=entry["name"],
                lo=float(entry["min"]),
                hi=float(entry["max"]),
                count=int(entry["count"]),
                spacing=entry.get("spacing", "linear"),
            )
        )
    kwargs = {}
    time_spec = data.get("time", {})
    if set(time_spec) - {"max", "count"}:
        raise ConfigError(f"unknown time keys {sorted(set(time_spec) - {'max', 'count'})}")
    if "max" in time_spec:
        kwargs["time_max"] = float(time_spec["max"])
    if "count" in time_spec:
        kwargs["time_count"] = int(time_spec["count"])
    drive_spec = data.get("drive", {})
    if set(drive_spec) - {"count"}:
        raise ConfigError(f"unknown drive keys {sorted(set(drive_spec) - {'count'})}")
    if "count" in drive_spec:
        kwargs["drive_count"] = int(drive_spec["count"])
    ep_spec = data.get("ep", {})
    if set(ep_spec) - {"min", "max", "scan"}:
        raise ConfigError(f"unknown ep keys {sorted(set(ep_spec) - {'min', 'max', 'scan'})}")
    if "min" in ep_spec or "max" in ep_spec:
        kwargs["ep_range"] = (float(ep_spec.get("min", 0.0)), float(ep_spec.get("max", 1.0)))
    if "scan" in ep_spec:
        kwargs["ep_scan"] = int(ep_spec["scan"])
    return SweepJob(
        target=data["target"],
        model=data.get("model", "full"),
        fixed={k: float(v) if k != "n_qubits" else int(v) for k, v in data.get("fixed", {}).items()},
        axes=axes,
        outputs=list(data["outputs"]) if data.get("outputs") is not None else None,
        **kwargs,
    )


def job_to_dict(job: SweepJob) -> dict:
    return {
        "target": job.target,
        "model": job.model,
        "fixed": dict(job.fixed),
        "axes": [
            {"name": ax.name, "min": ax.lo, "max": ax.hi, "count": ax.count, "spacing": ax.spacing}
            for ax in job.axes
        ],
        "outputs": job.outputs,
        "time": {"max": job.time_max, "count": job.time_count},
        "drive": {"count": job.drive_count},
        "ep": {"min": job.ep_range[0], "max": job.ep_range[1], "scan": job.ep_scan},
    }


@dataclass
class ResultTable:
    columns: list[str]
    rows: list[list]
    meta: dict


def _params_from(point: dict) -> ChainParams:
    return ChainParams(
        n_qubits=int(point.get("n_qubits", 2)),
        epsilon=point.get("epsilon", 0.0),
        gamma=point.get("gamma", 0.0),
        coupling=point.get("g", 1.0),
        delta=point.get("delta", 1.0),
    )


def _population_names(dim: int, suffix: str = "") -> list[str]:
    if dim == 2:
        names = ["p_up", "p_down"]
    elif dim == 4:
        names = ["p_uu", "p_ud", "p_du", "p_dd"]
    else:
        names = [f"p_{i}" for i in range(dim)]
    return [n + suffix for n in names]


# ---------------------------------------------------------------------------
# per-point evaluators (top level so grids can run in worker processes)

def _eval_driven(core: dict, point: dict) -> dict:
    params = _params_from(point)
    k = point["k"]
    if core["model"] == "effective":
        model = effective_params(params)
    else:
        model = params
    lo, hi = default_span(model)
    traj = evolve_driven(model, Linear(k), grid=np.linspace(lo, hi, core["drive_count"]))
    pops = traj.populations[-1]
    out = dict(zip(_population_names(len(pops), "_final"), map(float, pops)))
    out["log2_scale"] = int(traj.log2_scale[-1])
    return out


def _eval_lzs(core: dict, point: dict) -> dict:
    eff = effective_params(_params_from(point))
    res = lzs_probability(eff, point["k"])
    return {
        "p_ground": res.p_ground,
        "exponent": res.exponent,
        "validity": res.validity,
        "valid": int(res.validity >= V_MIN),
    }


def _eval_qaa(core: dict, point: dict) -> dict:
    result = run_qaa(_params_from(point), point["k"])
    weights = np.abs(result.coefficients) ** 2
    out = {"p_ground": result.p_ground}
    for i, wgt in enumerate(weights, start=1):
        out[f"a{i}_abs2"] = float(wgt)
    out["near_degenerate"] = int(result.near_degenerate_ground)
    return out


def _eval_ep_grid(core: dict, point: dict) -> dict:
    eps_found = find_exceptional_points(
        _params_from(point), s_range=tuple(core["ep_range"]), scan_points=core["ep_scan"]
    )
    out = {"n_eps": len(eps_found)}
    for i in range(MAX_EP_COLUMNS):
        out[f"s_ep_{i + 1}"] = eps_found[i].s if i < len(eps_found) else float("nan")
    return out


_GRID_EVALUATORS = {
    "driven": _eval_driven,
    "lzs": _eval_lzs,
    "qaa": _eval_qaa,
    "ep": _eval_ep_grid,
}


def _evaluate_point(payload):
    core, point = payload
    try:
        return _GRID_EVALUATORS[core["target"]](core, point), ""
    except Exception as exc:  # recorded per row, never dropped
        return None, f"{type(exc).__name__}: {exc}"


def _grid_columns(job: SweepJob) -> list[str]:
    if job.target == "driven":
        dim = 2 if job.model == "effective" else 2 ** int(job.fixed.get("n_qubits", 2))
        return _population_names(dim, "_final") + ["log2_scale"]
    if job.target == "lzs":
        return ["p_ground", "exponent", "validity", "valid"]
    if job.target == "qaa":
        dim = 2 ** int(job.fixed.get("n_qubits", 2))
        return ["p_ground"] + [f"a{i}_abs2" for i in range(1, dim + 1)] + ["near_degenerate"]
    if job.target == "ep":
        return ["n_eps"] + [f"s_ep_{i + 1}" for i in range(MAX_EP_COLUMNS)]
    raise ConfigError(f"target {job.target} is not a grid target")


# ---------------------------------------------------------------------------
# table builders

def _select_outputs(job: SweepJob, available: list[str]) -> list[str]:
    if job.outputs is None:
        return available
    unknown = set(job.outputs) - set(available)
    if unknown:
        raise ConfigError(f"unknown outputs {sorted(unknown)}; available: {available}")
    return [c for c in available if c in job.outputs]


def _meta(job: SweepJob, n_rows: int, n_errors: int, **extra) -> dict:
    meta = {
        "job": job_to_dict(job),
        "version": __version__,
        "tolerances": dict(TOLERANCES),
        "rows": n_rows,
        "n_errors": n_errors,
    }
    meta.update(extra)
    return meta


def _grid_table(job: SweepJob, jobs: int) -> ResultTable:
    axis_values = [ax.values() for ax in job.axes]
    shape = [len(v) for v in axis_values] or [1]
    points = []
    for flat in range(int(np.prod(shape))):
        idx = np.unravel_index(flat, shape)
        point = dict(job.fixed)
        for ax, vals, i in zip(job.axes, axis_values, idx):
            point[ax.name] = float(vals[i])
        points.append(point)
    core = {
        "target": job.target,
        "model": job.model,
        "drive_count": job.drive_count,
        "ep_range": list(job.ep_range),
        "ep_scan": job.ep_scan,
    }
    payloads = [(core, p) for p in points]
    if jobs > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunk = max(1, len(points) // (jobs * 4))
            results = list(pool.map(_evaluate_point, payloads, chunksize=chunk))
    else:
        results = [_evaluate_point(p) for p in payloads]
    out_cols = _select_outputs(job, _grid_columns(job))
    columns = [ax.name for ax in job.axes] + out_cols + ["error"]
    rows = []
    n_errors = 0
    for point, (values, err) in zip(points, results):
        row = [point[ax.name] for ax in job.axes]
        if err:
            n_errors += 1
            row += [float("nan")] * len(out_cols) + [err]
        else:
            row += [values[c] for c in out_cols] + [""]
        rows.append(row)
    extra = {}
    if job.target == "lzs" and not job.outputs:
        extra["flagged_points"] = sum(1 for _, (v, e) in zip(points, results) if not e and not v["valid"])
    return ResultTable(columns=columns, rows=rows, meta=_meta(job, len(rows), n_errors, **extra))


def _spectrum_table(job: SweepJob) -> ResultTable:
    s_name = "s" if job.model == "full" else "s_tilde0"
    s_axis = next(ax for ax in job.axes if ax.name == s_name)
    others = [ax for ax in job.axes if ax.name != s_name]
    other = others[0] if others else None
    other_values = other.values() if other else np.array([None])
    s_values = s_axis.values()

    dim = 2 if job.model == "effective" else 2 ** int(job.fixed.get("n_qubits", 2))
    branch_cols = [f"E{j}_{part}" for j in range(1, dim + 1) for part in ("re", "im")]
    extra_cols = ["omega", "decay"] if job.model == "effective" else []
    available = branch_cols + extra_cols + ["n_broken_pairs", "phase"]
    out_cols = _select_outputs(job, available)
    columns = [ax.name for ax in job.axes] + out_cols + ["error"]

    cells: dict[tuple[int, int], list] = {}
    n_errors = 0
    for io, oval in enumerate(other_values):
        point = dict(job.fixed)
        if other is not None:
            point[other.name] = float(oval)
        try:
            per_point = _spectrum_line(job, point, s_values)
        except Exception as exc:
            per_point = [(None, f"{type(exc).__name__}: {exc}")] * len(s_values)
        for i_s, (values, err) in enumerate(per_point):
            if err:
                n_errors += 1
                cells[(i_s, io)] = [float("nan")] * len(out_cols) + [err]
            else:
                cells[(i_s, io)] = [values[c] for c in out_cols] + [""]

    rows = []
    first_is_s = job.axes[0].name == s_name
    n_outer = len(s_values) if first_is_s else len(other_values)
    n_inner = len(other_values) if first_is_s else len(s_values)
    for i0 in range(n_outer):
        for i1 in range(n_inner if len(job.axes) > 1 else 1):
            i_s, io = (i0, i1) if first_is_s else (i1, i0)
            axis_vals = [float(s_values[i_s])] if len(job.axes) == 1 else (
                [float(s_values[i_s]), float(other_values[io])]
                if first_is_s
                else [float(other_values[io]), float(s_values[i_s])]
            )
            rows.append(axis_vals + cells[(i_s, io)])
    return ResultTable(columns=columns, rows=rows, meta=_meta(job, len(rows), n_errors))


def _spectrum_line(job: SweepJob, point: dict, s_values: np.ndarray) -> list:
    """Continuity-ordered spectrum rows along the sweep axis for one parameter set.

    A failing grid point carries its error and resets branch tracking; the
    remaining points still produce rows.
    """
    params = _params_from(point)
    eff = effective_params(params) if job.model == "effective" else None
    out = []
    prev = None
    scale = 1.0
    for s in s_values:
        s = float(s)
        try:
            if eff is None:
                eigs = eigenvalues(build_hamiltonian(params, s))
            else:
                eigs = effective_eigenvalues(eff, s)
            scale = max(scale, float(np.max(np.abs(eigs))))
            if prev is None:
                prev = eigs[np.lexsort((np.imag(eigs), np.real(eigs)))]
            else:
                prev = _match_order(prev, eigs, scale, f"sweep value {s:.6g}")
            values = _branch_row(prev)
            if eff is not None:
                values["omega"], values["decay"] = effective_gap(eff, s)
        except Exception as exc:
            out.append((None, f"{type(exc).__name__}: {exc}"))
            prev = None
            continue
        out.append((values, ""))
    return out


def _branch_row(branches: np.ndarray) -> dict:
    values = {}
    for j, e in enumerate(branches, start=1):
        values[f"E{j}_re"] = float(e.real)
        values[f"E{j}_im"] = float(e.imag)
    phase = classify_phase(branches)
    values["n_broken_pairs"] = phase.broken_pairs
    values["phase"] = str(phase)
    return values


def _static_table(job: SweepJob) -> ResultTable:
    point = dict(job.fixed)
    params = _params_from(point)
    if job.model == "effective":
        eff = effective_params(params)
        h = effective_hamiltonian(eff, point.get("s_tilde0", 0.0))
    else:
        h = build_hamiltonian(params, point["s"])
    t_grid = np.linspace(0.0, job.time_max, job.time_count)
    traj = evolve_static(h, default_initial_state(eff if job.model == "effective" else params), t_grid)
    return _trajectory_table(job, "t", traj, {})


def _driven_trajectory_table(job: SweepJob) -> ResultTable:
    point = dict(job.fixed)
    params = _params_from(point)
    model = effective_params(params) if job.model == "effective" else params
    lo, hi = default_span(model)
    grid = np.linspace(lo, hi, job.drive_count)
    traj = evolve_driven(model, Linear(point["k"]), grid=grid)
    extra = {}
    if job.model == "effective":
        extra["s"] = grid + model.s_cr
    return _trajectory_table(job, "s_tilde" if job.model == "effective" else "s", traj, extra)


def _trajectory_table(job: SweepJob, grid_name: str, traj, extra_cols: dict) -> ResultTable:
    pops = traj.populations
    raw = traj.raw_norm
    pop_names = _population_names(pops.shape[1])
    available = list(extra_cols) + pop_names + ["raw_norm", "log2_scale"]
    out_cols = _select_outputs(job, available)
    columns = [grid_name] + out_cols + ["error"]
    rows = []
    for i, x in enumerate(traj.grid):
        values = {name: float(col[i]) for name, col in extra_cols.items()}
        values.update(zip(pop_names, map(float, pops[i])))
        values["raw_norm"] = float(raw[i])
        values["log2_scale"] = int(traj.log2_scale[i])
        rows.append([float(x)] + [values[c] for c in out_cols] + [""])
    return ResultTable(columns=columns, rows=rows, meta=_meta(job, len(rows), 0))


def _ep_list_table(job: SweepJob) -> ResultTable:
    params = _params_from(dict(job.fixed))
    found = find_exceptional_points(params, s_range=job.ep_range, scan_points=job.ep_scan)
    columns = ["s_ep", "energy_re", "energy_im", "branch_lo", "branch_hi", "overlap", "error"]
    rows = [
        [ep.s, ep.energy.real, ep.energy.imag, ep.branch_pair[0], ep.branch_pair[1], ep.overlap, ""]
        for ep in found
    ]
    return ResultTable(columns=columns, rows=rows, meta=_meta(job, len(rows), 0, n_eps=len(found)))


def run_sweep(job: SweepJob, jobs: int = 1) -> ResultTable:
    """Evaluate a job on its grid and return the assembled table.

    ``jobs`` > 1 evaluates grid points in worker processes; the output is
    identical to the serial result.
    """
    if job.target == "spectrum":
        return _spectrum_table(job)
    if job.target == "static":
        return _static_table(job)
    if job.target == "driven" and not job.axes:
        return _driven_trajectory_table(job)
    if job.target == "ep" and not job.axes:
        return _ep_list_table(job)
    if job.target in ("lzs", "qaa") and not job.axes:
        return _grid_table(job, jobs=1)
    return _grid_table(job, jobs=jobs)


# ---------------------------------------------------------------------------
# emission

def _format_cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def emit_csv(table: ResultTable, path) -> None:
    """RFC-4180 CSV with a header row; reals carry 17 significant digits.

    Metadata goes to a sidecar named like the CSV with a .meta.json suffix.
    """
    import csv

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_format_cell(v) for v in row])
    sidecar = path.with_name(path.stem + ".meta.json")
    with open(sidecar, "w", encoding="utf-8") as fh:
        json.dump(table.meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


_VIRIDIS = [(68, 1, 84), (59, 82, 139), (33, 145, 140), (94, 201, 98), (253, 231, 37)]


def _color(frac: float) -> str:
    frac = min(1.0, max(0.0, frac))
    pos = frac * (len(_VIRIDIS) - 1)
    i = min(int(pos), len(_VIRIDIS) - 2)
    t = pos - i
    rgb = [round(a + (b - a) * t) for a, b in zip(_VIRIDIS[i], _VIRIDIS[i + 1])]
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def _column(table: ResultTable, name: str) -> list:
    try:
        idx = table.columns.index(name)
    except ValueError:
        raise ValueError(f"no column {name!r}; available: {table.columns}") from None
    return [row[idx] for row in table.rows]


_SVG_HEAD = '<?xml version="1.0" encoding="UTF-8"?>\n<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">\n'


def emit_heatmap_svg(table: ResultTable, x_col: str, y_col: str, z_col: str, path) -> None:
    """Self-contained SVG heatmap of z over the (x, y) grid with a color bar.

    The table must contain every (x, y) combination exactly once.  Cells are
    drawn in table row order; failed points (NaN z) are grey.
    """
    xs = _column(table, x_col)
    ys = _column(table, y_col)
    zs = [float(z) for z in _column(table, z_col)]
    x_levels = sorted(set(xs))
    y_levels = sorted(set(ys))
    seen = {}
    for x, y in zip(xs, ys):
        key = (x, y)
        if key in seen:
            raise ValueError(f"duplicate grid cell {key}; table is not grid-complete")
        seen[key] = True
    if len(seen) != len(x_levels) * len(y_levels):
        raise ValueError(
            f"table is not grid-complete in ({x_col}, {y_col}): "
            f"{len(seen)} cells for a {len(x_levels)}x{len(y_levels)} grid"
        )
    finite = [z for z in zs if np.isfinite(z)]
    z_lo = min(finite) if finite else 0.0
    z_hi = max(finite) if finite else 0.0
    degenerate = not finite or z_hi == z_lo

    left, top, plot_w, plot_h = 70, 16, 480, 360
    bar_x = left + plot_w + 24
    width, height = bar_x + 76, top + plot_h + 48
    cell_w = plot_w / len(x_levels)
    cell_h = plot_h / len(y_levels)
    x_index = {v: i for i, v in enumerate(x_levels)}
    y_index = {v: i for i, v in enumerate(y_levels)}

    parts = [_SVG_HEAD.format(w=width, h=height)]
    parts.append(f'<rect width="{width}" height="{height}" fill="white"/>\n')
    for x, y, z in zip(xs, ys, zs):
        if not np.isfinite(z):
            fill = "#cccccc"
        elif degenerate:
            fill = _color(0.5)
        else:
            fill = _color((z - z_lo) / (z_hi - z_lo))
        px = left + x_index[x] * cell_w
        py = top + (len(y_levels) - 1 - y_index[y]) * cell_h
        parts.append(
            f'<rect x="{px:.2f}" y="{py:.2f}" width="{cell_w:.2f}" height="{cell_h:.2f}" fill="{fill}"/>\n'
        )
    parts.append(
        f'<rect x="{left}" y="{top}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>\n'
    )
    # axis labels and end-point ticks
    parts.append(
        f'<text x="{left + plot_w / 2:.1f}" y="{top + plot_h + 34}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{x_col}</text>\n'
    )
    parts.append(
        f'<text x="16" y="{top + plot_h / 2:.1f}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="13" transform="rotate(-90 16 {top + plot_h / 2:.1f})">{y_col}</text>\n'
    )
    for val, anchor, px in ((x_levels[0], "start", left), (x_levels[-1], "end", left + plot_w)):
        parts.append(
            f'<text x="{px}" y="{top + plot_h + 16}" text-anchor="{anchor}" '
            f'font-family="sans-serif" font-size="11">{val:.6g}</text>\n'
        )
    for val, py in ((y_levels[0], top + plot_h), (y_levels[-1], top + 10)):
        parts.append(
            f'<text x="{left - 4}" y="{py}" text-anchor="end" font-family="sans-serif" '
            f'font-size="11">{val:.6g}</text>\n'
        )
    # color bar
    n_seg = 64
    seg_h = plot_h / n_seg
    for i in range(n_seg):
        frac = 0.5 if degenerate else (i + 0.5) / n_seg
        py = top + plot_h - (i + 1) * seg_h
        parts.append(
            f'<rect x="{bar_x}" y="{py:.2f}" width="18" height="{seg_h + 0.5:.2f}" fill="{_color(frac)}"/>\n'
        )
    parts.append(
        f'<rect x="{bar_x}" y="{top}" width="18" height="{plot_h}" fill="none" stroke="black"/>\n'
    )
    if degenerate:
        parts.append(
            f'<text x="{bar_x + 24}" y="{top + plot_h / 2:.1f}" font-family="sans-serif" '
            f'font-size="11">{z_lo:.6g} (constant)</text>\n'
        )
    else:
        for val, py in ((z_lo, top + plot_h), (z_hi, top + 10)):
            parts.append(
                f'<text x="{bar_x + 24}" y="{py}" font-family="sans-serif" font-size="11">{val:.6g}</text>\n'
            )
    parts.append(
        f'<text x="{bar_x + 9}" y="{top + plot_h + 34}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{z_col}</text>\n'
    )
    parts.append("</svg>\n")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(parts), encoding="utf-8")


_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"]


def emit_lineplot_svg(table: ResultTable, x_col: str, y_cols: list[str], path) -> None:
    """Self-contained SVG line plot of one or more columns against x_col."""
    xs = np.array([float(v) for v in _column(table, x_col)])
    series = {c: np.array([float(v) for v in _column(table, c)]) for c in y_cols}
    finite_y = np.concatenate([s[np.isfinite(s)] for s in series.values()]) if series else np.array([0.0])
    y_lo = float(finite_y.min()) if finite_y.size else 0.0
    y_hi = float(finite_y.max()) if finite_y.size else 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    x_lo, x_hi = float(xs.min()), float(xs.max())
    if x_hi == x_lo:
        x_hi = x_lo + 1.0

    left, top, plot_w, plot_h = 70, 16, 520, 360
    width, height = left + plot_w + 140, top + plot_h + 48

    def sx(x):
        return left + (x - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y):
        return top + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h

    parts = [_SVG_HEAD.format(w=width, h=height)]
    parts.append(f'<rect width="{width}" height="{height}" fill="white"/>\n')
    for ci, (name, ys) in enumerate(series.items()):
        color = _PALETTE[ci % len(_PALETTE)]
        run = []
        segments = []
        for x, y in zip(xs, ys):
            if np.isfinite(y):
                run.append(f"{sx(x):.2f},{sy(y):.2f}")
            elif run:
                segments.append(run)
                run = []
        if run:
            segments.append(run)
        for seg in segments:
            parts.append(
                f'<polyline points="{" ".join(seg)}" fill="none" stroke="{color}" stroke-width="1.4"/>\n'
            )
        ly = top + 14 + 16 * ci
        parts.append(
            f'<text x="{left + plot_w + 12}" y="{ly}" font-family="sans-serif" font-size="12" '
            f'fill="{color}">{name}</text>\n'
        )
    parts.append(
        f'<rect x="{left}" y="{top}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>\n'
    )
    parts.append(
        f'<text x="{left + plot_w / 2:.1f}" y="{top + plot_h + 34}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{x_col}</text>\n'
    )
    for val, anchor, px in ((x_lo, "start", left), (x_hi, "end", left + plot_w)):
        parts.append(
            f'<text x="{px}" y="{top + plot_h + 16}" text-anchor="{anchor}" '
            f'font-family="sans-serif" font-size="11">{val:.6g}</text>\n'
        )
    for val, py in ((y_lo, top + plot_h), (y_hi, top + 10)):
        parts.append(
            f'<text x="{left - 4}" y="{py}" text-anchor="end" font-family="sans-serif" '
            f'font-size="11">{val:.6g}</text>\n'
        )
    parts.append("</svg>\n")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(parts), encoding="utf-8")

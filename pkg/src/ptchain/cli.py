"""Command-line interface: one subcommand per simulation target.

Every subcommand accepts a JSON job config plus flag overrides and writes a
CSV table with a .meta.json sidecar; ``--format csv+svg`` adds a heatmap
(two swept axes) or a line plot (one axis or a trajectory).  Exit codes:
0 success, 1 configuration error, 2 at least one grid point failed
numerically (recorded in the table's error column).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .model import ChainParams
from .spectrum import NoCrossingError, crossing_point
from .sweep_io import (
    ConfigError,
    ResultTable,
    emit_csv,
    emit_heatmap_svg,
    emit_lineplot_svg,
    job_from_dict,
    run_sweep,
)

_SUBCOMMAND_TARGETS = {
    "spectrum": "spectrum",
    "evolve-static": "static",
    "evolve-driven": "driven",
    "anneal": "qaa",
    "lzs": "lzs",
    "ep": "ep",
    "sweep": None,  # target comes from the config file
}

_DEFAULT_Z = {"qaa": "p_ground", "lzs": "p_ground", "driven": "p_up_final", "ep": "n_eps"}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptchain",
        description="Spectra, exceptional points, driven dynamics, and annealing "
        "of XX-coupled qubit chains with staggered gain/loss.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, target in _SUBCOMMAND_TARGETS.items():
        p = sub.add_parser(name, help=f"run the {target or 'configured'} target")
        p.add_argument("--config", help="JSON job file; flags below override it")
        p.add_argument("--out", help="output stem (default: ./<command>)")
        p.add_argument("--format", choices=("csv", "csv+svg"), default="csv")
        p.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                       help="worker processes for grid targets (default: all cores)")
        p.add_argument("--model", choices=("full", "effective"))
        p.add_argument("--gamma", type=float)
        p.add_argument("--epsilon", type=float)
        p.add_argument("--g", type=float)
        p.add_argument("--k", type=float)
        p.add_argument("--delta", type=float)
        p.add_argument("--n-qubits", type=int, dest="n_qubits")
        p.add_argument("--s0", type=float,
                       help="frozen control parameter: s (full model) or s~ offset (effective)")
        p.add_argument("--grid", action="append", default=[], metavar="NAME:MIN:MAX:COUNT[:SPACING]",
                       help="sweep axis; repeat for a second axis (replaces config axes)")
        p.add_argument("--z", help="heatmap color column (default depends on target)")
    return parser


def _parse_grid(spec: str) -> dict:
    parts = spec.split(":")
    if len(parts) not in (4, 5):
        raise ConfigError(f"bad --grid spec {spec!r}; expected NAME:MIN:MAX:COUNT[:SPACING]")
    out = {"name": parts[0], "min": float(parts[1]), "max": float(parts[2]), "count": int(parts[3])}
    if len(parts) == 5:
        out["spacing"] = parts[4]
    return out


def _job_dict(args) -> dict:
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ConfigError(f"{args.config} does not contain a JSON object")
    else:
        data = {}
    target = _SUBCOMMAND_TARGETS[args.command]
    if target is not None:
        if "target" in data and data["target"] != target:
            raise ConfigError(
                f"config target {data['target']!r} conflicts with subcommand {args.command!r}"
            )
        data["target"] = target
    elif "target" not in data:
        raise ConfigError("the sweep subcommand requires a config file naming a target")
    if args.model:
        data["model"] = args.model
    if data["target"] == "lzs":
        data.setdefault("model", "effective")
    fixed = dict(data.get("fixed", {}))
    for key in ("gamma", "epsilon", "g", "k", "delta", "n_qubits"):
        val = getattr(args, key)
        if val is not None:
            fixed[key] = val
    if args.s0 is not None:
        fixed["s" if data.get("model", "full") == "full" else "s_tilde0"] = args.s0
    data["fixed"] = fixed
    if args.grid:
        data["axes"] = [_parse_grid(spec) for spec in args.grid]
    if data["target"] == "spectrum":
        _default_spectrum_axis(data)
    return data


def _default_spectrum_axis(data: dict) -> None:
    """Add the standard 401-point sweep axis when the config does not set one."""
    model = data.get("model", "full")
    wanted = "s" if model == "full" else "s_tilde0"
    if any(ax.get("name") == wanted for ax in data.get("axes", [])):
        return
    if model == "full":
        axis = {"name": "s", "min": 0.0, "max": 1.0, "count": 401}
    else:
        fixed = data.get("fixed", {})
        params = ChainParams(
            n_qubits=int(fixed.get("n_qubits", 2)),
            epsilon=fixed.get("epsilon", 0.0),
            gamma=fixed.get("gamma", 0.0),
            coupling=fixed.get("g", 1.0),
            delta=fixed.get("delta", 1.0),
        )
        try:
            s_cr, _ = crossing_point(params)
        except NoCrossingError as exc:
            raise ConfigError(f"cannot place the default detuning axis: {exc}") from exc
        axis = {"name": "s_tilde0", "min": -s_cr, "max": 1.0 - s_cr, "count": 401}
    data.setdefault("axes", []).insert(0, axis)


def _emit_svg(table: ResultTable, job, args, stem: str) -> None:
    axes = job.axes
    svg_path = stem + ".svg"
    if len(axes) == 2:
        z = args.z or _DEFAULT_Z.get(job.target)
        if z is None or z not in table.columns:
            z = next(
                c for c in table.columns
                if c not in (axes[0].name, axes[1].name, "error") and _numeric(table, c)
            )
        emit_heatmap_svg(table, axes[0].name, axes[1].name, z, svg_path)
    else:
        x_col = table.columns[0]
        if args.z:
            y_cols = [args.z]
        else:
            y_cols = [c for c in table.columns[1:] if c != "error" and _numeric(table, c)]
            y_cols = [c for c in y_cols if c.startswith(("p_", "E")) and not c.endswith("_im")] or y_cols[:4]
        emit_lineplot_svg(table, x_col, y_cols, svg_path)
    print(f"wrote {svg_path}")


def _numeric(table: ResultTable, col: str) -> bool:
    idx = table.columns.index(col)
    return all(not isinstance(row[idx], str) for row in table.rows)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        job = job_from_dict(_job_dict(args))
    except (ConfigError, OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    try:
        table = run_sweep(job, jobs=max(1, args.jobs))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # trajectory targets have no per-row error channel
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    stem = args.out or args.command
    csv_path = stem + ".csv"
    emit_csv(table, csv_path)
    n_err = table.meta["n_errors"]
    print(f"wrote {len(table.rows)} rows to {csv_path} ({n_err} errors)")
    if args.format == "csv+svg":
        if job.target == "ep" and not job.axes:
            print("skipping svg: the ep listing has no plot axes", file=sys.stderr)
        else:
            _emit_svg(table, job, args, stem)
    return 2 if n_err else 0


if __name__ == "__main__":
    sys.exit(main())

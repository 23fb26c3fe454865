"""Command-line interface: simulate, sweep, and dictionary-stats.

Configs are single JSON documents with sections {radar, grid, scene,
solver, sweep, output, master_seed}, optionally seeded from a named
preset. All randomness flows from master_seed; reruns of the same config
reproduce the same statistical results.

Exit codes: 0 success, 2 config/validation error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import asdict, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .dictionary import adjacent_column_correlation, build_dictionary, coherence, column_norms
from .experiments import (PRESETS, AccuracyReport, CellResult, ExperimentConfig,
                          ExperimentError, make_context, run_cell, sweep)
from .recovery import SolverConfig
from .signal_model import RadarParams, SignalModelError


class ConfigError(ValueError):
    """Invalid or missing configuration; message names the field."""


def _fmt(x) -> str:
    """Full-precision, locale-independent decimal text for CSV cells."""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _snr_text(snr_db) -> str:
    return "inf" if snr_db is None else repr(float(snr_db))


def _support_text(support) -> str:
    return ";".join(str(i) for i in support)


def _get(section: dict, key: str, path: str, required=False, default=None):
    if key in section:
        return section[key]
    if required:
        raise ConfigError(f"missing required field {path}.{key}")
    return default


def load_config(path: str | Path) -> dict:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    try:
        raw = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    return raw


def resolve_config(raw: dict, preset: str | None = None) -> ExperimentConfig:
    """Apply a preset (from the file or the CLI), then section overrides."""
    preset = raw.get("preset", preset)
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(
                f"unknown preset {preset!r}; available: {sorted(PRESETS)}")
        base = PRESETS[preset]()
    else:
        base = None

    radar = raw.get("radar", {})
    grid = raw.get("grid", {})
    scene = raw.get("scene", {})
    solver = raw.get("solver", {})
    sw = raw.get("sweep", {})

    try:
        if base is None:
            params = RadarParams(
                f0=_get(radar, "f0", "radar", required=True),
                delta_f=_get(radar, "delta_f", "radar", required=True),
                n_pulses=int(_get(radar, "n_pulses", "radar", default=100)),
                pri=_get(radar, "pri", "radar", default=1e-3),
                c=_get(radar, "c", "radar", default=3e8),
            )
        else:
            params = replace(
                base.params,
                **{k: radar[k] for k in ("f0", "delta_f", "n_pulses", "pri", "c")
                   if k in radar},
            )

        solver_kwargs = {k: solver[k] for k in
                         ("method", "mu", "t_param", "epsilon", "max_iterations",
                          "feasibility_tol", "sparsity_k") if k in solver}
        solver_cfg = (replace(base.solver, **solver_kwargs) if base is not None
                      else SolverConfig(**solver_kwargs))

        snr = _get(sw, "snr_db", "sweep",
                   default=None if base is None else list(base.snr_values))
        if snr == "noiseless":
            snr_values = (None,)
        elif snr is None:
            snr_values = (None,)
        else:
            if not isinstance(snr, list):
                raise ConfigError("sweep.snr_db must be a list or \"noiseless\"")
            snr_values = tuple(
                None if s is None or s == "noiseless" else float(s) for s in snr)

        kwargs = dict(
            params=params,
            n_ranges=int(_get(grid, "n_ranges", "grid",
                              required=base is None,
                              default=None if base is None else base.n_ranges)),
            n_speeds=int(_get(grid, "n_speeds", "grid",
                              default=1 if base is None else base.n_speeds)),
            k_targets=int(_get(scene, "k_targets", "scene",
                               required=base is None,
                               default=None if base is None else base.k_targets)),
            adjacency_constraint=bool(_get(
                scene, "adjacency_constraint", "scene",
                default=False if base is None else base.adjacency_constraint)),
            amplitude_mode=_get(scene, "amplitude_mode", "scene",
                                default="unit" if base is None else base.amplitude_mode),
            n_trials=int(_get(sw, "n_trials", "sweep",
                              default=100 if base is None else base.n_trials)),
            snr_values=snr_values,
            pulse_counts=tuple(int(n) for n in _get(
                sw, "pulse_counts", "sweep",
                default=[params.n_pulses] if base is None else list(base.pulse_counts))),
            detectors=tuple(_get(sw, "detectors", "sweep",
                                 default=["dantzig"] if base is None
                                 else list(base.detectors))),
            solver=solver_cfg,
            master_seed=int(raw.get("master_seed", 0)),
        )
        if "range_bounds" in grid:
            kwargs["range_bounds"] = tuple(grid["range_bounds"])
        if "speed_bounds" in grid:
            kwargs["speed_bounds"] = tuple(grid["speed_bounds"])
        return ExperimentConfig(**kwargs)
    except (ExperimentError, SignalModelError, ValueError, TypeError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def config_digest(cfg: ExperimentConfig) -> str:
    """SHA-256 of the fully resolved config in canonical JSON form."""
    payload = asdict(cfg)
    canon = json.dumps(payload, sort_keys=True, default=str)
    return hashlib.sha256(canon.encode()).hexdigest()


def write_trials_csv(path: Path, cell: CellResult) -> None:
    lines = ["trial_index,seed,true_support,detected_support,correct,solve_time_s"]
    for r in cell.records:
        lines.append(",".join([
            str(r.trial_index), str(r.seed),
            _support_text(r.true_support), _support_text(r.detected_support),
            "1" if r.correct else "0", _fmt(r.solve_time_s),
        ]))
    path.write_text("\n".join(lines) + "\n")


def write_accuracy_csv(path: Path, report: AccuracyReport) -> None:
    lines = ["detector,n_pulses,snr_db,trials,correct,accuracy,mean_solve_time_s"]
    for c in report.cells:
        lines.append(",".join([
            c.detector, str(c.n_pulses), _snr_text(c.snr_db),
            str(c.trials), str(c.correct_count), _fmt(c.accuracy),
            _fmt(c.mean_solve_time_s),
        ]))
    path.write_text("\n".join(lines) + "\n")


def _utcnow() -> str:
    return datetime.now(timezone.utc).isoformat()


def cmd_simulate(config_path: str, out_dir: str, preset: str | None = None) -> int:
    cfg = resolve_config(load_config(config_path) if config_path else {}, preset)
    if len(cfg.detectors) != 1 or len(cfg.pulse_counts) != 1 or len(cfg.snr_values) != 1:
        raise ConfigError(
            "simulate runs exactly one (detector, n_pulses, snr) cell; "
            "use the sweep command for multiple")
    detector, n, snr = cfg.detectors[0], cfg.pulse_counts[0], cfg.snr_values[0]
    started = _utcnow()
    cell = run_cell(cfg, detector, n, snr)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_trials_csv(out / "trials.csv", cell)
    summary = {
        "detector": detector,
        "n_pulses": n,
        "snr_db": None if snr is None else float(snr),
        "trials": cell.trials,
        "correct": cell.correct_count,
        "accuracy": cell.accuracy,
        "mean_solve_time_s": cell.mean_solve_time_s,
        "config_digest": config_digest(cfg),
        "tool_version": __version__,
        "started": started,
        "finished": _utcnow(),
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    print(f"{detector} N={n} snr={_snr_text(snr)}: "
          f"accuracy {cell.accuracy:.3f} over {cell.trials} trials")
    return 0


def cmd_sweep(config_path: str, out_dir: str, preset: str | None = None,
              threads: int | None = None) -> int:
    cfg = resolve_config(load_config(config_path) if config_path else {}, preset)
    workers = threads if threads is not None else (os.cpu_count() or 1)
    started = _utcnow()
    report = sweep(cfg, max_workers=max(1, workers))
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_accuracy_csv(out / "accuracy.csv", report)
    for c in report.cells:
        print(f"{c.detector} N={c.n_pulses} snr={_snr_text(c.snr_db)}: "
              f"accuracy {c.accuracy:.3f}")
    manifest = {
        "config_digest": config_digest(cfg),
        "tool_version": __version__,
        "started": started,
        "finished": _utcnow(),
        "outputs": [str(out / "accuracy.csv")],
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return 0


def cmd_dictionary_stats(config_path: str, preset: str | None = None) -> int:
    cfg = resolve_config(load_config(config_path) if config_path else {}, preset)
    ctx = make_context(cfg, cfg.pulse_counts[0])
    d = ctx.dictionary
    grid = ctx.grid
    norms = column_norms(d)
    closed = abs(adjacent_column_correlation(d.n_pulses, grid.n_ranges))
    if grid.n_ranges >= 2:
        c0 = d.entries[:, 0]
        c1 = d.entries[:, grid.n_speeds]  # next range, same (zero) speed
        numerical = float(abs(np.vdot(c0, c1)) / d.n_pulses)
    else:
        numerical = float("nan")
    stats = {
        "n": d.n_pulses,
        "m": grid.n_ranges,
        "l": grid.n_speeds,
        "coherence": coherence(d),
        "adjacent_corr_modulus_closed_form": closed,
        "adjacent_corr_modulus_numerical": numerical,
        "column_norm_min": float(norms.min()),
        "column_norm_max": float(norms.max()),
    }
    print(json.dumps(stats, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sfrcs",
        description="Step-frequency radar compressive sensing simulator")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one (detector, N, SNR) cell")
    sim.add_argument("--config", default=None, help="JSON config path")
    sim.add_argument("--preset", default=None, choices=sorted(PRESETS))
    sim.add_argument("--out", required=True, help="output directory")
    sim.add_argument("--threads", type=int, default=None)

    sw = sub.add_parser("sweep", help="run a full sweep to accuracy.csv")
    sw.add_argument("--config", default=None)
    sw.add_argument("--preset", default=None, choices=sorted(PRESETS))
    sw.add_argument("--out", required=True)
    sw.add_argument("--threads", type=int, default=None)

    ds = sub.add_parser("dictionary-stats", help="print dictionary diagnostics as JSON")
    ds.add_argument("--config", default=None)
    ds.add_argument("--preset", default=None, choices=sorted(PRESETS))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return cmd_simulate(args.config, args.out, args.preset)
        if args.command == "sweep":
            return cmd_sweep(args.config, args.out, args.preset, args.threads)
        if args.command == "dictionary-stats":
            return cmd_dictionary_stats(args.config, args.preset)
        return 2
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime/solver infrastructure
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

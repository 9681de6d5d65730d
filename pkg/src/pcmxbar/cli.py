"""Command line front end.

Subcommands: learn (full learn-and-recall run), recall (read-only probe of a
stored array), sweep (variation classes to a CSV summary), device-curve
(gradual-SET staircase of a single cell). Exit codes: 0 success, 2 bad
config, 3 file system trouble, 4 simulation error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .configio import (
    bundled_config_path,
    config_to_dict,
    histograms_csv,
    load_config,
    load_sweep,
    report_json,
    stats_to_dict,
    sweep_rows_csv,
    traces_jsonl,
)
from .crossbar import CrossbarArray, array_stats, load_resistance_csv, save_resistance_csv
from .device import PcmCell, apply_set_pulse
from .errors import ConfigParseError, SimulationError
from .experiments import distribution_history, learn_and_recall, variation_sweep
from .network import compute_thresholds, recall_probe, recall_success

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_SIMULATION = 4


def _resolve_config(path: str) -> Path:
    """Accept a file path or the bare name of a bundled configuration."""
    candidate = Path(path)
    if candidate.is_file():
        return candidate
    bundled = bundled_config_path(candidate.name)
    if candidate.name == str(candidate) and bundled.is_file():
        return bundled
    raise ConfigParseError(f"config file not found: {path}")


def _apply_overrides(config, args):
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    if args.epochs is not None:
        config = replace(config, max_epochs=args.epochs)
    return config


def _say(args, message: str) -> None:
    if not args.quiet:
        print(message)


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _cmd_learn(args) -> int:
    config = _apply_overrides(load_config(_resolve_config(args.config)), args)
    report = learn_and_recall(config)
    out = Path(args.out_dir)
    _write(out / "report.json", report_json(report))
    _write(out / "traces.jsonl", traces_jsonl(report))
    device = config.device
    initial = CrossbarArray(config.n, report.initial_resistance, np.zeros((config.n, config.n), dtype=np.int64), device)
    final = CrossbarArray(config.n, report.final_resistance, np.zeros((config.n, config.n), dtype=np.int64), device)
    save_resistance_csv(initial, out / "array_initial.csv")
    save_resistance_csv(final, out / "array_final.csv")
    if config.snapshot_every > 0:
        snapdir = out / "snapshots"
        snapdir.mkdir(parents=True, exist_ok=True)
        stats_lines = []
        for epoch, matrix in [(0, report.initial_resistance)] + [
            (t.epoch, t.resistance_snapshot) for t in report.traces if t.resistance_snapshot is not None
        ]:
            snap = CrossbarArray(config.n, matrix, np.zeros((config.n, config.n), dtype=np.int64), device)
            save_resistance_csv(snap, snapdir / f"epoch_{epoch:04d}.csv")
            stats_lines.append(json.dumps({"epoch": epoch, **stats_to_dict(array_stats(snap))}, sort_keys=True))
        _write(snapdir / "stats.jsonl", "".join(line + "\n" for line in stats_lines))
        _write(out / "histograms.csv", histograms_csv(distribution_history(report)))
    if report.epochs_to_recall is None:
        _say(args, f"recall not reached within {config.max_epochs} epochs")
    else:
        _say(args, f"recall after {report.epochs_to_recall} epoch(s)")
    _say(args, f"total energy: {report.total_energy:.4e} J")
    _say(args, f"wrote {out / 'report.json'}")
    return EXIT_OK


def _cmd_recall(args) -> int:
    config = _apply_overrides(load_config(_resolve_config(args.config)), args)
    out = Path(args.out_dir)
    trained_path = out / "array_final.csv"
    baseline_path = out / "array_initial.csv"
    if not trained_path.is_file():
        raise FileNotFoundError(f"no stored array at {trained_path}; run learn into this directory first")
    trained = load_resistance_csv(trained_path, config.device)
    baseline = load_resistance_csv(baseline_path, config.device) if baseline_path.is_file() else trained
    thresholds = compute_thresholds(baseline, config.recall_stimulus, config.protocol)
    probe = recall_probe(trained, config.recall_stimulus, thresholds, config.protocol, max_steps=trained.n)
    payload = {
        "config": config_to_dict(config),
        "final_firing": sorted(probe.final_firing),
        "success": recall_success(probe.final_firing, config.recall_target),
        "converged": probe.converged,
        "read_energy_J": probe.read_energy,
        "thresholds_A": [float(t) for t in thresholds],
        "steps": [
            {
                "step": step.step,
                "newly_fired": sorted(step.newly_fired),
                "currents_A": [None if s.firing else s.input_current for s in step.states],
            }
            for step in probe.steps
        ],
    }
    _write(out / "recall.json", json.dumps(payload, sort_keys=True, indent=2) + "\n")
    if not probe.converged:
        _say(args, "warning: firing set still growing when the step budget ran out")
    _say(args, f"final firing set: {sorted(probe.final_firing)}")
    _say(args, f"wrote {out / 'recall.json'}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    base, spec = load_sweep(_resolve_config(args.config))
    base = _apply_overrides(base, args)
    rows = variation_sweep(base, list(spec.cvs), spec.seeds_per_cv, spec.tuned_cv_max)
    out = Path(args.out_dir)
    _write(out / "sweep.csv", sweep_rows_csv(rows))
    for row in rows:
        _say(
            args,
            f"cv={row.cv:g}: median_epochs={row.median_epochs:g} "
            f"mean_energy={row.mean_energy:.4e} J success_rate={row.success_rate:.2f}",
        )
    _say(args, f"wrote {out / 'sweep.csv'}")
    return EXIT_OK


def _cmd_device_curve(args) -> int:
    config = _apply_overrides(load_config(_resolve_config(args.config)), args)
    pulses = args.epochs if args.epochs is not None else 50
    rng = np.random.default_rng(np.random.SeedSequence(config.seed))
    cell = PcmCell(config.init.median)
    lines = ["pulse_index,resistance_ohm", f"0,{cell.resistance!r}"]
    for k in range(1, pulses + 1):
        cell, _ = apply_set_pulse(cell, config.protocol.program_pulse, config.device, rng)
        lines.append(f"{k},{cell.resistance!r}")
    out = Path(args.out_dir)
    _write(out / "device_curve.csv", "\n".join(lines) + "\n")
    _say(args, f"wrote {out / 'device_curve.csv'} ({pulses} pulses)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pcmxbar",
        description="Phase-change synaptic crossbar simulator: Hebbian learning and pattern recall.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "learn": (_cmd_learn, "run learn-and-recall, write report, traces, and array snapshots"),
        "recall": (_cmd_recall, "probe a stored array in --out-dir with the configured stimulus"),
        "sweep": (_cmd_sweep, "run the variation sweep, write sweep.csv"),
        "device-curve": (_cmd_device_curve, "trace the gradual-SET staircase of one cell"),
    }
    for name, (func, help_text) in commands.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="config JSON path or bundled config name")
        p.add_argument("--out-dir", default="out", help="output directory (default: out)")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--epochs", type=int, default=None, help="override max epochs (pulses for device-curve)")
        p.add_argument("--quiet", action="store_true", help="suppress progress output")
        p.set_defaults(func=func)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigParseError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SimulationError as exc:
        print(f"simulation error: {exc}", file=sys.stderr)
        return EXIT_SIMULATION


# Programmatic entry point: run_cli(argv) returns the process exit status.
run_cli = main


if __name__ == "__main__":
    sys.exit(main())

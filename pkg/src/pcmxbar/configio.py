"""JSON and CSV serialization: configs in, reports and summaries out.

Config keys mirror the dataclass field names. Output keys carry SI unit
suffixes (_J, _A, _ohm) on every dimensioned number. Serialization is
deterministic: keys are sorted, floats use repr, and nothing varies between
identical runs, so reruns of the same config and seed are byte-identical.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .crossbar import ArrayStats, InitScheme, InitVariant
from .device import DeviceParams, PulseRole, PulseSpec
from .errors import ConfigParseError
from .experiments import DEFAULT_TUNED_CV_MAX, ExperimentConfig, RunReport, SweepRow
from .network import EpochTrace, Pattern, ProtocolParams

SWEEP_CSV_HEADER = "cv,median_epochs,mean_energy_J,success_rate"
HISTOGRAM_CSV_HEADER = "epoch,bin_low_ohm,bin_high_ohm,count"


@dataclass(frozen=True)
class SweepSpec:
    """Sweep section of a config: variation classes and ensemble size."""

    cvs: tuple[float, ...]
    seeds_per_cv: int
    tuned_cv_max: float = DEFAULT_TUNED_CV_MAX


def _require(mapping: dict, key: str, where: str):
    if key not in mapping:
        raise ConfigParseError(f"missing key '{key}' in {where}")
    return mapping[key]


def pulse_to_dict(pulse: PulseSpec) -> dict:
    return {
        "amplitude": pulse.amplitude,
        "t_rise": pulse.t_rise,
        "t_width": pulse.t_width,
        "t_fall": pulse.t_fall,
        "role": pulse.role.value,
    }


def pulse_from_dict(d: dict, where: str = "pulse") -> PulseSpec:
    try:
        return PulseSpec(
            amplitude=float(_require(d, "amplitude", where)),
            t_rise=float(_require(d, "t_rise", where)),
            t_width=float(_require(d, "t_width", where)),
            t_fall=float(_require(d, "t_fall", where)),
            role=PulseRole(_require(d, "role", where)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigParseError(f"bad {where}: {exc}") from exc


def device_to_dict(device: DeviceParams) -> dict:
    return {
        "r_min": device.r_min,
        "r_max": device.r_max,
        "r_reset_full_median": device.r_reset_full_median,
        "r_reset_partial_median": device.r_reset_partial_median,
        "alpha_set": device.alpha_set,
        "sigma_c2c": device.sigma_c2c,
        "v_set_threshold": device.v_set_threshold,
        "v_reset_threshold": device.v_reset_threshold,
    }


def device_from_dict(d: dict) -> DeviceParams:
    try:
        return DeviceParams(**{k: float(_require(d, k, "device")) for k in device_to_dict(DeviceParams())})
    except (TypeError, ValueError) as exc:
        raise ConfigParseError(f"bad device parameters: {exc}") from exc


def protocol_to_dict(pp: ProtocolParams) -> dict:
    return {
        "v_read": pp.v_read,
        "read_pulse": pulse_to_dict(pp.read_pulse),
        "program_pulse": pulse_to_dict(pp.program_pulse),
        "reset_pulse": pulse_to_dict(pp.reset_pulse),
        "threshold_factor": pp.threshold_factor,
        "include_diagonal": pp.include_diagonal,
        "pulses_per_coactivation": pp.pulses_per_coactivation,
    }


def protocol_from_dict(d: dict) -> ProtocolParams:
    try:
        return ProtocolParams(
            v_read=float(_require(d, "v_read", "protocol")),
            read_pulse=pulse_from_dict(_require(d, "read_pulse", "protocol"), "read_pulse"),
            program_pulse=pulse_from_dict(_require(d, "program_pulse", "protocol"), "program_pulse"),
            reset_pulse=pulse_from_dict(_require(d, "reset_pulse", "protocol"), "reset_pulse"),
            threshold_factor=float(_require(d, "threshold_factor", "protocol")),
            include_diagonal=bool(_require(d, "include_diagonal", "protocol")),
            pulses_per_coactivation=int(_require(d, "pulses_per_coactivation", "protocol")),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigParseError(f"bad protocol parameters: {exc}") from exc


def scheme_to_dict(scheme: InitScheme) -> dict:
    return {"variant": scheme.variant.value, "cv": scheme.cv, "median": scheme.median}


def scheme_from_dict(d: dict) -> InitScheme:
    try:
        return InitScheme(
            variant=InitVariant(_require(d, "variant", "init")),
            cv=float(_require(d, "cv", "init")),
            median=float(_require(d, "median", "init")),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigParseError(f"bad init scheme: {exc}") from exc


def pattern_to_bits(pattern: Pattern) -> list[int]:
    return [int(b) for b in pattern.bits]


def pattern_from_bits(bits: list, where: str = "pattern") -> Pattern:
    if not isinstance(bits, list) or not all(b in (0, 1, True, False) for b in bits):
        raise ConfigParseError(f"{where} must be a list of 0/1 bits")
    return Pattern(tuple(bool(b) for b in bits))


def config_to_dict(config: ExperimentConfig) -> dict:
    return {
        "n": config.n,
        "device": device_to_dict(config.device),
        "protocol": protocol_to_dict(config.protocol),
        "init": scheme_to_dict(config.init),
        "patterns": [pattern_to_bits(p) for p in config.patterns],
        "recall_stimulus": pattern_to_bits(config.recall_stimulus),
        "recall_target": pattern_to_bits(config.recall_target),
        "max_epochs": config.max_epochs,
        "seed": config.seed,
        "snapshot_every": config.snapshot_every,
    }


def config_from_dict(d: dict) -> ExperimentConfig:
    try:
        config = ExperimentConfig(
            n=int(_require(d, "n", "config")),
            device=device_from_dict(_require(d, "device", "config")),
            protocol=protocol_from_dict(_require(d, "protocol", "config")),
            init=scheme_from_dict(_require(d, "init", "config")),
            patterns=tuple(
                pattern_from_bits(bits, f"patterns[{i}]")
                for i, bits in enumerate(_require(d, "patterns", "config"))
            ),
            recall_stimulus=pattern_from_bits(_require(d, "recall_stimulus", "config"), "recall_stimulus"),
            recall_target=pattern_from_bits(_require(d, "recall_target", "config"), "recall_target"),
            max_epochs=int(d.get("max_epochs", 20)),
            seed=int(d.get("seed", 0)),
            snapshot_every=int(d.get("snapshot_every", 0)),
        )
    except ConfigParseError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigParseError(f"invalid config: {exc}") from exc
    return config


def sweep_spec_from_dict(d: dict) -> SweepSpec:
    try:
        cvs = tuple(float(v) for v in _require(d, "cvs", "sweep"))
        spec = SweepSpec(
            cvs=cvs,
            seeds_per_cv=int(_require(d, "seeds_per_cv", "sweep")),
            tuned_cv_max=float(d.get("tuned_cv_max", DEFAULT_TUNED_CV_MAX)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigParseError(f"bad sweep section: {exc}") from exc
    if not spec.cvs:
        raise ConfigParseError("sweep section needs at least one cv")
    return spec


def load_config_dict(path: str | Path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigParseError(f"cannot read config file {path}: {exc}") from exc
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(d, dict):
        raise ConfigParseError(f"config file {path} must hold a JSON object")
    return d


def load_config(path: str | Path) -> ExperimentConfig:
    return config_from_dict(load_config_dict(path))


def load_sweep(path: str | Path) -> tuple[ExperimentConfig, SweepSpec]:
    d = load_config_dict(path)
    config = config_from_dict(d)
    return config, sweep_spec_from_dict(_require(d, "sweep", f"config file {path}"))


def bundled_config_path(name: str) -> Path:
    """Path of a configuration shipped inside the package."""
    path = resources.files("pcmxbar").joinpath("configs", name)
    return Path(str(path))


def _json_float(value: float):
    return None if math.isnan(value) else float(value)


def stats_to_dict(stats: ArrayStats) -> dict:
    return {
        "mean_ohm": stats.mean,
        "std_ohm": stats.std,
        "cv": stats.cv,
        "min_ohm": stats.min,
        "max_ohm": stats.max,
        "median_ohm": stats.median,
    }


def trace_to_dict(trace: EpochTrace) -> dict:
    return {
        "epoch": trace.epoch,
        "phase": trace.phase,
        "firing_set": sorted(trace.firing_set),
        "currents_A": [_json_float(float(c)) for c in trace.currents],
        "program_energy_J": trace.program_energy,
        "read_energy_J": trace.read_energy,
        "converged": trace.converged,
    }


def report_to_dict(report: RunReport) -> dict:
    return {
        "config": config_to_dict(report.config),
        "epochs_to_recall": report.epochs_to_recall,
        "total_energy_J": report.total_energy,
        "energy_breakdown_J": {k: v for k, v in sorted(report.energy_breakdown.items())},
        "initial_cv": report.initial_cv,
        "initial_stats": stats_to_dict(report.initial_stats),
        "final_stats": stats_to_dict(report.final_stats),
        "thresholds_A": [float(t) for t in report.thresholds],
        "contrast_history": list(report.contrast_history),
        "traces": [trace_to_dict(t) for t in report.traces],
    }


def report_json(report: RunReport) -> str:
    return json.dumps(report_to_dict(report), sort_keys=True, indent=2) + "\n"


def traces_jsonl(report: RunReport) -> str:
    return "".join(json.dumps(trace_to_dict(t), sort_keys=True) + "\n" for t in report.traces)


def sweep_rows_csv(rows: list[SweepRow]) -> str:
    lines = [SWEEP_CSV_HEADER]
    for row in rows:
        lines.append(f"{row.cv!r},{row.median_epochs!r},{row.mean_energy!r},{row.success_rate!r}")
    return "\n".join(lines) + "\n"


def histograms_csv(histograms) -> str:
    """Flatten SnapshotHistogram records into epoch,bin_low_ohm,bin_high_ohm,count."""
    lines = [HISTOGRAM_CSV_HEADER]
    for h in histograms:
        for k in range(len(h.counts)):
            lo, hi = float(h.bin_edges[k]), float(h.bin_edges[k + 1])
            lines.append(f"{h.epoch},{lo!r},{hi!r},{int(h.counts[k])}")
    return "\n".join(lines) + "\n"

"""Array-level experiments: learn-then-recall runs and variation sweeps.

A run forms an array, freezes per-neuron thresholds on the untrained state,
then alternates Hebbian training epochs with read-only recall probes until
the probe reproduces the stored pattern exactly or the epoch budget runs
out. A sweep repeats that over an ensemble of seeds for each initial
resistance variation class and reduces each class to one summary row.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .crossbar import (
    ArrayStats,
    CrossbarArray,
    InitScheme,
    InitVariant,
    array_stats,
    init_array,
)
from .device import DeviceParams
from .errors import DegeneratePattern, DimensionMismatch, NoSnapshots
from .network import (
    EpochTrace,
    Pattern,
    ProtocolParams,
    compute_thresholds,
    recall_probe,
    recall_success,
    training_epoch,
)

# CV at or below which the per-cell tuned full-RESET preparation is assumed;
# wider targets are only reachable with the one-pulse-for-all partial RESET.
DEFAULT_TUNED_CV_MAX = 0.15


@dataclass(frozen=True)
class ExperimentConfig:
    """Complete description of one learn-and-recall run."""

    n: int
    device: DeviceParams
    protocol: ProtocolParams
    init: InitScheme
    patterns: tuple[Pattern, ...]
    recall_stimulus: Pattern
    recall_target: Pattern
    max_epochs: int = 20
    seed: int = 0
    snapshot_every: int = 0

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if not self.patterns:
            raise ValueError("need at least one training pattern")
        for p in (*self.patterns, self.recall_stimulus, self.recall_target):
            if p.n != self.n:
                raise DimensionMismatch(f"pattern length {p.n} != n = {self.n}")
        if not self.recall_stimulus.on_set() <= self.recall_target.on_set():
            raise ValueError("recall_stimulus ON set must be contained in recall_target")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be >= 1")
        if self.snapshot_every < 0:
            raise ValueError("snapshot_every must be >= 0")
        self.protocol.validate_against(self.device)


@dataclass
class RunReport:
    """Everything observable about one run."""

    epochs_to_recall: int | None  # None when recall was not reached
    total_energy: float  # joules spent up to and including the deciding probe
    energy_breakdown: dict[str, float]  # joules per phase
    initial_cv: float
    initial_stats: ArrayStats
    final_stats: ArrayStats
    thresholds: np.ndarray  # amperes, per neuron
    traces: list[EpochTrace]
    contrast_history: list[float]  # weight contrast after each epoch
    initial_resistance: np.ndarray  # ohms, epoch-0 snapshot
    final_resistance: np.ndarray  # ohms, state when the run stopped
    config: ExperimentConfig


@dataclass(frozen=True)
class SweepRow:
    """Summary of one variation class in a sweep."""

    cv: float
    median_epochs: float  # inf when more than half the seeds never recalled
    mean_energy: float  # joules, averaged over all seeds of the class
    success_rate: float


@dataclass(frozen=True)
class SnapshotHistogram:
    """Log-spaced resistance histogram of one kept snapshot."""

    epoch: int
    bin_edges: np.ndarray  # ohms, length bins + 1
    counts: np.ndarray
    normalized: np.ndarray  # resistance ratio vs the initial array


def weight_contrast(array: CrossbarArray, pattern: Pattern) -> float:
    """Mean conductance of the pattern's ON x ON block over all other cells."""
    if pattern.n != array.n:
        raise DimensionMismatch(f"pattern length {pattern.n} != array dimension {array.n}")
    on = sorted(pattern.on_set())
    if not on or len(on) == array.n:
        raise DegeneratePattern("contrast needs both ON and OFF neurons")
    conductance = 1.0 / array.resistance
    block_mask = np.zeros((array.n, array.n), dtype=bool)
    block_mask[np.ix_(on, on)] = True
    return float(conductance[block_mask].mean() / conductance[~block_mask].mean())


def learn_and_recall(config: ExperimentConfig, rng: np.random.Generator | None = None) -> RunReport:
    """Run the full protocol for one seed.

    Each epoch presents every training pattern once (programming plus a
    diagnostic read), then fires the recall stimulus into a read-only probe.
    The run stops at the first probe that matches the recall target exactly.
    """
    if rng is None:
        rng = np.random.default_rng(np.random.SeedSequence(config.seed))
    pp = config.protocol
    array = init_array(config.n, config.init, config.device, rng, pp.reset_pulse)
    initial_stats = array_stats(array)
    initial_resistance = array.resistance.copy()
    thresholds = compute_thresholds(array, config.recall_stimulus, pp)

    traces: list[EpochTrace] = []
    contrast_history: list[float] = []
    epochs_to_recall: int | None = None
    for epoch in range(1, config.max_epochs + 1):
        for pattern in config.patterns:
            array, trace = training_epoch(array, pattern, pp, rng)
            trace.epoch = epoch
            traces.append(trace)
        probe = recall_probe(array, config.recall_stimulus, thresholds, pp, max_steps=config.n)
        step0 = probe.steps[0]
        keep_snapshot = config.snapshot_every > 0 and epoch % config.snapshot_every == 0
        traces.append(
            EpochTrace(
                epoch=epoch,
                phase="probe",
                firing_set=probe.final_firing,
                currents=np.array([s.input_current for s in step0.states]),
                program_energy=0.0,
                read_energy=probe.read_energy,
                resistance_snapshot=array.resistance.copy() if keep_snapshot else None,
                converged=probe.converged,
            )
        )
        contrast_history.append(weight_contrast(array, config.recall_target))
        if recall_success(probe.final_firing, config.recall_target):
            epochs_to_recall = epoch
            break

    breakdown = {
        "training_program": sum(t.program_energy for t in traces if t.phase == "train"),
        "training_read": sum(t.read_energy for t in traces if t.phase == "train"),
        "probe_read": sum(t.read_energy for t in traces if t.phase == "probe"),
    }
    return RunReport(
        epochs_to_recall=epochs_to_recall,
        total_energy=sum(breakdown.values()),
        energy_breakdown=breakdown,
        initial_cv=initial_stats.cv,
        initial_stats=initial_stats,
        final_stats=array_stats(array),
        thresholds=thresholds,
        traces=traces,
        contrast_history=contrast_history,
        initial_resistance=initial_resistance,
        final_resistance=array.resistance.copy(),
        config=config,
    )


def scheme_for_cv(device: DeviceParams, cv: float, tuned_cv_max: float = DEFAULT_TUNED_CV_MAX) -> InitScheme:
    """Initialization scheme that reaches a target variation class.

    Tight classes come from per-cell tuned pulses into the fully amorphized
    high-resistance state; wide classes come from a single shared pulse that
    leaves the array partially RESET, much closer to the crystalline floor.
    """
    if cv <= tuned_cv_max:
        return InitScheme(InitVariant.TUNED_FULL_RESET, cv, device.r_reset_full_median)
    return InitScheme(InitVariant.UNIFORM_PARTIAL_RESET, cv, device.r_reset_partial_median)


def class_reports(
    base: ExperimentConfig,
    cv: float,
    cv_index: int,
    seeds_per_cv: int,
    tuned_cv_max: float = DEFAULT_TUNED_CV_MAX,
) -> list[RunReport]:
    """All runs of one variation class, each on a private derived RNG stream.

    Stream (cv_index, seed_index) is split off the master seed, so results
    do not depend on execution order and the classes can run in parallel.
    """
    cfg = replace(base, init=scheme_for_cv(base.device, cv, tuned_cv_max))
    reports = []
    for seed_index in range(seeds_per_cv):
        rng = np.random.default_rng(np.random.SeedSequence(base.seed, spawn_key=(cv_index, seed_index)))
        reports.append(learn_and_recall(cfg, rng))
    return reports


def variation_sweep(
    base: ExperimentConfig,
    cvs: list[float],
    seeds_per_cv: int,
    tuned_cv_max: float = DEFAULT_TUNED_CV_MAX,
) -> list[SweepRow]:
    """Median epochs, mean energy, and success rate per variation class."""
    if not cvs:
        raise ValueError("need at least one cv class")
    if sorted(cvs) != list(cvs):
        raise ValueError("cv classes must be sorted ascending")
    if seeds_per_cv < 1:
        raise ValueError("seeds_per_cv must be >= 1")
    rows = []
    for cv_index, cv in enumerate(cvs):
        reports = class_reports(base, cv, cv_index, seeds_per_cv, tuned_cv_max)
        epochs = np.array(
            [r.epochs_to_recall if r.epochs_to_recall is not None else np.inf for r in reports]
        )
        rows.append(
            SweepRow(
                cv=cv,
                median_epochs=float(np.median(epochs)),
                mean_energy=float(np.mean([r.total_energy for r in reports])),
                success_rate=float(np.mean([r.epochs_to_recall is not None for r in reports])),
            )
        )
    return rows


def distribution_history(report: RunReport, bins: int = 50) -> list[SnapshotHistogram]:
    """Log-spaced resistance histograms for every kept snapshot.

    The initial array is epoch 0; later entries are the epochs the run kept
    under its snapshot cadence. Each entry also carries the resistance
    matrix normalized by the initial array, for external plotting.
    """
    device = report.config.device
    snapshots: list[tuple[int, np.ndarray]] = [(0, report.initial_resistance)]
    snapshots += [
        (t.epoch, t.resistance_snapshot) for t in report.traces if t.resistance_snapshot is not None
    ]
    if len(snapshots) < 2 and report.config.snapshot_every == 0:
        raise NoSnapshots("run kept no snapshots; set snapshot_every > 0")
    edges = np.logspace(np.log10(device.r_min), np.log10(device.r_max), bins + 1)
    out = []
    for epoch, matrix in snapshots:
        counts, _ = np.histogram(matrix.ravel(), bins=edges)
        out.append(
            SnapshotHistogram(
                epoch=epoch,
                bin_edges=edges,
                counts=counts,
                normalized=matrix / report.initial_resistance,
            )
        )
    return out

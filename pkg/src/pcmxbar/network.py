"""Hebbian learning protocol and integrate-and-fire recall on a crossbar.

Neuron i owns bitline i (its input) and wordline i (its output). When a set
of neurons fires together, their bitlines are driven with the programming
pulse while their wordlines are gated, so every synapse between two firing
neurons receives one SET pulse: cells that fire together wire together.
Recall is a read-only cascade: non-firing neurons integrate current from the
firing set and join it when their input crosses a threshold.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .crossbar import DEFAULT_RESET_PULSE, CrossbarArray, program_cells, read_bitline
from .device import DeviceParams, PulseRole, PulseSpec
from .errors import DimensionMismatch, EmptyStimulus

DEFAULT_READ_PULSE = PulseSpec(0.1, 0.0, 1.0e-4, 0.0, PulseRole.READ)
DEFAULT_PROGRAM_PULSE = PulseSpec(1.0, 50e-9, 300e-9, 1.0e-6, PulseRole.SET)


@dataclass(frozen=True)
class Pattern:
    """Binary activity pattern over the neurons; bit i is neuron i's pixel."""

    bits: tuple[bool, ...]

    @property
    def n(self) -> int:
        return len(self.bits)

    def on_set(self) -> frozenset[int]:
        return frozenset(i for i, b in enumerate(self.bits) if b)

    @classmethod
    def from_indices(cls, n: int, on: frozenset[int] | set[int]) -> "Pattern":
        return cls(tuple(i in on for i in range(n)))


@dataclass(frozen=True)
class NeuronState:
    """One neuron during a probe step: firing flag, input current, threshold."""

    firing: bool
    input_current: float  # amperes; NaN while the neuron is firing (not read)
    threshold: float  # amperes


@dataclass(frozen=True)
class ProtocolParams:
    """Knobs of the learning and recall protocol."""

    v_read: float = 0.1
    read_pulse: PulseSpec = DEFAULT_READ_PULSE
    program_pulse: PulseSpec = DEFAULT_PROGRAM_PULSE
    reset_pulse: PulseSpec = DEFAULT_RESET_PULSE
    threshold_factor: float = 2.0
    include_diagonal: bool = True
    pulses_per_coactivation: int = 1

    def __post_init__(self) -> None:
        if self.v_read < 0:
            raise ValueError("v_read must be >= 0")
        if self.threshold_factor < 1:
            raise ValueError("threshold_factor must be >= 1")
        if self.pulses_per_coactivation < 1:
            raise ValueError("pulses_per_coactivation must be >= 1")
        if self.read_pulse.role is not PulseRole.READ:
            raise ValueError("read_pulse must have role READ")
        if self.program_pulse.role is not PulseRole.SET:
            raise ValueError("program_pulse must have role SET")
        if self.reset_pulse.role is not PulseRole.RESET:
            raise ValueError("reset_pulse must have role RESET")
        if self.read_pulse.amplitude != self.v_read:
            raise ValueError("read_pulse amplitude must equal v_read")

    def validate_against(self, device: DeviceParams) -> None:
        """Protocol sanity checks that need device corner values."""
        if self.v_read >= device.v_set_threshold:
            raise ValueError("v_read must stay below v_set_threshold")
        if self.program_pulse.amplitude < device.v_set_threshold:
            raise ValueError("program_pulse amplitude below v_set_threshold")
        if self.reset_pulse.amplitude < device.v_reset_threshold:
            raise ValueError("reset_pulse amplitude below v_reset_threshold")


@dataclass
class EpochTrace:
    """Record of one protocol phase: a pattern presentation or a recall probe.

    currents holds per-neuron read current in amperes, NaN for neurons that
    were firing (they drive, they do not read).
    """

    epoch: int
    phase: str  # "train" or "probe"
    firing_set: frozenset[int]
    currents: np.ndarray
    program_energy: float
    read_energy: float
    resistance_snapshot: np.ndarray | None = None
    converged: bool = True


@dataclass(frozen=True)
class ProbeStep:
    step: int
    states: tuple[NeuronState, ...]
    newly_fired: frozenset[int]


@dataclass
class ProbeResult:
    final_firing: frozenset[int]
    steps: list[ProbeStep] = field(default_factory=list)
    read_energy: float = 0.0
    converged: bool = True


def _check_pattern(array: CrossbarArray, pattern: Pattern) -> None:
    if pattern.n != array.n:
        raise DimensionMismatch(f"pattern length {pattern.n} != array dimension {array.n}")


def compute_thresholds(array: CrossbarArray, stimulus: Pattern, pp: ProtocolParams) -> np.ndarray:
    """Per-neuron firing thresholds from the untrained array.

    threshold_i = threshold_factor x (read current of bitline i with the
    stimulus ON set gated). Firing a neuron then demands its input current
    grow past threshold_factor times its own initial value, which is what
    keeps an untrained array quiescent under any stimulus.
    """
    _check_pattern(array, stimulus)
    on = stimulus.on_set()
    if not on:
        raise EmptyStimulus("stimulus has no ON bits")
    thresholds = np.empty(array.n, dtype=np.float64)
    for i in range(array.n):
        current, _ = read_bitline(array, i, on, pp.v_read, pp.read_pulse)
        thresholds[i] = pp.threshold_factor * current
    return thresholds


def training_epoch(
    array: CrossbarArray,
    pattern: Pattern,
    pp: ProtocolParams,
    rng: np.random.Generator,
) -> tuple[CrossbarArray, EpochTrace]:
    """One presentation of a pattern: program the coactive block, then read.

    Firing is clamped to the pattern. Every (firing, firing) synapse gets
    pulses_per_coactivation SET pulses; the diagonal self-synapses are
    skipped when include_diagonal is false. Afterwards every non-firing
    neuron reads its bitline against the firing set, which records the
    input currents the recall threshold will be compared against.
    """
    _check_pattern(array, pattern)
    firing = pattern.on_set()
    program_energy = 0.0
    out = array
    if firing:
        for _ in range(pp.pulses_per_coactivation):
            if pp.include_diagonal:
                out, e, _ = program_cells(out, firing, firing, pp.program_pulse, rng)
                program_energy += e
            else:
                # Cartesian programming cannot skip the diagonal in one shot;
                # drive each bitline against the others' wordlines instead.
                for bl in sorted(firing):
                    out, e, _ = program_cells(out, {bl}, firing - {bl}, pp.program_pulse, rng)
                    program_energy += e
    if out is array:
        out = array.copy()
    currents = np.full(array.n, np.nan)
    read_energy = 0.0
    for i in range(array.n):
        if i in firing:
            continue
        current, e = read_bitline(out, i, firing, pp.v_read, pp.read_pulse)
        currents[i] = current
        read_energy += e
    trace = EpochTrace(
        epoch=0,
        phase="train",
        firing_set=firing,
        currents=currents,
        program_energy=program_energy,
        read_energy=read_energy,
    )
    return out, trace


def recall_probe(
    array: CrossbarArray,
    partial: Pattern,
    thresholds: np.ndarray,
    pp: ProtocolParams,
    max_steps: int,
) -> ProbeResult:
    """Read-only integrate-and-fire cascade from a partial stimulus.

    Step 0 fires exactly the stimulus ON set. At each step every non-firing
    neuron reads its bitline gated by the current firing set; neurons whose
    current strictly exceeds their threshold join the firing set for the
    next step. The firing set only grows, so a fixpoint is reached within
    n steps; running out of max_steps first is reported, not raised.
    """
    _check_pattern(array, partial)
    if len(thresholds) != array.n:
        raise DimensionMismatch(f"threshold vector length {len(thresholds)} != array dimension {array.n}")
    firing = set(partial.on_set())
    if not firing:
        raise EmptyStimulus("recall stimulus has no ON bits")
    result = ProbeResult(final_firing=frozenset(firing))
    for step in range(max_steps):
        states: list[NeuronState] = []
        newly_fired: set[int] = set()
        for i in range(array.n):
            if i in firing:
                states.append(NeuronState(True, math.nan, float(thresholds[i])))
                continue
            current, e = read_bitline(array, i, firing, pp.v_read, pp.read_pulse)
            result.read_energy += e
            if current > thresholds[i]:
                newly_fired.add(i)
            states.append(NeuronState(False, current, float(thresholds[i])))
        result.steps.append(ProbeStep(step, tuple(states), frozenset(newly_fired)))
        if not newly_fired:
            result.converged = True
            break
        firing |= newly_fired
    else:
        # every step recruited someone and the budget ran out
        result.converged = len(firing) == array.n
    result.final_firing = frozenset(firing)
    return result


def recall_success(final_set: frozenset[int] | set[int], target: Pattern) -> bool:
    """True only on exact match: full completion and zero spurious neurons."""
    return frozenset(final_set) == target.on_set()

"""1T1R crossbar of PCM cells with ideal selection transistors.

Cell (i, j) sits at the crossing of bitline i and wordline j. The transistor
gated by wordline j is ideal (zero off-leak, zero on-resistance), so a read
on bitline i sums current only over the gated wordlines and sneak paths do
not exist. Programming drives a Cartesian block: every driven bitline paired
with every gated wordline.
"""
from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .device import DeviceParams, PcmCell, PulseRole, PulseSpec, apply_reset_pulse, apply_set_pulse, pulse_energy, read_current
from .errors import DimensionMismatch, IndexOutOfRange, InvalidDimension

# Fallback read pulse used when no explicit read waveform is supplied (s).
DEFAULT_READ_WIDTH = 1.0e-4

# RESET waveform used to form arrays when none is configured: 1.5 V, 20/50/5 ns.
DEFAULT_RESET_PULSE = PulseSpec(1.5, 20e-9, 50e-9, 5e-9, PulseRole.RESET)


class InitVariant(enum.Enum):
    # One identical pulse for the whole array leaves wide cell-to-cell spread.
    UNIFORM_PARTIAL_RESET = "uniform_partial_reset"
    # Per-cell tuned pulses reach the fully amorphized state with tight spread.
    TUNED_FULL_RESET = "tuned_full_reset"


@dataclass(frozen=True)
class InitScheme:
    """How the array is prepared before learning: variant, spread, and median."""

    variant: InitVariant
    cv: float
    median: float

    def __post_init__(self) -> None:
        if not (0 <= self.cv < 2):
            raise ValueError("cv must lie in [0, 2)")
        if self.median <= 0:
            raise ValueError("median must be positive")


@dataclass(frozen=True)
class ArrayStats:
    """Summary of the resistance matrix; std is the population value."""

    mean: float
    std: float
    cv: float
    min: float
    max: float
    median: float


@dataclass
class CrossbarArray:
    """n x n grid of cells. Treated as immutable: operations return copies."""

    n: int
    resistance: np.ndarray  # ohms, shape (n, n), row = bitline
    set_counts: np.ndarray  # SET pulses since last RESET, shape (n, n)
    params: DeviceParams

    def cell(self, bl: int, wl: int) -> PcmCell:
        self._check_index(bl)
        self._check_index(wl)
        return PcmCell(float(self.resistance[bl, wl]), int(self.set_counts[bl, wl]))

    def copy(self) -> "CrossbarArray":
        return CrossbarArray(self.n, self.resistance.copy(), self.set_counts.copy(), self.params)

    def _check_index(self, idx: int) -> None:
        if not (0 <= idx < self.n):
            raise IndexOutOfRange(f"index {idx} outside array of dimension {self.n}")


def init_array(
    n: int,
    scheme: InitScheme,
    params: DeviceParams,
    rng: np.random.Generator,
    reset_pulse: PulseSpec = DEFAULT_RESET_PULSE,
) -> CrossbarArray:
    """Form a fresh array by applying one RESET to every cell, row-major.

    Cells start at the amorphous ceiling and each receives one RESET drawn
    from the scheme's (median, cv) distribution. The formation energy is not
    tracked; it is array preparation, not learning.
    """
    if n < 2:
        raise InvalidDimension(f"array dimension must be >= 2, got {n}")
    resistance = np.empty((n, n), dtype=np.float64)
    pristine = PcmCell(params.r_max)
    for i in range(n):
        for j in range(n):
            cell, _ = apply_reset_pulse(pristine, reset_pulse, params, scheme.median, scheme.cv, rng)
            resistance[i, j] = cell.resistance
    return CrossbarArray(n, resistance, np.zeros((n, n), dtype=np.int64), params)


def read_bitline(
    array: CrossbarArray,
    bl: int,
    gated_wls: frozenset[int] | set[int],
    v_read: float,
    read_pulse: PulseSpec | None = None,
) -> tuple[float, float]:
    """Sum of ohmic currents on one bitline over the gated wordlines.

    Returns (current in amperes, read energy in joules). Ungated cells
    contribute nothing: their selection transistors are ideal. The gated set
    is traversed in sorted order so the float sum is reproducible. v_read
    must stay below the SET threshold so a read never disturbs state.
    """
    array._check_index(bl)
    for wl in gated_wls:
        array._check_index(wl)
    if v_read >= array.params.v_set_threshold:
        raise ValueError("read voltage must stay below v_set_threshold")
    if read_pulse is None:
        read_pulse = PulseSpec(v_read, 0.0, DEFAULT_READ_WIDTH, 0.0, PulseRole.READ)
    current = 0.0
    energy = 0.0
    for wl in sorted(gated_wls):
        cell = PcmCell(float(array.resistance[bl, wl]))
        current += read_current(cell, v_read)
        energy += pulse_energy(read_pulse, cell.resistance)
    return current, energy


def program_cells(
    array: CrossbarArray,
    driven_bls: frozenset[int] | set[int],
    gated_wls: frozenset[int] | set[int],
    pulse: PulseSpec,
    rng: np.random.Generator,
) -> tuple[CrossbarArray, float, int]:
    """Apply one SET pulse to every (driven bitline, gated wordline) cell.

    Cells are updated in row-major order (bitlines ascending, wordlines
    ascending within a bitline) so the noise stream is reproducible. Returns
    (new array, total programming energy in joules, number of cells pulsed).
    Cells outside the block are byte-identical to the input array.
    """
    for idx in driven_bls:
        array._check_index(idx)
    for idx in gated_wls:
        array._check_index(idx)
    out = array.copy()
    energy = 0.0
    count = 0
    for bl in sorted(driven_bls):
        for wl in sorted(gated_wls):
            cell = out.cell(bl, wl)
            new_cell, e = apply_set_pulse(cell, pulse, array.params, rng)
            out.resistance[bl, wl] = new_cell.resistance
            out.set_counts[bl, wl] = new_cell.pulse_count_set
            energy += e
            count += 1
    return out, energy, count


def array_stats(array: CrossbarArray) -> ArrayStats:
    """Population statistics of the resistance matrix."""
    values = array.resistance.ravel()
    mean = float(np.mean(values))
    std = float(np.std(values))  # population (ddof=0)
    return ArrayStats(
        mean=mean,
        std=std,
        cv=std / mean,
        min=float(np.min(values)),
        max=float(np.max(values)),
        median=float(np.median(values)),
    )


def normalized_weights(array: CrossbarArray, baseline: CrossbarArray) -> np.ndarray:
    """Element-wise resistance ratio against a baseline array (dimensionless)."""
    if array.n != baseline.n:
        raise DimensionMismatch(f"array dimension {array.n} != baseline dimension {baseline.n}")
    return array.resistance / baseline.resistance


def save_resistance_csv(array: CrossbarArray, path: str | Path) -> None:
    """Write the resistance matrix as bare CSV: n rows x n columns, ohms."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in array.resistance:
            writer.writerow([repr(float(v)) for v in row])


def load_resistance_csv(path: str | Path, params: DeviceParams) -> CrossbarArray:
    """Read a resistance matrix CSV back into an array (pulse counts reset)."""
    rows: list[list[float]] = []
    with open(path, newline="") as fh:
        for record in csv.reader(fh):
            if record:
                rows.append([float(v) for v in record])
    n = len(rows)
    if n < 2:
        raise InvalidDimension(f"array dimension must be >= 2, got {n}")
    if any(len(r) != n for r in rows):
        raise DimensionMismatch("resistance CSV is not square")
    resistance = np.array(rows, dtype=np.float64)
    if np.any(resistance < params.r_min) or np.any(resistance > params.r_max):
        raise ValueError("resistance CSV contains values outside [r_min, r_max]")
    return CrossbarArray(n, resistance, np.zeros((n, n), dtype=np.int64), params)

"""Single phase-change memory cell: pulse response, variability, energy.

The cell is a programmable resistor. A SET pulse partially crystallizes the
chalcogenide volume and moves the resistance a fixed fraction of the way to
the crystalline floor; a RESET pulse melt-quenches the volume back to an
amorphous state whose resistance is drawn from a lognormal distribution.
All operations are value-semantic: they take a cell in and return a new one.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import AmplitudeBelowThreshold


class PulseRole(enum.Enum):
    SET = "set"
    RESET = "reset"
    READ = "read"


@dataclass(frozen=True)
class PulseSpec:
    """Trapezoidal voltage pulse: linear rise, flat top, linear fall.

    amplitude: volts at the flat top
    t_rise, t_width, t_fall: seconds (any of them may be zero)
    """

    amplitude: float
    t_rise: float
    t_width: float
    t_fall: float
    role: PulseRole

    def __post_init__(self) -> None:
        if self.amplitude < 0:
            raise ValueError("pulse amplitude must be >= 0")
        if min(self.t_rise, self.t_width, self.t_fall) < 0:
            raise ValueError("pulse timing segments must be >= 0")

    @property
    def duration(self) -> float:
        return self.t_rise + self.t_width + self.t_fall


@dataclass(frozen=True)
class DeviceParams:
    """Device corner values shared by every cell in an array.

    r_min: ohms, fully crystalline floor
    r_max: ohms, fully amorphous ceiling
    r_reset_full_median: ohms, median resistance after a full RESET
    r_reset_partial_median: ohms, median resistance after a partial RESET
    alpha_set: per-pulse crystallization fraction in (0, 1)
    sigma_c2c: relative cycle-to-cycle noise on a SET update
    v_set_threshold: volts, minimum amplitude that crystallizes
    v_reset_threshold: volts, minimum amplitude that amorphizes
    """

    r_min: float = 1.0e4
    r_max: float = 1.0e7
    r_reset_full_median: float = 1.0e6
    r_reset_partial_median: float = 1.0e6
    alpha_set: float = 0.6
    sigma_c2c: float = 0.05
    v_set_threshold: float = 0.5
    v_reset_threshold: float = 1.2

    def __post_init__(self) -> None:
        if not (0 < self.r_min < self.r_max):
            raise ValueError("need 0 < r_min < r_max")
        for name in ("r_reset_full_median", "r_reset_partial_median"):
            median = getattr(self, name)
            if not (self.r_min < median <= self.r_max):
                raise ValueError(f"{name} must lie in (r_min, r_max]")
        if self.r_reset_partial_median > self.r_reset_full_median:
            raise ValueError("partial RESET median cannot exceed full RESET median")
        if not (0 < self.alpha_set < 1):
            raise ValueError("alpha_set must lie in (0, 1)")
        if self.sigma_c2c < 0:
            raise ValueError("sigma_c2c must be >= 0")
        if not (0 < self.v_set_threshold < self.v_reset_threshold):
            raise ValueError("need 0 < v_set_threshold < v_reset_threshold")


@dataclass(frozen=True)
class PcmCell:
    """State of one cell: resistance in ohms plus SET pulses since last RESET."""

    resistance: float
    pulse_count_set: int = 0


def pulse_energy(pulse: PulseSpec, resistance_before: float) -> float:
    """Energy in joules dissipated by one pulse into a fixed resistance.

    Integrates v(t)^2 / R over the trapezoid; each linear ramp contributes
    a third of the flat-top power times its duration. The resistance seen
    by the pulse is frozen at its pre-pulse value for the whole pulse.
    """
    if resistance_before <= 0:
        raise ValueError("resistance must be positive")
    power_top = pulse.amplitude**2 / resistance_before  # watts on the flat top
    return power_top * (pulse.t_rise / 3.0 + pulse.t_width + pulse.t_fall / 3.0)


def read_current(cell: PcmCell, v_read: float) -> float:
    """Ohmic read current in amperes. Non-destructive, pure."""
    if v_read < 0:
        raise ValueError("read voltage must be >= 0")
    return v_read / cell.resistance


def apply_set_pulse(
    cell: PcmCell,
    pulse: PulseSpec,
    params: DeviceParams,
    rng: np.random.Generator,
) -> tuple[PcmCell, float]:
    """One gradual-SET pulse: move resistance toward the crystalline floor.

    The distance to r_min shrinks by the factor (1 - alpha_set), perturbed by
    a zero-mean Gaussian cycle-to-cycle factor, then clamps to [r_min, r_max].
    Returns the new cell and the energy in joules dissipated by the pulse.
    """
    if pulse.role is not PulseRole.SET:
        raise ValueError("apply_set_pulse needs a pulse with role SET")
    if pulse.amplitude < params.v_set_threshold:
        raise AmplitudeBelowThreshold(
            f"SET amplitude {pulse.amplitude} V below threshold "
            f"{params.v_set_threshold} V; no state change"
        )
    energy = pulse_energy(pulse, cell.resistance)
    noise = rng.normal(0.0, params.sigma_c2c) if params.sigma_c2c > 0 else 0.0
    target = params.r_min + (cell.resistance - params.r_min) * (1.0 - params.alpha_set) * (1.0 + noise)
    new_r = min(max(target, params.r_min), params.r_max)
    return PcmCell(new_r, cell.pulse_count_set + 1), energy


def apply_reset_pulse(
    cell: PcmCell,
    pulse: PulseSpec,
    params: DeviceParams,
    target_median: float,
    rel_spread: float,
    rng: np.random.Generator,
) -> tuple[PcmCell, float]:
    """One RESET pulse: re-amorphize to a lognormal resistance.

    target_median is the median of the post-RESET distribution and rel_spread
    its coefficient of variation; rel_spread = 0 lands exactly on the median.
    The SET pulse counter restarts at zero.
    """
    if pulse.role is not PulseRole.RESET:
        raise ValueError("apply_reset_pulse needs a pulse with role RESET")
    if pulse.amplitude < params.v_reset_threshold:
        raise AmplitudeBelowThreshold(
            f"RESET amplitude {pulse.amplitude} V below threshold "
            f"{params.v_reset_threshold} V; no state change"
        )
    if rel_spread < 0:
        raise ValueError("rel_spread must be >= 0")
    energy = pulse_energy(pulse, cell.resistance)
    if rel_spread == 0:
        drawn = target_median
    else:
        # lognormal with median m and CV c: shape sqrt(ln(1 + c^2)), scale ln(m)
        shape = math.sqrt(math.log1p(rel_spread * rel_spread))
        drawn = target_median * math.exp(shape * rng.standard_normal())
    new_r = min(max(drawn, params.r_min), params.r_max)
    return PcmCell(new_r, 0), energy

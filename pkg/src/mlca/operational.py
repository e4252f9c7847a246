"""Energy-based operational accounting for training runs.

Dynamic consumption is device-hours x TDP; idle overhead is derived from a
cluster partition's measured power modes, either held for the run's full
wall-clock duration (default) or scaled proportionally to dynamic energy.
PUE adjustment is a plain multiplier applied last.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, NamedTuple, TypeVar

from .errors import DomainError, InvalidProfileError, InvalidQuantityError
from .units import CarbonMass, Duration, Energy, Power, emissions_from_energy

if TYPE_CHECKING:
    from .profiles import TrainingRun

IDLE_METHODS = ("wallclock", "fractional", "none")


@dataclass(frozen=True)
class PartitionPowerModes:
    """Average power a cluster partition draws, split by computing mode.

    ``infrastructure`` is the draw with servers off (network, storage and
    cooling still on), ``idle`` the draw attributed to powered-on but
    unloaded servers, ``dynamic`` the draw attributed to actively running
    the workload. ``total`` is their sum, exactly; mode shares are each
    component over that total.
    """

    infrastructure: Power
    idle: Power
    dynamic: Power

    def __post_init__(self) -> None:
        for name in ("infrastructure", "idle", "dynamic"):
            value = getattr(self, name)
            if not isinstance(value, Power):
                raise InvalidQuantityError(f"{name} must be Power, got {type(value).__name__}")

    @property
    def total(self) -> Power:
        return self.infrastructure + self.idle + self.dynamic

    @property
    def non_dynamic(self) -> Power:
        """Power held regardless of load: infrastructure plus idle."""
        return self.infrastructure + self.idle


class ModeShares(NamedTuple):
    infrastructure: float
    idle: float
    dynamic: float


def mode_shares(modes: PartitionPowerModes) -> ModeShares:
    """Fraction of total partition power per mode; fractions sum to exactly 1."""
    total = modes.total.watts
    if total <= 0:
        raise DomainError("mode shares are undefined for a zero-power partition")
    shares = [
        modes.infrastructure.watts / total,
        modes.idle.watts / total,
        modes.dynamic.watts / total,
    ]
    # Fold the float residual into the largest share so the sum is exact.
    residual = 1.0 - sum(shares)
    shares[shares.index(max(shares))] += residual
    return ModeShares(*shares)


def dynamic_energy(run: TrainingRun) -> Energy:
    """Energy drawn by the accelerators themselves: GPU-hours x TDP x utilization."""
    tdp = run.accelerator.tdp
    if tdp is None:
        raise InvalidProfileError(
            f"accelerator profile '{run.accelerator.name}' has no TDP; "
            "dynamic energy needs one"
        )
    return Energy(run.gpu_hours.hours * tdp.watts * run.utilization / 1000.0)


def idle_energy_wallclock(wall_clock: Duration, modes: PartitionPowerModes) -> Energy:
    """Non-dynamic energy held for the run's full duration.

    wall_clock x (infrastructure + idle): the partition keeps drawing this
    power for every hour of the run whether or not the code is busy.
    """
    if not isinstance(wall_clock, Duration):
        raise InvalidQuantityError(f"wall_clock must be Duration, got {type(wall_clock).__name__}")
    return modes.non_dynamic * wall_clock


def idle_energy_fractional(dynamic: Energy, modes: PartitionPowerModes) -> Energy:
    """Idle overhead scaled proportionally to dynamic energy.

    dynamic x (infrastructure + idle) / dynamic_power. Requires a non-zero
    dynamic power mode.
    """
    if not isinstance(dynamic, Energy):
        raise InvalidQuantityError(f"dynamic must be Energy, got {type(dynamic).__name__}")
    if modes.dynamic.watts <= 0:
        raise DomainError("fractional idle is undefined when dynamic mode power is zero")
    return dynamic * (modes.non_dynamic.watts / modes.dynamic.watts)


_Q = TypeVar("_Q", Energy, CarbonMass)


def apply_pue(value: _Q, pue: float) -> _Q:
    """Scale energy or mass by a datacenter's power usage effectiveness."""
    if not isinstance(value, (Energy, CarbonMass)):
        raise InvalidQuantityError(
            f"PUE applies to Energy or CarbonMass, got {type(value).__name__}"
        )
    if not isinstance(pue, (int, float)) or isinstance(pue, bool) or not pue >= 1:
        raise InvalidProfileError(f"PUE must be a real number >= 1, got {pue!r}")
    return value * float(pue)


@dataclass(frozen=True)
class OperationalResult:
    """Dynamic and idle energy of a run with their grid emissions."""

    dynamic_energy: Energy
    idle_energy: Energy
    dynamic_mass: CarbonMass
    idle_mass: CarbonMass


def run_operational(run: TrainingRun) -> OperationalResult:
    """Dynamic plus idle accounting for one run, using its declared idle method."""
    dyn = dynamic_energy(run)
    if run.idle_method == "wallclock":
        idle = idle_energy_wallclock(run.wall_clock, run.partition)
    elif run.idle_method == "fractional":
        idle = idle_energy_fractional(dyn, run.partition)
    elif run.idle_method == "none":
        idle = Energy(0.0)
    else:  # unreachable: validated at manifest load
        raise DomainError(f"unknown idle method '{run.idle_method}'")
    return OperationalResult(
        dynamic_energy=dyn,
        idle_energy=idle,
        dynamic_mass=emissions_from_energy(dyn, run.grid.intensity),
        idle_mass=emissions_from_energy(idle, run.grid.intensity),
    )

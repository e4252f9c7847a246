"""Amortized embodied-emission accounting.

A device's manufacturing footprint is spread over its expected service
life scaled by average usage, giving a per-hour rate; workloads are then
charged for the device-hours they actually consume (not wall-clock time
times fleet size).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from .errors import DomainError, InvalidQuantityError
from .units import CarbonMass, Duration, EmissionRate

if TYPE_CHECKING:
    from .profiles import HardwareProfile, TrainingRun

# Accounting year of 365 days. 8766 h (365.25 d) would change results by
# less than 0.07%, well inside every tolerance used here.
YEAR_HOURS = 8760.0


def hourly_embodied_rate(profile: HardwareProfile) -> EmissionRate:
    """Manufacturing footprint amortized per hour of use.

    embodied / (lifetime_years x 8760 h x avg_usage_fraction).
    """
    if profile.lifetime_years <= 0:
        raise DomainError(f"profile '{profile.name}': lifetime must be positive to amortize")
    if profile.avg_usage_fraction <= 0:
        raise DomainError(f"profile '{profile.name}': usage fraction must be positive to amortize")
    hours = profile.lifetime_years * YEAR_HOURS * profile.avg_usage_fraction
    return EmissionRate(profile.embodied.kg / hours)


@dataclass(frozen=True)
class EmbodiedBreakdown:
    """Embodied emissions charged to a workload, split by equipment class."""

    server_mass: CarbonMass
    accelerator_mass: CarbonMass
    total: CarbonMass
    server_hours: Duration
    accelerator_hours: Duration

    def __post_init__(self) -> None:
        if self.total.kg != self.server_mass.kg + self.accelerator_mass.kg:
            raise InvalidQuantityError("embodied total must equal server + accelerator mass")

    @classmethod
    def build(
        cls,
        server_mass: CarbonMass,
        accelerator_mass: CarbonMass,
        server_hours: Duration,
        accelerator_hours: Duration,
    ) -> "EmbodiedBreakdown":
        return cls(
            server_mass=server_mass,
            accelerator_mass=accelerator_mass,
            total=server_mass + accelerator_mass,
            server_hours=server_hours,
            accelerator_hours=accelerator_hours,
        )


def embodied_for_hours(
    gpu_hours: Duration,
    accelerator: HardwareProfile,
    server: HardwareProfile,
    accelerators_per_server: int,
) -> EmbodiedBreakdown:
    """Charge embodied emissions for an aggregate number of accelerator-hours.

    Server time is consumed at 1/accelerators_per_server of the accelerator
    time, since one server hosts that many devices.
    """
    if accelerators_per_server <= 0:
        raise DomainError("accelerators_per_server must be positive")
    accelerator_hours = gpu_hours
    server_hours = Duration(gpu_hours.hours / accelerators_per_server)
    return EmbodiedBreakdown.build(
        server_mass=hourly_embodied_rate(server) * server_hours,
        accelerator_mass=hourly_embodied_rate(accelerator) * accelerator_hours,
        server_hours=server_hours,
        accelerator_hours=accelerator_hours,
    )


def run_embodied(run: TrainingRun) -> EmbodiedBreakdown:
    """Embodied emissions attributable to one training run's consumed hours."""
    return embodied_for_hours(
        run.gpu_hours, run.accelerator, run.server, run.accelerators_per_server
    )

"""Dimension-safe scalar quantities for carbon accounting.

Each quantity wraps a non-negative double in a fixed canonical unit (kWh, W,
kg CO2eq, gCO2eq/kWh, hours). Arithmetic is defined only where it is
physically meaningful; mixing dimensions raises ``InvalidQuantityError``
instead of silently coercing. Values are stored at full double precision;
display rounding is a formatting concern that never happens here.

Unit suffix grammar accepted by :meth:`parse` (used by manifests and the
CLI): ``W|kW``, ``Wh|kWh|MWh``, ``g|kg|t`` for CO2eq mass, ``gCO2/kWh`` for
grid intensity, and durations as ``NdNhNm`` composites or decimal hours
(``"118d5h41m"``, ``"12.5h"``).
"""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass
from typing import ClassVar, Mapping

from .errors import (
    InvalidQuantityError,
    MissingFactorError,
    PlausibilityWarning,
    QuantityParseError,
)

__all__ = [
    "Energy",
    "Power",
    "CarbonMass",
    "CarbonIntensity",
    "Duration",
    "EmissionRate",
    "GwpFactor",
    "DEFAULT_GWP_FACTORS",
    "gwp_factor",
    "co2eq_from_gas",
    "emissions_from_energy",
    "parse_duration",
]

_NUMBER_WITH_UNIT = re.compile(
    r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*(\S+)\s*$"
)


@dataclass(frozen=True, order=True)
class _Quantity:
    """A tagged non-negative scalar in a canonical unit.

    Subclasses define ``UNITS`` (suffix -> factor to canonical) and
    ``CANONICAL``. Equality and ordering only apply between quantities of
    the same dimension; anything else raises.
    """

    value: float

    UNITS: ClassVar[Mapping[str, float]]
    CANONICAL: ClassVar[str]

    def __post_init__(self) -> None:
        v = self.value
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise InvalidQuantityError(
                f"{type(self).__name__} value must be a number, got {v!r}"
            )
        v = float(v)
        if not math.isfinite(v):
            raise InvalidQuantityError(f"{type(self).__name__} value must be finite, got {v!r}")
        if v < 0:
            raise InvalidQuantityError(
                f"{type(self).__name__} value must be non-negative, got {v!r}"
            )
        object.__setattr__(self, "value", v)

    # -- unit conversion ---------------------------------------------------

    @classmethod
    def _factor(cls, unit: str) -> float:
        try:
            return cls.UNITS[unit]
        except KeyError:
            raise QuantityParseError(
                f"unknown {cls.__name__} unit '{unit}' (expected one of {sorted(cls.UNITS)})"
            ) from None

    @classmethod
    def from_unit(cls, value: float, unit: str):
        return cls(float(value) * cls._factor(unit))

    def to(self, unit: str) -> float:
        """Value expressed in ``unit``; round-trips within 1e-12 relative."""
        return self.value / self._factor(unit)

    @classmethod
    def parse(cls, text: str):
        """Parse ``"<number><unit>"`` such as ``"433196kWh"`` or ``"400 W"``."""
        if not isinstance(text, str):
            raise QuantityParseError(f"expected {cls.__name__} text, got {text!r}")
        m = _NUMBER_WITH_UNIT.match(text)
        if not m:
            raise QuantityParseError(f"cannot parse {cls.__name__} from '{text}'")
        number, unit = m.groups()
        try:
            return cls.from_unit(float(number), unit)
        except InvalidQuantityError as exc:
            raise QuantityParseError(f"invalid {cls.__name__} '{text}': {exc}") from None

    def canonical(self) -> str:
        """Exact serialization form: full-precision value plus canonical suffix."""
        return f"{self.value!r}{self.CANONICAL}"

    def __str__(self) -> str:
        return f"{self.value:g} {self.CANONICAL}"

    # -- arithmetic ----------------------------------------------------------

    def _same(self, other, op: str):
        if other.__class__ is not self.__class__:
            raise InvalidQuantityError(
                f"cannot {op} {type(self).__name__} and {type(other).__name__}"
            )
        return other

    def __add__(self, other):
        return type(self)(self.value + self._same(other, "add").value)

    def __sub__(self, other):
        return type(self)(self.value - self._same(other, "subtract").value)

    def __mul__(self, other):
        if isinstance(other, (int, float)) and not isinstance(other, bool):
            return type(self)(self.value * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if other.__class__ is self.__class__:
            return self.value / other.value
        if isinstance(other, (int, float)) and not isinstance(other, bool):
            return type(self)(self.value / other)
        return NotImplemented


class Energy(_Quantity):
    """Electrical energy; canonical unit kWh."""

    UNITS = {"Wh": 0.001, "kWh": 1.0, "MWh": 1000.0}
    CANONICAL = "kWh"

    @property
    def kwh(self) -> float:
        return self.value

    @property
    def mwh(self) -> float:
        return self.value / 1000.0

    def __truediv__(self, other):
        if isinstance(other, Duration):
            return Power(self.value * 1000.0 / other.value)
        return super().__truediv__(other)


class Power(_Quantity):
    """Instantaneous or average electrical power; canonical unit W."""

    UNITS = {"W": 1.0, "kW": 1000.0}
    CANONICAL = "W"

    @property
    def watts(self) -> float:
        return self.value

    @property
    def kilowatts(self) -> float:
        return self.value / 1000.0

    def __mul__(self, other):
        if isinstance(other, Duration):
            return Energy(self.value * other.value / 1000.0)
        return super().__mul__(other)

    __rmul__ = __mul__


class CarbonMass(_Quantity):
    """Mass of CO2-equivalent emissions; canonical unit kg."""

    UNITS = {"g": 0.001, "kg": 1.0, "t": 1000.0, "tonne": 1000.0}
    CANONICAL = "kg"

    @property
    def kg(self) -> float:
        return self.value

    @property
    def tonnes(self) -> float:
        return self.value / 1000.0

    @property
    def grams(self) -> float:
        return self.value * 1000.0


class CarbonIntensity(_Quantity):
    """Grid carbon intensity; canonical unit gCO2eq per kWh."""

    UNITS = {"gCO2/kWh": 1.0, "gCO2eq/kWh": 1.0, "g/kWh": 1.0}
    CANONICAL = "gCO2/kWh"

    # Above the dirtiest real grids (coal-heavy ~1100 g/kWh); legal but suspicious.
    PLAUSIBLE_MAX = 1500.0

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.value > self.PLAUSIBLE_MAX:
            warnings.warn(
                f"carbon intensity {self.value:g} g/kWh exceeds {self.PLAUSIBLE_MAX:g};"
                " no real grid is this dirty",
                PlausibilityWarning,
                stacklevel=2,
            )

    @property
    def g_per_kwh(self) -> float:
        return self.value


class Duration(_Quantity):
    """Elapsed or accumulated device time; canonical unit hours."""

    UNITS = {"h": 1.0}
    CANONICAL = "h"

    _PART = re.compile(r"(\d+(?:\.\d+)?)([dhm])")
    _PART_HOURS = {"d": 24.0, "h": 1.0, "m": 1.0 / 60.0}

    @property
    def hours(self) -> float:
        return self.value

    @property
    def days(self) -> float:
        return self.value / 24.0

    @classmethod
    def parse(cls, text: str) -> "Duration":
        """Parse ``NdNhNm`` composites or plain decimal hours.

        ``"118d5h41m"`` -> 2837.6833...h, ``"18d"`` -> 432h, ``"12.5h"`` -> 12.5h.
        Parts must appear in d, h, m order, each at most once.
        """
        if not isinstance(text, str):
            raise QuantityParseError(f"expected duration text, got {text!r}")
        stripped = text.strip()
        pos = 0
        total = 0.0
        order = "dhm"
        next_allowed = 0
        seen = False
        while pos < len(stripped):
            m = cls._PART.match(stripped, pos)
            if not m:
                raise QuantityParseError(
                    f"cannot parse duration '{text}': unexpected token '{stripped[pos:]}'"
                )
            number, unit = m.groups()
            idx = order.index(unit)
            if idx < next_allowed:
                raise QuantityParseError(
                    f"cannot parse duration '{text}': part '{m.group(0)}' out of d/h/m order"
                )
            next_allowed = idx + 1
            total += float(number) * cls._PART_HOURS[unit]
            seen = True
            pos = m.end()
        if not seen:
            raise QuantityParseError(
                f"cannot parse duration '{text}': expected NdNhNm or decimal hours like '12.5h'"
            )
        return cls(total)


class EmissionRate(_Quantity):
    """CO2eq mass amortized per hour of use; canonical unit kg/h."""

    UNITS = {"kg/h": 1.0}
    CANONICAL = "kg/h"

    @property
    def kg_per_hour(self) -> float:
        return self.value

    def __mul__(self, other):
        if isinstance(other, Duration):
            return CarbonMass(self.value * other.value)
        return super().__mul__(other)

    __rmul__ = __mul__


@dataclass(frozen=True)
class GwpFactor:
    """100-year global-warming potential of a gas relative to CO2."""

    gas_name: str
    factor: float

    def __post_init__(self) -> None:
        if not isinstance(self.factor, (int, float)) or isinstance(self.factor, bool):
            raise InvalidQuantityError(f"GWP factor must be a number, got {self.factor!r}")
        f = float(self.factor)
        if not math.isfinite(f) or f <= 0:
            raise InvalidQuantityError(f"GWP factor must be finite and positive, got {f!r}")
        if self.gas_name.strip().lower() == "co2" and f != 1.0:
            raise InvalidQuantityError("the GWP factor of CO2 is 1 by definition")
        object.__setattr__(self, "factor", f)


# Default 100-year factors. Methane keeps the older IPCC AR4 value of 25;
# newer assessments differ, so callers may supply their own GwpFactor.
DEFAULT_GWP_FACTORS: dict[str, float] = {
    "co2": 1.0,
    "ch4": 25.0,
    "methane": 25.0,
}


def gwp_factor(gas_name: str) -> GwpFactor:
    """Look up the default warming potential for a gas by name."""
    key = gas_name.strip().lower()
    try:
        return GwpFactor(gas_name, DEFAULT_GWP_FACTORS[key])
    except KeyError:
        raise MissingFactorError(
            f"no default GWP factor for gas '{gas_name}'; supply a GwpFactor explicitly"
        ) from None


def _expect(quantity, cls, what: str):
    if not isinstance(quantity, cls):
        raise InvalidQuantityError(
            f"{what} must be {cls.__name__}, got {type(quantity).__name__}"
        )
    return quantity


def emissions_from_energy(energy: Energy, intensity: CarbonIntensity) -> CarbonMass:
    """Convert consumed energy to emitted CO2eq mass on a given grid.

    The result is the exact product energy_kWh x intensity_g_per_kWh,
    expressed in kg; no hidden rounding.
    """
    _expect(energy, Energy, "energy")
    _expect(intensity, CarbonIntensity, "intensity")
    return CarbonMass(energy.value * intensity.value / 1000.0)


def co2eq_from_gas(mass: CarbonMass, gwp: GwpFactor | str) -> CarbonMass:
    """Convert a mass of some greenhouse gas to its CO2-equivalent mass.

    ``gwp`` may be a :class:`GwpFactor` or a gas name resolved against
    :data:`DEFAULT_GWP_FACTORS`.
    """
    _expect(mass, CarbonMass, "mass")
    if isinstance(gwp, str):
        gwp = gwp_factor(gwp)
    _expect(gwp, GwpFactor, "gwp")
    return CarbonMass(mass.value * gwp.factor)


def parse_duration(text: str) -> Duration:
    """Parse composite (``"118d5h41m"``) or decimal-hour (``"12.5h"``) durations."""
    return Duration.parse(text)

"""Exception hierarchy and warning categories.

Errors come in two families so the CLI can map them to exit codes:
input/validation problems (bad manifests, unparseable quantities, unresolved
references) exit with status 2, computation-domain problems (division by a
zero rate, empty series, under-determined rows) with status 3.
"""

from __future__ import annotations


class MlcaError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class InputError(MlcaError):
    """Invalid input: manifests, quantity text, references, file contents."""

    exit_code = 2


class ComputationError(MlcaError):
    """A computation cannot proceed on otherwise well-formed inputs."""

    exit_code = 3


class QuantityParseError(InputError):
    """Quantity or duration text did not match the unit grammar."""


class InvalidQuantityError(ComputationError):
    """Non-finite or negative value, or an operation mixing dimensions."""


class MissingFactorError(InputError):
    """Unknown greenhouse gas with no warming-potential factor supplied."""


class ManifestError(InputError):
    """Manifest cannot be parsed or violates the schema."""


class DanglingReferenceError(InputError):
    """A manifest entry references a profile that does not exist."""


class InvariantViolationError(InputError):
    """A declared value set violates a documented invariant."""


class NotFoundError(InputError):
    """Registry lookup failed."""


class InvalidProfileError(InputError):
    """Profile parameter outside its legal range (e.g. PUE below 1)."""


class DomainError(ComputationError):
    """Division-domain error: a rate or share over a zero denominator."""


class EmptyInputError(ComputationError):
    """An analysis was asked to summarize an empty series."""


class InsufficientDataError(ComputationError):
    """Too few data points for the requested estimate."""


class NoOverlapError(ComputationError):
    """Two time ranges that must overlap do not."""


class CannotCompleteError(ComputationError):
    """Comparison row is under-determined; lists the missing fields."""


class EmptyReportError(ComputationError):
    """Report would contain no rows."""


class CannotExtrapolateError(ComputationError):
    """Aggregate figures required for extrapolation are missing."""


class TelemetryFormatError(InputError):
    """Telemetry CSV is malformed; message carries the offending row."""


class PlausibilityWarning(UserWarning):
    """Value is legal but outside the range seen in practice."""


class TelemetryGapWarning(UserWarning):
    """Sampling gaps were found while ingesting a telemetry series."""

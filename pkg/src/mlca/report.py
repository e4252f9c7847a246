"""Aggregation and presentation of accounting results.

Builds life-cycle reports (embodied / dynamic / idle), cross-model
comparison rows with back-derivation of missing cells and consistency
flagging, per-process project breakdowns, and aggregate extrapolations.
Every report renders deterministically to json, csv or markdown; raw
double-precision values are preserved in json, the text formats use a
fixed display precision.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Mapping, Sequence

from .embodied import EmbodiedBreakdown, embodied_for_hours, run_embodied
from .errors import (
    CannotCompleteError,
    CannotExtrapolateError,
    EmptyReportError,
    InvalidQuantityError,
    QuantityParseError,
)
from .operational import (
    OperationalResult,
    PartitionPowerModes,
    dynamic_energy,
    run_operational,
)
from .units import CarbonIntensity, CarbonMass, Duration, Energy, emissions_from_energy

if TYPE_CHECKING:
    from .profiles import Project
    from .telemetry import DeploymentSummary

__all__ = [
    "LcaRow",
    "LcaReport",
    "lca_report",
    "project_lca",
    "ComparisonRow",
    "ComparisonReport",
    "complete_row",
    "BreakdownRow",
    "BreakdownReport",
    "project_breakdown",
    "IdleReading",
    "WorkshopReport",
    "workshop_extrapolation",
    "RunTable",
    "embodied_table",
    "training_table",
    "idle_table",
    "parse_param_count",
    "format_param_count",
    "render",
]

LCA_SOURCES = ("embodied", "dynamic", "idle")

_SOURCE_LABELS = {
    "embodied": "Embodied emissions",
    "dynamic": "Dynamic consumption",
    "idle": "Idle consumption",
}


# ---------------------------------------------------------------------------
# LCA report


@dataclass(frozen=True)
class LcaRow:
    source: str
    mass: CarbonMass
    share: float


@dataclass(frozen=True)
class LcaReport:
    rows: tuple[LcaRow, ...]
    total: CarbonMass


def lca_report(embodied: CarbonMass, dynamic: CarbonMass, idle: CarbonMass) -> LcaReport:
    """Life-cycle table over the three emission sources.

    Zero-mass sources are omitted; an all-zero input is an error rather than
    an empty table.
    """
    masses = {}
    for source, mass in zip(LCA_SOURCES, (embodied, dynamic, idle)):
        if not isinstance(mass, CarbonMass):
            raise InvalidQuantityError(f"{source} must be CarbonMass, got {type(mass).__name__}")
        masses[source] = mass
    total = CarbonMass(math.fsum(m.kg for m in masses.values()))
    if total.kg == 0:
        raise EmptyReportError("all emission sources are zero; nothing to report")
    rows = tuple(
        LcaRow(source=s, mass=m, share=m.kg / total.kg)
        for s, m in masses.items()
        if m.kg > 0
    )
    return LcaReport(rows=rows, total=total)


def project_lca(project: Project) -> LcaReport:
    """Full LCA for a project: sums embodied, dynamic and idle over its runs."""
    embodied_kg = []
    dynamic_kg = []
    idle_kg = []
    for run in project.runs:
        embodied_kg.append(run_embodied(run).total.kg)
        op = run_operational(run)
        dynamic_kg.append(op.dynamic_mass.kg)
        idle_kg.append(op.idle_mass.kg)
    if not project.runs:
        raise EmptyReportError("project has no runs to report on")
    return lca_report(
        CarbonMass(math.fsum(embodied_kg)),
        CarbonMass(math.fsum(dynamic_kg)),
        CarbonMass(math.fsum(idle_kg)),
    )


# ---------------------------------------------------------------------------
# Cross-model comparison


ROW_FIELDS = ("pue", "intensity", "energy", "emissions", "emissions_with_pue")


@dataclass(frozen=True)
class ComparisonRow:
    """One model's training footprint, possibly with missing cells.

    ``provenance`` maps present field names to ``"reported"`` or
    ``"derived"``; :func:`complete_row` fills missing cells via the
    relations emissions = energy_excl_pue x intensity and
    emissions_with_pue = emissions x pue, tagging them ``"derived"``.
    ``energy_includes_pue`` marks rows whose listed energy already contains
    the datacenter overhead.
    """

    model_name: str
    param_count: int
    pue: float | None = None
    intensity: CarbonIntensity | None = None
    energy: Energy | None = None
    emissions: CarbonMass | None = None
    emissions_with_pue: CarbonMass | None = None
    energy_includes_pue: bool = False
    provenance: Mapping[str, str] = field(default_factory=dict)
    inconsistent: bool = False
    inconsistency_note: str | None = None


@dataclass(frozen=True)
class ComparisonReport:
    rows: tuple[ComparisonRow, ...]


def _row_values(row: ComparisonRow) -> dict[str, float | None]:
    return {
        "pue": float(row.pue) if row.pue is not None else None,
        "intensity": row.intensity.g_per_kwh if row.intensity is not None else None,
        "energy": row.energy.kwh if row.energy is not None else None,
        "emissions": row.emissions.kg if row.emissions is not None else None,
        "emissions_with_pue": (
            row.emissions_with_pue.kg if row.emissions_with_pue is not None else None
        ),
    }


def complete_row(row: ComparisonRow, tolerance: float = 0.05) -> ComparisonRow:
    """Fill the derivable cells of a comparison row and check consistency.

    Derived cells are tagged in ``provenance``. Over-determined rows whose
    reported cells disagree by more than ``tolerance`` (relative) keep their
    reported values and carry an inconsistency flag instead of being
    silently reconciled. Completing an already-complete row is a no-op.
    """
    v = _row_values(row)
    derived: list[str] = []

    def excl_pue(energy: float) -> float:
        # Energy net of datacenter overhead, the quantity the relations use.
        return energy / v["pue"] if row.energy_includes_pue else energy

    def incl_pue(energy_excl: float) -> float:
        return energy_excl * v["pue"] if row.energy_includes_pue else energy_excl

    def have(*names: str) -> bool:
        return all(v[n] is not None for n in names)

    def energy_usable() -> bool:
        # Under the includes-pue convention the listed energy is unusable
        # until the pue itself is known.
        return have("energy") and (not row.energy_includes_pue or have("pue"))

    progress = True
    while progress:
        progress = False
        if v["emissions"] is None and energy_usable() and have("intensity"):
            v["emissions"] = excl_pue(v["energy"]) * v["intensity"] / 1000.0
            derived.append("emissions")
            progress = True
        if v["emissions"] is None and have("emissions_with_pue", "pue"):
            v["emissions"] = v["emissions_with_pue"] / v["pue"]
            derived.append("emissions")
            progress = True
        if (
            v["energy"] is None
            and have("emissions", "intensity")
            and v["intensity"] > 0
            and (not row.energy_includes_pue or have("pue"))
        ):
            v["energy"] = incl_pue(v["emissions"] * 1000.0 / v["intensity"])
            derived.append("energy")
            progress = True
        if v["emissions_with_pue"] is None and have("emissions", "pue"):
            v["emissions_with_pue"] = v["emissions"] * v["pue"]
            derived.append("emissions_with_pue")
            progress = True
        if v["intensity"] is None and have("emissions") and energy_usable():
            energy_excl = excl_pue(v["energy"])
            if energy_excl > 0:
                v["intensity"] = v["emissions"] * 1000.0 / energy_excl
                derived.append("intensity")
                progress = True
        if v["pue"] is None and have("emissions_with_pue", "emissions") and v["emissions"] > 0:
            v["pue"] = v["emissions_with_pue"] / v["emissions"]
            derived.append("pue")
            progress = True

    missing = [name for name in ("energy", "intensity", "emissions") if v[name] is None]
    if missing:
        raise CannotCompleteError(
            f"row '{row.model_name}' is under-determined; cannot derive: {', '.join(missing)}"
        )

    # Consistency of the now fully-populated relation system.
    notes = []
    if energy_usable() and have("intensity", "emissions"):
        implied = excl_pue(v["energy"]) * v["intensity"] / 1000.0
        if v["emissions"] > 0 and abs(implied - v["emissions"]) / v["emissions"] > tolerance:
            notes.append(
                f"emissions {v['emissions'] / 1000.0:.1f} t vs energy x intensity "
                f"{implied / 1000.0:.1f} t "
                f"({abs(implied - v['emissions']) / v['emissions']:.1%} disagreement)"
            )
    if have("emissions_with_pue", "emissions", "pue"):
        implied = v["emissions"] * v["pue"]
        reference = v["emissions_with_pue"]
        if reference > 0 and abs(implied - reference) / reference > tolerance:
            notes.append(
                f"emissions x PUE {reference / 1000.0:.1f} t vs derived "
                f"{implied / 1000.0:.1f} t "
                f"({abs(implied - reference) / reference:.1%} disagreement)"
            )

    provenance = dict(row.provenance)
    for name in derived:
        provenance[name] = "derived"
    return replace(
        row,
        pue=v["pue"],
        intensity=CarbonIntensity(v["intensity"]),
        energy=Energy(v["energy"]),
        emissions=CarbonMass(v["emissions"]),
        emissions_with_pue=(
            CarbonMass(v["emissions_with_pue"]) if v["emissions_with_pue"] is not None else None
        ),
        provenance=provenance,
        inconsistent=bool(notes),
        inconsistency_note="; ".join(notes) if notes else None,
    )


def compare_project(project: Project, tolerance: float = 0.05) -> ComparisonReport:
    """Complete every comparison row declared in a project manifest."""
    if not project.comparison:
        raise EmptyReportError("project declares no comparison rows")
    return ComparisonReport(
        rows=tuple(complete_row(row, tolerance=tolerance) for row in project.comparison)
    )


_PARAM_SUFFIXES = (("T", 10**12), ("B", 10**9), ("M", 10**6), ("K", 10**3))


def parse_param_count(value: str | int) -> int:
    """Parse parameter counts like ``"176B"`` or plain integers."""
    if isinstance(value, bool):
        raise QuantityParseError(f"cannot parse parameter count from {value!r}")
    if isinstance(value, int):
        if value < 0:
            raise QuantityParseError("parameter count must be non-negative")
        return value
    text = value.strip()
    for suffix, scale in _PARAM_SUFFIXES:
        if text.upper().endswith(suffix):
            number = text[: -len(suffix)]
            try:
                return round(float(number) * scale)
            except ValueError:
                break
    try:
        return int(text)
    except ValueError:
        raise QuantityParseError(f"cannot parse parameter count from '{value}'") from None


def format_param_count(count: int) -> str:
    for suffix, scale in _PARAM_SUFFIXES:
        if count >= scale and count % scale == 0:
            return f"{count // scale}{suffix}"
    return str(count)


# ---------------------------------------------------------------------------
# Project breakdown


@dataclass(frozen=True)
class BreakdownRow:
    process_name: str
    energy: Energy
    mass: CarbonMass
    share: float


@dataclass(frozen=True)
class BreakdownReport:
    rows: tuple[BreakdownRow, ...]
    total_energy: Energy
    total_mass: CarbonMass


def project_breakdown(project: Project) -> BreakdownReport:
    """Per-process energy and emissions, sorted by mass descending.

    Measured processes are charged at the project's default grid; runs
    contribute their dynamic energy at their own grid. Ties keep manifest
    order.
    """
    entries: list[tuple[str, Energy, CarbonMass]] = []
    for process in project.processes:
        mass = emissions_from_energy(process.energy, project.grid.intensity)
        entries.append((process.name, process.energy, mass))
    for run in project.runs:
        energy = dynamic_energy(run)
        entries.append((run.name, energy, emissions_from_energy(energy, run.grid.intensity)))
    if not entries:
        raise EmptyReportError("project has no processes or runs to break down")
    entries.sort(key=lambda e: -e[2].kg)
    total_energy = Energy(math.fsum(e[1].kwh for e in entries))
    total_mass = CarbonMass(math.fsum(e[2].kg for e in entries))
    rows = tuple(
        BreakdownRow(process_name=name, energy=energy, mass=mass, share=mass.kg / total_mass.kg)
        for name, energy, mass in entries
    )
    return BreakdownReport(rows=rows, total_energy=total_energy, total_mass=total_mass)


# ---------------------------------------------------------------------------
# Workshop-wide extrapolation


@dataclass(frozen=True)
class IdleReading:
    """One way of attributing idle emissions to an aggregate workload."""

    label: str
    idle: CarbonMass
    grand_total: CarbonMass
    basis: str


@dataclass(frozen=True)
class WorkshopReport:
    gpu_hours: Duration
    dynamic_energy: Energy
    dynamic_mass: CarbonMass
    embodied: EmbodiedBreakdown
    readings: tuple[IdleReading, ...]
    warning: str | None


def workshop_extrapolation(
    project: Project, modes: PartitionPowerModes | None = None
) -> WorkshopReport:
    """Extrapolate embodied and idle emissions over a project's aggregate hours.

    Embodied emissions come from the aggregate GPU-hours declared in the
    manifest's extrapolation block. Idle emissions have no single defensible
    basis, so every available reading is emitted: the partition-power ratio
    applied to dynamic mass, and back-solved values from any externally
    reported totals. Mutually inconsistent reported readings raise a warning
    in the report rather than being averaged away.
    """
    ext = project.extrapolation
    if ext is None:
        raise CannotExtrapolateError(
            "manifest has no [extrapolation] block with aggregate GPU-hours"
        )
    breakdown = project_breakdown(project)
    dyn_energy = breakdown.total_energy
    dyn_mass = breakdown.total_mass

    per_server = ext.server.accelerators_per_server
    if per_server is None:
        raise CannotExtrapolateError(
            f"server profile '{ext.server.name}' does not declare accelerators_per_server"
        )
    emb = embodied_for_hours(ext.gpu_hours, ext.accelerator, ext.server, per_server)

    readings: list[IdleReading] = []
    modes = modes if modes is not None else ext.partition
    if modes is not None and modes.dynamic.watts > 0:
        ratio = modes.non_dynamic.watts / modes.dynamic.watts
        idle = dyn_mass * ratio
        readings.append(
            IdleReading(
                label="partition-ratio",
                idle=idle,
                grand_total=dyn_mass + emb.total + idle,
                basis=f"dynamic mass x (infrastructure + idle) / dynamic partition power"
                f" = {ratio:.4f}",
            )
        )
    if ext.reported_total is not None:
        idle = ext.reported_total - dyn_mass - emb.total
        readings.append(
            IdleReading(
                label="reported-total",
                idle=idle,
                grand_total=ext.reported_total,
                basis=f"reported grand total {ext.reported_total.tonnes:.2f} t"
                " minus computed dynamic and embodied",
            )
        )
    if ext.reported_embodied_plus_idle is not None:
        idle = ext.reported_embodied_plus_idle - emb.total
        readings.append(
            IdleReading(
                label="reported-overhead",
                idle=idle,
                grand_total=dyn_mass + ext.reported_embodied_plus_idle,
                basis=f"reported embodied+idle {ext.reported_embodied_plus_idle.tonnes:.2f} t"
                " minus computed embodied",
            )
        )
    if not readings:
        raise CannotExtrapolateError(
            "no idle basis available: declare a partition or reported totals"
        )

    warning = None
    by_label = {r.label: r for r in readings}
    if "reported-total" in by_label and "reported-overhead" in by_label:
        a = by_label["reported-total"].idle.tonnes
        b = by_label["reported-overhead"].idle.tonnes
        if b > 0 and abs(a - b) / b > 0.01:
            warning = (
                "reported figures are mutually inconsistent: idle back-solved from the"
                f" grand total is {a:.2f} t but from the embodied+idle figure is {b:.2f} t;"
                " both readings are shown"
            )
    return WorkshopReport(
        gpu_hours=ext.gpu_hours,
        dynamic_energy=dyn_energy,
        dynamic_mass=dyn_mass,
        embodied=emb,
        readings=tuple(readings),
        warning=warning,
    )


# ---------------------------------------------------------------------------
# Per-run tables for the embodied / train / idle subcommands


@dataclass(frozen=True)
class RunTable:
    """Generic per-run table: a kind tag, column headers and raw rows."""

    kind: str
    header: tuple[str, ...]
    rows: tuple[tuple, ...]


def embodied_table(project: Project) -> RunTable:
    if not project.runs:
        raise EmptyReportError("project has no runs")
    rows = []
    for run in project.runs:
        b = run_embodied(run)
        rows.append(
            (
                run.name,
                b.accelerator_hours.hours,
                b.server_hours.hours,
                b.accelerator_mass.tonnes,
                b.server_mass.tonnes,
                b.total.tonnes,
            )
        )
    return RunTable(
        kind="embodied",
        header=(
            "Run",
            "GPU-hours",
            "Server-hours",
            "Accelerators (t CO2eq)",
            "Servers (t CO2eq)",
            "Total (t CO2eq)",
        ),
        rows=tuple(rows),
    )


def training_table(project: Project) -> RunTable:
    if not project.runs:
        raise EmptyReportError("project has no runs")
    rows = []
    for run in project.runs:
        energy = dynamic_energy(run)
        mass = emissions_from_energy(energy, run.grid.intensity)
        rows.append(
            (
                run.name,
                run.gpu_hours.hours,
                run.accelerator.tdp.watts,
                run.utilization,
                energy.kwh,
                mass.tonnes,
            )
        )
    return RunTable(
        kind="train",
        header=("Run", "GPU-hours", "TDP (W)", "Utilization", "Energy (kWh)", "CO2eq (t)"),
        rows=tuple(rows),
    )


def idle_table(project: Project) -> RunTable:
    if not project.runs:
        raise EmptyReportError("project has no runs")
    rows = []
    for run in project.runs:
        op = run_operational(run)
        rows.append((run.name, run.idle_method, op.idle_energy.kwh, op.idle_mass.tonnes))
    return RunTable(
        kind="idle",
        header=("Run", "Method", "Idle energy (kWh)", "CO2eq (t)"),
        rows=tuple(rows),
    )


# ---------------------------------------------------------------------------
# Rendering


def _fmt(value: float, decimals: int, sep: bool = False) -> str:
    return f"{value:,.{decimals}f}" if sep else f"{value:.{decimals}f}"


def _md_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join(" --- " for _ in header) + "|"]
    for row in rows:
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines) + "\n"

def _csv_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json_doc(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _lca_dict(report: LcaReport) -> dict:
    return {
        "report": "lca",
        "rows": [
            {"source": r.source, "mass_kg": r.mass.kg, "share": r.share} for r in report.rows
        ],
        "total_kg": report.total.kg,
    }


def _lca_cells(report: LcaReport, sep: bool) -> list[list[str]]:
    rows = [
        [_SOURCE_LABELS[r.source], _fmt(r.mass.tonnes, 2, sep), _fmt(100 * r.share, 1) + "%"]
        for r in report.rows
    ]
    rows.append(["Total", _fmt(report.total.tonnes, 2, sep), "100.0%"])
    return rows


_LCA_HEADER = ("Source", "CO2eq emissions (tonnes)", "Percentage of total")


def _comparison_dict(report: ComparisonReport) -> dict:
    rows = []
    for r in report.rows:
        rows.append(
            {
                "model": r.model_name,
                "parameters": r.param_count,
                "pue": r.pue,
                "intensity_g_per_kwh": r.intensity.g_per_kwh if r.intensity else None,
                "energy_kwh": r.energy.kwh if r.energy else None,
                "energy_includes_pue": r.energy_includes_pue,
                "emissions_kg": r.emissions.kg if r.emissions else None,
                "emissions_with_pue_kg": (
                    r.emissions_with_pue.kg if r.emissions_with_pue else None
                ),
                "provenance": dict(r.provenance),
                "inconsistent": r.inconsistent,
                "inconsistency_note": r.inconsistency_note,
            }
        )
    return {"report": "comparison", "rows": rows}


_COMPARISON_HEADER = (
    "Model",
    "Parameters",
    "Datacenter PUE",
    "Grid intensity (gCO2eq/kWh)",
    "Energy (MWh)",
    "CO2eq emissions (t)",
    "CO2eq emissions x PUE (t)",
    "Flags",
)


def _comparison_cells(report: ComparisonReport, markdown: bool) -> list[list[str]]:
    def cell(text: str, field_name: str, row: ComparisonRow) -> str:
        if markdown and row.provenance.get(field_name) == "derived":
            return f"*{text}*"
        return text

    rows = []
    for r in report.rows:
        rows.append(
            [
                r.model_name,
                format_param_count(r.param_count),
                cell(f"{r.pue:g}", "pue", r) if r.pue is not None else "",
                cell(f"{r.intensity.g_per_kwh:g}", "intensity", r) if r.intensity else "",
                cell(_fmt(r.energy.mwh, 0, markdown), "energy", r) if r.energy else "",
                cell(_fmt(r.emissions.tonnes, 2, markdown), "emissions", r) if r.emissions else "",
                (
                    cell(_fmt(r.emissions_with_pue.tonnes, 2, markdown), "emissions_with_pue", r)
                    if r.emissions_with_pue
                    else ""
                ),
                f"inconsistent: {r.inconsistency_note}" if r.inconsistent else "",
            ]
        )
    return rows


def _breakdown_dict(report: BreakdownReport) -> dict:
    return {
        "report": "breakdown",
        "rows": [
            {
                "process": r.process_name,
                "energy_kwh": r.energy.kwh,
                "mass_kg": r.mass.kg,
                "share": r.share,
            }
            for r in report.rows
        ],
        "total_energy_kwh": report.total_energy.kwh,
        "total_mass_kg": report.total_mass.kg,
    }


_BREAKDOWN_HEADER = (
    "Process",
    "Energy consumed (kWh)",
    "CO2eq emissions (t)",
    "Percentage of total",
)


def _breakdown_cells(report: BreakdownReport, sep: bool) -> list[list[str]]:
    rows = [
        [r.process_name, _fmt(r.energy.kwh, 0, sep), _fmt(r.mass.tonnes, 2), _fmt(100 * r.share, 2) + "%"]
        for r in report.rows
    ]
    rows.append(
        ["Total", _fmt(report.total_energy.kwh, 0, sep), _fmt(report.total_mass.tonnes, 2), "100.00%"]
    )
    return rows


def _workshop_dict(report: WorkshopReport) -> dict:
    return {
        "report": "extrapolation",
        "gpu_hours": report.gpu_hours.hours,
        "dynamic_energy_kwh": report.dynamic_energy.kwh,
        "dynamic_mass_kg": report.dynamic_mass.kg,
        "embodied": {
            "server_kg": report.embodied.server_mass.kg,
            "accelerator_kg": report.embodied.accelerator_mass.kg,
            "total_kg": report.embodied.total.kg,
            "server_hours": report.embodied.server_hours.hours,
            "accelerator_hours": report.embodied.accelerator_hours.hours,
        },
        "idle_readings": [
            {
                "label": r.label,
                "idle_kg": r.idle.kg,
                "grand_total_kg": r.grand_total.kg,
                "basis": r.basis,
            }
            for r in report.readings
        ],
        "warning": report.warning,
    }


def _workshop_markdown(report: WorkshopReport) -> str:
    summary = _md_table(
        ("Quantity", "Value"),
        [
            ["Aggregate GPU-hours", _fmt(report.gpu_hours.hours, 0, True)],
            ["Dynamic energy (kWh)", _fmt(report.dynamic_energy.kwh, 0, True)],
            ["Dynamic emissions (t CO2eq)", _fmt(report.dynamic_mass.tonnes, 2)],
            ["Embodied, servers (t CO2eq)", _fmt(report.embodied.server_mass.tonnes, 2)],
            ["Embodied, accelerators (t CO2eq)", _fmt(report.embodied.accelerator_mass.tonnes, 2)],
            ["Embodied, total (t CO2eq)", _fmt(report.embodied.total.tonnes, 2)],
        ],
    )
    readings = _md_table(
        ("Idle reading", "Idle (t CO2eq)", "Grand total (t CO2eq)", "Basis"),
        [
            [r.label, _fmt(r.idle.tonnes, 2), _fmt(r.grand_total.tonnes, 2), r.basis]
            for r in report.readings
        ],
    )
    text = summary + "\n" + readings
    if report.warning:
        text += f"\n> warning: {report.warning}\n"
    return text


def _workshop_csv(report: WorkshopReport) -> str:
    rows = [
        ["gpu_hours", _fmt(report.gpu_hours.hours, 0)],
        ["dynamic_energy_kwh", _fmt(report.dynamic_energy.kwh, 0)],
        ["dynamic_mass_t", _fmt(report.dynamic_mass.tonnes, 2)],
        ["embodied_server_t", _fmt(report.embodied.server_mass.tonnes, 2)],
        ["embodied_accelerator_t", _fmt(report.embodied.accelerator_mass.tonnes, 2)],
        ["embodied_total_t", _fmt(report.embodied.total.tonnes, 2)],
    ]
    for r in report.readings:
        rows.append([f"idle_{r.label}_t", _fmt(r.idle.tonnes, 2)])
        rows.append([f"grand_total_{r.label}_t", _fmt(r.grand_total.tonnes, 2)])
    if report.warning:
        rows.append(["warning", report.warning])
    return _csv_table(("quantity", "value"), rows)


def _run_table_dict(table: RunTable) -> dict:
    return {
        "report": table.kind,
        "header": list(table.header),
        "rows": [list(row) for row in table.rows],
    }


def _run_table_cells(table: RunTable) -> list[list[str]]:
    cells = []
    for row in table.rows:
        cells.append([x if isinstance(x, str) else _fmt(float(x), 2) for x in row])
    return cells


def _deployment_dict(summary: DeploymentSummary) -> dict:
    return {
        "report": "deployment",
        "total_energy_kwh": summary.total_energy.kwh,
        "duration_hours": summary.duration.hours,
        "components": {
            c.value: {"energy_kwh": ce.energy.kwh, "fraction": ce.fraction}
            for c, ce in sorted(
                summary.per_component.items(), key=lambda item: -item[1].energy.kwh
            )
        },
        "mean_power_w": summary.mean_power.watts,
        "min_power_w": summary.min_power.watts,
        "max_power_w": summary.max_power.watts,
        "baseline_energy_per_bucket_kwh": summary.baseline.energy.kwh,
        "baseline_method": summary.baseline.method,
        "total_requests": summary.total_requests,
        "requests_per_hour": summary.requests_per_hour,
        "grid_region": summary.grid.region,
        "grid_intensity_g_per_kwh": summary.grid.intensity.g_per_kwh,
        "pue": summary.pue,
        "total_mass_kg": summary.total_mass.kg,
        "daily_mass_kg": summary.daily_mass.kg,
    }


def _deployment_rows(summary: DeploymentSummary, sep: bool) -> list[list[str]]:
    rows = [
        ["total_energy_kwh", _fmt(summary.total_energy.kwh, 2, sep)],
        ["duration_hours", _fmt(summary.duration.hours, 2, sep)],
        ["duration_days", _fmt(summary.duration.days, 2)],
    ]
    for component, ce in sorted(
        summary.per_component.items(), key=lambda item: -item[1].energy.kwh
    ):
        rows.append([f"energy_{component.value}_kwh", _fmt(ce.energy.kwh, 2, sep)])
        rows.append([f"fraction_{component.value}", _fmt(100 * ce.fraction, 1) + "%"])
    rows += [
        ["mean_power_w", _fmt(summary.mean_power.watts, 0, sep)],
        ["min_power_w", _fmt(summary.min_power.watts, 0, sep)],
        ["max_power_w", _fmt(summary.max_power.watts, 0, sep)],
        ["baseline_energy_per_bucket_kwh", _fmt(summary.baseline.energy.kwh, 3)],
        ["baseline_method", summary.baseline.method],
        ["total_requests", _fmt(float(summary.total_requests), 0, sep)],
        ["requests_per_hour", _fmt(summary.requests_per_hour, 1)],
        ["grid_region", summary.grid.region],
        ["grid_intensity_g_per_kwh", f"{summary.grid.intensity.g_per_kwh:g}"],
        ["pue", f"{summary.pue:g}"],
        ["total_mass_kg", _fmt(summary.total_mass.kg, 1, sep)],
        ["daily_mass_kg", _fmt(summary.daily_mass.kg, 1)],
    ]
    return rows


def render(report, fmt: str = "markdown") -> bytes:
    """Render any report object to a deterministic byte stream.

    ``fmt`` is one of ``json``, ``csv``, ``markdown``. Markdown mirrors the
    familiar table layouts and marks derived cells in italics; json keeps
    raw full-precision values.
    """
    from .telemetry import DeploymentSummary as _DeploymentSummary

    if fmt not in ("json", "csv", "markdown"):
        raise QuantityParseError(f"unknown output format '{fmt}'")

    if isinstance(report, LcaReport):
        if fmt == "json":
            text = _json_doc(_lca_dict(report))
        elif fmt == "csv":
            text = _csv_table(_LCA_HEADER, _lca_cells(report, sep=False))
        else:
            text = _md_table(_LCA_HEADER, _lca_cells(report, sep=True))
    elif isinstance(report, ComparisonReport):
        if fmt == "json":
            text = _json_doc(_comparison_dict(report))
        elif fmt == "csv":
            text = _csv_table(_COMPARISON_HEADER, _comparison_cells(report, markdown=False))
        else:
            text = _md_table(_COMPARISON_HEADER, _comparison_cells(report, markdown=True))
    elif isinstance(report, BreakdownReport):
        if fmt == "json":
            text = _json_doc(_breakdown_dict(report))
        elif fmt == "csv":
            text = _csv_table(_BREAKDOWN_HEADER, _breakdown_cells(report, sep=False))
        else:
            text = _md_table(_BREAKDOWN_HEADER, _breakdown_cells(report, sep=True))
    elif isinstance(report, WorkshopReport):
        if fmt == "json":
            text = _json_doc(_workshop_dict(report))
        elif fmt == "csv":
            text = _workshop_csv(report)
        else:
            text = _workshop_markdown(report)
    elif isinstance(report, RunTable):
        if fmt == "json":
            text = _json_doc(_run_table_dict(report))
        elif fmt == "csv":
            text = _csv_table(report.header, _run_table_cells(report))
        else:
            text = _md_table(report.header, _run_table_cells(report))
    elif isinstance(report, _DeploymentSummary):
        if fmt == "json":
            text = _json_doc(_deployment_dict(report))
        elif fmt == "csv":
            text = _csv_table(("quantity", "value"), _deployment_rows(report, sep=False))
        else:
            text = _md_table(("Quantity", "Value"), _deployment_rows(report, sep=True))
    else:
        raise InvalidQuantityError(f"cannot render object of type {type(report).__name__}")
    return text.encode("utf-8")

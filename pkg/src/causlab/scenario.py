"""Declarative scenario files and the orchestration behind the CLI.

A scenario is a single YAML document (``schema: 1``) naming a
dielectric model, a slab, the analyses to run, and where the artifacts
go.  The whole file is validated before any computation starts; a run
then writes the requested CSV/JSON artifacts plus a ``report.json``
aggregating every result and a machine-readable echo of all resolved
defaults.  Nothing in the artifacts depends on wall-clock time or on
absolute paths, so two runs of the same file are byte-identical.

Schema::

    schema: 1
    units: natural              # or: si  (omega_ref in rad/s required)
    omega_ref: 1.0              # unit carrier, optional for natural
    model:
      kind: oscillators         # oscillators | vacuum | table
      plasma_frequency: 1.0
      resonances:
        - {strength: 1.0, frequency: 2.0, damping: 0.1}
    slab:
      thickness: 5.0
    grid:                       # optional; omitted = auto from the model
      omega_max: 40.0
      samples: 4097
    pulse:                      # optional; omitted = auto probe
      kind: step_sine           # step_sine | truncated_sine | gaussian
      carrier: 2.0
      front_time: 204.8
      samples: 65536
      sample_spacing: 0.0078125
    analyses: [spectrum, sum_rule, kk_check, kernel, scan, causality]
    literal_eq17: false
    output: out

All internal math is c = 1 with frequencies in units of the reference
frequency; ``units: natural`` files declare values already in those
units, ``units: si`` files carry rad/s, seconds, and meters and are
scaled on load.  Artifacts are written back in the file's units.

Exit statuses (used by the CLI): 0 success, 2 validation or output
environment failure, 3 numerical guard tripped mid-run -- the report
then names the guard.  Guard failures *inside* the causality
assessment do not abort the run: a failed constituent is itself a
result (the inverted-population scenario trips the wraparound guard by
physical necessity -- an amplifying slab's output never decays inside
a finite window -- and still reaches an "acausal" verdict two-of-three).
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
import yaml

from .analyticity import certify, scan_upper_half_plane
from .dielectric import (
    DielectricModel,
    FrequencyGrid,
    OscillatorSet,
    Resonance,
    Tabulated,
    Vacuum,
    kk_roundtrip_error,
    sum_rule,
)
from .errors import (
    CauslabError,
    NumericalGuardError,
    ScenarioValidationError,
)
from .slab import SlabConfig, evaluate_spectrum, transmission, write_spectrum_csv
from .timedomain import (
    ALIAS_FRACTION,
    KERNEL_THRESHOLD,
    LEAKAGE_THRESHOLD,
    Waveform,
    assess_causality,
    synthesize_pulse,
    propagate,
    extract_kernel,
    write_waveform_csv,
)

__all__ = [
    "ScenarioConfig",
    "RunResult",
    "load_scenario",
    "run_scenario",
    "ANALYSES",
    "SPEED_OF_LIGHT",
]

#: Execution order of the analysis toggles (files may list any subset).
ANALYSES = ("spectrum", "sum_rule", "kk_check", "kernel", "scan", "causality")

#: m/s; used only to convert SI lengths into c = 1 units.
SPEED_OF_LIGHT = 299792458.0

_PULSE_KINDS = ("step_sine", "truncated_sine", "gaussian")
_PULSE_TIME_KEYS = ("front_time", "sample_spacing", "center", "width", "turn_on")
_PULSE_FREQ_KEYS = ("carrier",)


# --------------------------------------------------------------------------
# configuration and validation


@dataclass(frozen=True)
class ScenarioConfig:
    """A fully validated scenario, held in internal (c = 1) units."""

    name: str
    units: str
    omega_ref: float
    model: DielectricModel
    model_echo: dict
    thickness: float
    grid: Optional[FrequencyGrid]
    pulse: Optional[dict]
    analyses: tuple[str, ...]
    literal_eq17: bool
    output: Optional[str]


def _fail(where: str, message: str) -> ScenarioValidationError:
    return ScenarioValidationError(f"{where}: {message}")


def _require_mapping(node: Any, where: str) -> dict:
    if not isinstance(node, dict):
        raise _fail(where, f"expected a mapping, got {type(node).__name__}")
    return node


def _check_keys(node: dict, where: str, required: tuple, optional: tuple = ()):
    for key in required:
        if key not in node:
            raise _fail(where, f"missing required key '{key}'")
    unknown = sorted(set(node) - set(required) - set(optional))
    if unknown:
        raise _fail(where, f"unknown keys {unknown}")


def _number(
    node: dict,
    key: str,
    where: str,
    *,
    positive: bool = False,
    nonnegative: bool = False,
    default: Optional[float] = None,
) -> float:
    if key not in node:
        if default is not None:
            return default
        raise _fail(where, f"missing required key '{key}'")
    value = node[key]
    if isinstance(value, str):
        # YAML 1.1 parses exponents without a sign ("1.0e15") as strings
        try:
            value = float(value)
        except ValueError:
            raise _fail(where, f"'{key}' must be a number, got {value!r}") from None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _fail(where, f"'{key}' must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise _fail(where, f"'{key}' must be finite, got {value!r}")
    if positive and value <= 0:
        raise _fail(where, f"'{key}' must be > 0, got {value!r}")
    if nonnegative and value < 0:
        raise _fail(where, f"'{key}' must be >= 0, got {value!r}")
    return value


def _integer(node: dict, key: str, where: str, minimum: int) -> int:
    value = node.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise _fail(where, f"'{key}' must be an integer, got {value!r}")
    if value < minimum:
        raise _fail(where, f"'{key}' must be >= {minimum}, got {value}")
    return value


def _parse_model(node: Any, where: str, omega_scale: float, base_dir: Path):
    """Returns (model in internal units, echo dict in file units)."""
    node = _require_mapping(node, where)
    kind = node.get("kind")
    if kind == "vacuum":
        _check_keys(node, where, ("kind",))
        return Vacuum(), {"kind": "vacuum"}

    if kind == "oscillators":
        _check_keys(node, where, ("kind", "plasma_frequency", "resonances"))
        wp = _number(node, "plasma_frequency", where, positive=True)
        entries = node["resonances"]
        if not isinstance(entries, list) or not entries:
            raise _fail(where, "'resonances' must be a non-empty list")
        resonances = []
        echo_res = []
        for i, entry in enumerate(entries):
            sub = f"{where}.resonances[{i}]"
            entry = _require_mapping(entry, sub)
            _check_keys(entry, sub, ("strength", "frequency", "damping"))
            f = _number(entry, "strength", sub)
            freq = _number(entry, "frequency", sub, positive=True)
            gam = _number(entry, "damping", sub, nonnegative=True)
            resonances.append(
                Resonance(f, freq / omega_scale, gam / omega_scale)
            )
            echo_res.append({"strength": f, "frequency": freq, "damping": gam})
        try:
            model = OscillatorSet(wp / omega_scale, tuple(resonances))
        except ValueError as exc:
            raise _fail(where, str(exc)) from exc
        echo = {
            "kind": "oscillators",
            "plasma_frequency": wp,
            "resonances": echo_res,
        }
        return model, echo

    if kind == "table":
        _check_keys(node, where, ("kind", "path"))
        rel = node.get("path")
        if not isinstance(rel, str) or not rel:
            raise _fail(where, "'path' must be a non-empty string")
        table_path = (base_dir / rel).resolve()
        try:
            table = Tabulated.from_csv(table_path)
        except (OSError, ValueError) as exc:
            raise _fail(where, f"cannot load table: {exc}") from exc
        if omega_scale != 1.0:
            table = Tabulated(table.omegas / omega_scale, table.values)
        return table, {"kind": "table", "path": rel}

    raise _fail(
        where, f"'kind' must be one of vacuum/oscillators/table, got {kind!r}"
    )


def _parse_pulse(node: Any, where: str, omega_scale: float) -> dict:
    node = _require_mapping(node, where)
    kind = node.get("kind")
    if kind not in _PULSE_KINDS:
        raise _fail(where, f"'kind' must be one of {_PULSE_KINDS}, got {kind!r}")
    required = ("kind", "carrier", "samples", "sample_spacing")
    per_kind = {
        "step_sine": ("front_time",),
        "truncated_sine": ("front_time",),
        "gaussian": ("center", "width"),
    }
    optional = ("amplitude",) + (("turn_on",) if kind == "truncated_sine" else ())
    _check_keys(node, where, required + per_kind[kind], optional)

    samples = _integer(node, "samples", where, minimum=2)
    dt = _number(node, "sample_spacing", where, positive=True) * omega_scale
    carrier = _number(node, "carrier", where, positive=True) / omega_scale
    pulse: dict[str, Any] = {
        "kind": kind,
        "samples": samples,
        "sample_spacing": dt,
        "carrier": carrier,
        "amplitude": _number(node, "amplitude", where, default=1.0),
    }
    if carrier > ALIAS_FRACTION * math.pi / dt:
        raise _fail(
            where,
            f"carrier {node['carrier']!r} exceeds {ALIAS_FRACTION:g} of the "
            "Nyquist rate fixed by sample_spacing",
        )
    window = (samples - 1) * dt
    if kind in ("step_sine", "truncated_sine"):
        front = _number(node, "front_time", where, nonnegative=True) * omega_scale
        if front >= window:
            raise _fail(where, "'front_time' must lie inside the time window")
        pulse["front_time"] = front
        if kind == "truncated_sine":
            pulse["turn_on"] = (
                _number(node, "turn_on", where, nonnegative=True, default=0.0)
                * omega_scale
            )
    else:
        center = _number(node, "center", where, positive=True) * omega_scale
        width = _number(node, "width", where, positive=True) * omega_scale
        if center >= window:
            raise _fail(where, "'center' must lie inside the time window")
        pulse["center"] = center
        pulse["width"] = width
    return pulse


def load_scenario(path: Union[str, Path]) -> ScenarioConfig:
    """Parse and fully validate a scenario file.

    Every invariant the configuration declares is checked here, before
    any computation: presence and sign of parameters, schema version,
    unit declaration, analysis names, pulse-window consistency, and the
    carrier/Nyquist bound.  Raises ScenarioValidationError with the
    offending key path in the message.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioValidationError(f"cannot read scenario: {exc}") from exc
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioValidationError(
            f"{path.name}: not well-formed YAML: {exc}"
        ) from exc
    doc = _require_mapping(doc, path.name)
    _check_keys(
        doc,
        path.name,
        ("schema", "model", "slab"),
        ("units", "omega_ref", "grid", "pulse", "analyses", "literal_eq17", "output"),
    )

    if doc["schema"] != 1:
        raise _fail(path.name, f"unsupported schema {doc['schema']!r} (expected 1)")

    units = doc.get("units", "natural")
    if units not in ("natural", "si"):
        raise _fail(path.name, f"'units' must be natural or si, got {units!r}")
    if units == "si":
        if "omega_ref" not in doc:
            raise _fail(path.name, "'omega_ref' (rad/s) is required for si units")
        omega_ref = _number(doc, "omega_ref", path.name, positive=True)
    else:
        omega_ref = _number(doc, "omega_ref", path.name, positive=True, default=1.0)
    # internal frequencies are file frequencies divided by this
    omega_scale = omega_ref if units == "si" else 1.0

    model, model_echo = _parse_model(
        doc["model"], "model", omega_scale, path.parent
    )

    slab_node = _require_mapping(doc["slab"], "slab")
    _check_keys(slab_node, "slab", ("thickness",))
    thickness = _number(slab_node, "thickness", "slab", nonnegative=True)
    if units == "si":
        thickness = thickness * omega_ref / SPEED_OF_LIGHT

    grid = None
    if "grid" in doc:
        gnode = _require_mapping(doc["grid"], "grid")
        _check_keys(gnode, "grid", ("omega_max", "samples"))
        omega_max = _number(gnode, "omega_max", "grid", positive=True) / omega_scale
        samples = _integer(gnode, "samples", "grid", minimum=3)
        try:
            grid = FrequencyGrid.uniform(omega_max, samples)
        except ValueError as exc:
            raise _fail("grid", str(exc)) from exc

    pulse = None
    if "pulse" in doc:
        pulse = _parse_pulse(doc["pulse"], "pulse", omega_scale)

    analyses_node = doc.get("analyses", list(ANALYSES))
    if not isinstance(analyses_node, list) or not analyses_node:
        raise _fail(path.name, "'analyses' must be a non-empty list")
    for a in analyses_node:
        if a not in ANALYSES:
            raise _fail(
                path.name, f"unknown analysis {a!r} (choose from {list(ANALYSES)})"
            )
    analyses = tuple(a for a in ANALYSES if a in analyses_node)

    if isinstance(model, Tabulated) and "scan" in analyses:
        raise _fail(
            path.name,
            "the 'scan' analysis needs an analytic model; a table does not "
            "determine the off-axis continuation (drop 'scan' from analyses)",
        )

    literal = doc.get("literal_eq17", False)
    if not isinstance(literal, bool):
        raise _fail(path.name, "'literal_eq17' must be a boolean")

    output = doc.get("output")
    if output is not None and (not isinstance(output, str) or not output):
        raise _fail(path.name, "'output' must be a non-empty string")

    return ScenarioConfig(
        name=path.stem,
        units=units,
        omega_ref=omega_ref,
        model=model,
        model_echo=model_echo,
        thickness=thickness,
        grid=grid,
        pulse=pulse,
        analyses=analyses,
        literal_eq17=literal,
        output=output,
    )


# --------------------------------------------------------------------------
# unit conversion for artifact output


@dataclass(frozen=True)
class _Units:
    """Internal -> file-unit conversion for everything artifacts carry."""

    si: bool
    omega_ref: float

    def omega(self, x: float) -> float:
        return float(x) * (self.omega_ref if self.si else 1.0)

    def time(self, x: float) -> float:
        return float(x) / (self.omega_ref if self.si else 1.0)

    def rate(self, x: float) -> float:
        """Quantities carrying 1/time (the response kernel)."""
        return float(x) * (self.omega_ref if self.si else 1.0)

    def omega_sq(self, x: float) -> float:
        return float(x) * (self.omega_ref**2 if self.si else 1.0)

    def scale_waveform(self, wave: Waveform) -> Waveform:
        if not self.si:
            return wave
        front = None if wave.front_time is None else self.time(wave.front_time)
        return Waveform(wave.values, self.time(wave.dt), front_time=front)

    def scale_response(self, resp):
        if not self.si:
            return resp
        grid = FrequencyGrid(resp.grid.omegas * self.omega_ref)
        return replace(resp, grid=grid, delay=resp.delay / self.omega_ref)

    def scale_probe(self, probe: dict) -> dict:
        out = dict(probe)
        for key in _PULSE_TIME_KEYS:
            if key in out:
                out[key] = self.time(out[key])
        for key in _PULSE_FREQ_KEYS:
            if key in out:
                out[key] = self.omega(out[key])
        return out


# --------------------------------------------------------------------------
# artifact writers


def _write_json(path: Path, payload: dict) -> None:
    with path.open("w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _complex_json(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def _write_kernel_csv(path: Path, kernel, units: _Units) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["s", "g"])
        for i in range(kernel.times.size):
            writer.writerow(
                [
                    repr(units.time(kernel.times[i])),
                    repr(units.rate(kernel.values[i])),
                ]
            )


def _write_scan_grid_csv(path: Path, slab: SlabConfig, report, units: _Units) -> None:
    """tau on the scan lattice: re_zeta,im_zeta,re_value,im_value."""
    zz = report.cell_edges_re[None, :] + 1j * report.cell_edges_im[:, None]
    tau = np.asarray(transmission(slab, zz), dtype=complex)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["re_zeta", "im_zeta", "re_value", "im_value"])
        for iy in range(zz.shape[0]):
            for ix in range(zz.shape[1]):
                writer.writerow(
                    [
                        repr(units.omega(zz[iy, ix].real)),
                        repr(units.omega(zz[iy, ix].imag)),
                        repr(float(tau[iy, ix].real)),
                        repr(float(tau[iy, ix].imag)),
                    ]
                )


def _scan_json(report, units: _Units) -> dict:
    return {
        "region": {
            "re_min": units.omega(report.region.re_min),
            "re_max": units.omega(report.region.re_max),
            "im_min": units.omega(report.region.im_min),
            "im_max": units.omega(report.region.im_max),
        },
        "resolution": int(report.resolution),
        "certified_clean": bool(certify(report)),
        "branch_points": [
            {
                "location": _complex_json(
                    complex(units.omega(p.location.real), units.omega(p.location.imag))
                ),
                "kind": p.kind,
                "multiplicity": int(p.multiplicity),
            }
            for p in report.branch_points
        ],
        "denominator_zeros": [
            {
                "location": _complex_json(
                    complex(units.omega(z.location.real), units.omega(z.location.imag))
                ),
                "multiplicity": int(z.multiplicity),
            }
            for z in report.denominator_zeros
        ],
        "unresolved_cells": [
            {
                "re_min": units.omega(r.re_min),
                "re_max": units.omega(r.re_max),
                "im_min": units.omega(r.im_min),
                "im_max": units.omega(r.im_max),
            }
            for r in report.unresolved
        ],
        "eps_winding_total": int(report.eps_winding_total),
        "denominator_winding_total": int(report.denominator_winding_total),
    }


def _causality_json(rep, units: _Units) -> dict:
    return {
        "verdict": rep.verdict,
        "leakage": None if rep.leakage is None else float(rep.leakage),
        "kernel_fraction": (
            None if rep.kernel_fraction is None else float(rep.kernel_fraction)
        ),
        "singularity_count": (
            None if rep.singularity_count is None else int(rep.singularity_count)
        ),
        "thresholds": {
            "leakage": float(rep.leakage_threshold),
            "kernel_fraction": float(rep.kernel_threshold),
        },
        "indicators": rep.indicators,
        "failures": dict(sorted(rep.failures.items())),
        "probe": units.scale_probe(rep.probe),
    }


# --------------------------------------------------------------------------
# the run itself


@dataclass(frozen=True)
class RunResult:
    """Outcome of run_scenario: exit status, report, artifact names."""

    status: int
    report: dict
    artifacts: tuple[str, ...]
    message: str = ""


def run_scenario(
    config: ScenarioConfig,
    out_dir: Optional[Union[str, Path]] = None,
    literal_eq17: Optional[bool] = None,
) -> RunResult:
    """Execute every requested analysis and write the artifacts.

    `out_dir` overrides the scenario's own `output` entry; the literal
    transmission variant can likewise be forced on from the CLI.  The
    literal flag only affects the *spectrum* artifact -- it exists for
    side-by-side comparison of the two transmission expressions, and
    kernels/verdicts always use the boundary-matched form.
    """
    out = Path(out_dir) if out_dir is not None else Path(config.output or ".")
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        return RunResult(2, {}, (), f"output directory not usable: {exc}")
    if not os.access(out, os.W_OK):
        return RunResult(2, {}, (), f"output directory not writable: {out}")

    literal = config.literal_eq17 if literal_eq17 is None else bool(literal_eq17)
    slab = SlabConfig(model=config.model, thickness=config.thickness)
    grid = config.grid if config.grid is not None else FrequencyGrid.for_model(config.model)
    units = _Units(si=(config.units == "si"), omega_ref=config.omega_ref)

    report: dict[str, Any] = {
        "schema": 1,
        "scenario": {
            "name": config.name,
            "units": config.units,
            "omega_ref": float(config.omega_ref),
            "model": config.model_echo,
            "slab": {"thickness": _thickness_out(config, units)},
            "analyses": list(config.analyses),
            "pulse": (
                None if config.pulse is None else units.scale_probe(config.pulse)
            ),
        },
        "resolved": {
            "grid": {
                "mode": "explicit" if config.grid is not None else "auto",
                "omega_max": units.omega(grid.omega_max),
                "samples": int(grid.size),
                "spacing": units.omega(grid.spacing),
            },
            "literal_eq17": bool(literal),
            "thresholds": {
                "leakage": float(LEAKAGE_THRESHOLD),
                "kernel_fraction": float(KERNEL_THRESHOLD),
            },
        },
        "results": {},
    }
    artifacts: list[str] = []
    scan_report = None

    try:
        for analysis in config.analyses:
            if analysis == "spectrum":
                resp = evaluate_spectrum(slab, grid, literal_variant=literal)
                write_spectrum_csv(units.scale_response(resp), out / "spectrum.csv")
                artifacts.append("spectrum.csv")
                finite = np.isfinite(resp.delay)
                if np.any(finite):
                    i_min = int(np.nanargmin(np.where(finite, resp.delay, np.inf)))
                    min_delay = units.time(resp.delay[i_min])
                    min_delay_omega = units.omega(grid.omegas[i_min])
                else:
                    min_delay = None
                    min_delay_omega = None
                report["results"]["spectrum"] = {
                    "file": "spectrum.csv",
                    "samples": int(grid.size),
                    "flagged_samples": len(resp.flags),
                    "min_delay": min_delay,
                    "min_delay_omega": min_delay_omega,
                    "max_power": float(np.nanmax(resp.power)),
                }

            elif analysis == "sum_rule":
                value = sum_rule(config.model, config.grid)
                entry: dict[str, Any] = {"value": units.omega_sq(value)}
                if isinstance(config.model, OscillatorSet):
                    closed = config.model.plasma_frequency**2 * sum(
                        r.strength for r in config.model.resonances
                    )
                    entry["closed_form"] = units.omega_sq(closed)
                report["results"]["sum_rule"] = entry

            elif analysis == "kk_check":
                err, at = kk_roundtrip_error(config.model, grid)
                report["results"]["kk_check"] = {
                    "max_rel_error": float(err),
                    "at_omega": units.omega(at),
                    "samples_swept": int(grid.size - 2),
                }

            elif analysis == "kernel":
                kernel = extract_kernel(slab, grid)
                _write_kernel_csv(out / "kernel.csv", kernel, units)
                artifacts.append("kernel.csv")
                report["results"]["kernel"] = {
                    "file": "kernel.csv",
                    "negative_fraction": float(kernel.negative_fraction),
                    "negative_mass": float(kernel.negative_mass),
                    "total_mass": float(kernel.total_mass),
                    "guard_delta": units.time(kernel.guard_delta),
                }

            elif analysis == "scan":
                scan_report = scan_upper_half_plane(slab)
                _write_json(out / "scan.json", _scan_json(scan_report, units))
                artifacts.append("scan.json")
                _write_scan_grid_csv(
                    out / "scan_grid.csv", slab, scan_report, units
                )
                artifacts.append("scan_grid.csv")
                report["results"]["scan"] = {
                    "files": ["scan.json", "scan_grid.csv"],
                    "certified_clean": bool(certify(scan_report)),
                    "branch_points": len(scan_report.branch_points),
                    "denominator_zeros": len(scan_report.denominator_zeros),
                    "unresolved_cells": len(scan_report.unresolved),
                }

            elif analysis == "causality":
                rep = assess_causality(
                    slab, probe=config.pulse, grid=config.grid, scan=scan_report
                )
                entry = _causality_json(rep, units)
                _write_json(out / "causality.json", entry)
                artifacts.append("causality.json")
                waveform_files = _write_waveforms(out, slab, rep, units)
                artifacts.extend(waveform_files)
                entry = dict(entry)
                entry["waveform_files"] = waveform_files
                report["results"]["causality"] = entry

    except NumericalGuardError as exc:
        report["failure"] = {"guard": exc.guard, "message": str(exc)}
        report["artifacts"] = sorted(artifacts + ["report.json"])
        _write_json(out / "report.json", report)
        return RunResult(3, report, tuple(report["artifacts"]), str(exc))

    report["artifacts"] = sorted(artifacts + ["report.json"])
    _write_json(out / "report.json", report)
    return RunResult(0, report, tuple(report["artifacts"]))


def _thickness_out(config: ScenarioConfig, units: _Units) -> float:
    if units.si:
        return config.thickness * SPEED_OF_LIGHT / config.omega_ref
    return config.thickness


def _write_waveforms(out: Path, slab: SlabConfig, rep, units: _Units) -> list[str]:
    """Input/output waveform artifacts for the probe the report echoes.

    The probe is re-synthesized from the report's own echo so the files
    always match the verdict.  When propagation tripped a guard (an
    amplifying slab), only the input is written -- the failure is
    already recorded in the report.
    """
    probe = rep.probe
    try:
        pulse = synthesize_pulse(
            probe.get("kind", "step_sine"),
            int(probe["samples"]),
            float(probe["sample_spacing"]),
            **{
                k: v
                for k, v in probe.items()
                if k not in ("kind", "samples", "sample_spacing")
            },
        )
    except CauslabError:
        return []
    files = ["waveform_input.csv"]
    write_waveform_csv(units.scale_waveform(pulse), out / "waveform_input.csv")
    try:
        transmitted = propagate(pulse, slab)
    except NumericalGuardError:
        return files
    write_waveform_csv(
        units.scale_waveform(transmitted), out / "waveform_output.csv"
    )
    files.append("waveform_output.csv")
    return files

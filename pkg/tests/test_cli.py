"""End-to-end checks of the command line interface (subprocess level)."""

from __future__ import annotations

import hashlib
import json
import shutil
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

import causlab
from causlab import OscillatorSet, Resonance, Tabulated, eval_epsilon
from causlab.plots import MissingArtifactError, emit_plots

BUNDLED = Path(__file__).resolve().parents[1] / "src" / "causlab" / "scenarios"

VACUUM_DOC = """\
schema: 1
units: natural
model:
  kind: vacuum
slab:
  thickness: 1.0
analyses: [sum_rule, causality]
"""

SPECTRUM_DOC = """\
schema: 1
units: natural
model:
  kind: oscillators
  plasma_frequency: 1.0
  resonances:
    - {strength: 1.0, frequency: 2.0, damping: 0.1}
slab:
  thickness: 2.0
grid:
  omega_max: 8.0
  samples: 1601
analyses: [spectrum]
"""


def run_cli(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "causlab.cli", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
    )


def test_version_prints_the_package_version():
    proc = run_cli("version")
    assert proc.returncode == 0
    assert proc.stdout.strip() == causlab.__version__ == "0.1.0"


def test_console_script_is_installed():
    exe = shutil.which("causlab")
    assert exe is not None
    proc = subprocess.run([exe, "version"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == causlab.__version__


def test_validate_describes_a_bundled_scenario():
    proc = run_cli("validate", str(BUNDLED / "vacuum.scenario"))
    assert proc.returncode == 0
    lines = proc.stdout.splitlines()
    assert lines[0] == "[ok] vacuum: schema 1, units natural, model vacuum, grid auto, pulse auto probe"
    assert lines[1] == "[ok] analyses: sum_rule, causality"


def test_validate_reports_explicit_grid_and_pulse():
    proc = run_cli("validate", str(BUNDLED / "lorentz_passive.scenario"))
    assert proc.returncode == 0
    assert "grid auto" in proc.stdout  # passive scenario pins the pulse, not the grid
    assert "pulse step_sine" in proc.stdout


def test_validate_rejects_a_bad_document(tmp_path):
    bad = tmp_path / "bad.scenario"
    bad.write_text(VACUUM_DOC.replace("schema: 1", "schema: 2"))
    proc = run_cli("validate", str(bad))
    assert proc.returncode == 2
    assert proc.stdout == ""
    assert proc.stderr.startswith("error:")
    assert "unsupported schema 2" in proc.stderr


def test_run_missing_scenario_is_exit_2(tmp_path):
    proc = run_cli("run", str(tmp_path / "nope.scenario"), "--out", str(tmp_path / "x"))
    assert proc.returncode == 2
    assert "error: cannot read scenario" in proc.stderr


def test_run_vacuum_scenario(tmp_path):
    scenario = tmp_path / "vac.scenario"
    scenario.write_text(VACUUM_DOC)
    out = tmp_path / "out"
    proc = run_cli("run", str(scenario), "--out", str(out))
    assert proc.returncode == 0
    lines = proc.stdout.splitlines()
    assert lines[-1] == "[verdict] causal"
    assert any(line.endswith("report.json") and line.startswith("[out] ") for line in lines)
    assert (out / "report.json").is_file()
    assert (out / "causality.json").is_file()


def test_run_guard_failure_is_exit_3_with_partial_report(tmp_path):
    omegas = np.linspace(0.0, 3.0, 301)
    model = OscillatorSet(1.0, (Resonance(1.0, 2.0, 0.1),))
    Tabulated(omegas, np.asarray(eval_epsilon(model, omegas + 0j))).to_csv(tmp_path / "short.csv")
    scenario = tmp_path / "trunc.scenario"
    scenario.write_text(
        "schema: 1\nunits: natural\nmodel:\n  kind: table\n  path: short.csv\n"
        "slab:\n  thickness: 1.0\nanalyses: [sum_rule]\n"
    )
    out = tmp_path / "out"
    proc = run_cli("run", str(scenario), "--out", str(out))
    assert proc.returncode == 3
    assert "error: [tail-dominance]" in proc.stderr
    assert "[fail] partial report written to" in proc.stderr
    report = json.loads((out / "report.json").read_text())
    assert report["failure"]["guard"] == "tail-dominance"


def test_run_with_plots_renders_spectrum_figures(tmp_path):
    scenario = tmp_path / "spec.scenario"
    scenario.write_text(SPECTRUM_DOC)
    out = tmp_path / "out"
    proc = run_cli("run", str(scenario), "--out", str(out), "--plots")
    assert proc.returncode == 0
    assert "[out] group_delay.svg" in proc.stdout.splitlines()
    svgs = sorted(p.name for p in out.glob("*.svg"))
    assert svgs == ["group_delay.svg", "power_spectrum.svg"]


def test_rendered_figures_are_byte_stable(tmp_path):
    scenario = tmp_path / "spec.scenario"
    scenario.write_text(SPECTRUM_DOC)
    out = tmp_path / "out"
    proc = run_cli("run", str(scenario), "--out", str(out), "--plots")
    assert proc.returncode == 0
    first = {p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in out.glob("*.svg")}
    for name in first:
        (out / name).unlink()
    emit_plots(out)
    second = {p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in out.glob("*.svg")}
    assert first == second


def test_literal_flag_changes_the_spectrum_artifact(tmp_path):
    scenario = tmp_path / "spec.scenario"
    scenario.write_text(SPECTRUM_DOC)
    plain = run_cli("run", str(scenario), "--out", str(tmp_path / "a"))
    literal = run_cli("run", str(scenario), "--out", str(tmp_path / "b"), "--literal-eq17")
    assert plain.returncode == 0 and literal.returncode == 0
    csv_a = (tmp_path / "a" / "spectrum.csv").read_bytes()
    csv_b = (tmp_path / "b" / "spectrum.csv").read_bytes()
    assert csv_a != csv_b


def test_plots_need_a_run_directory(tmp_path):
    with pytest.raises(MissingArtifactError, match="no run directory"):
        emit_plots(tmp_path / "never_ran")


def test_plots_need_renderable_artifacts(tmp_path):
    (tmp_path / "report.json").write_text('{"results": {}}')
    with pytest.raises(MissingArtifactError, match="nothing renderable"):
        emit_plots(tmp_path)

"""Static SVG renderings of run artifacts.

`emit_plots` reads whatever recognized artifacts an output directory
holds and renders one SVG per available view:

* ``power_spectrum.svg`` -- P(omega) from spectrum.csv
* ``group_delay.svg`` -- t_delay(omega) from spectrum.csv
* ``waveform_overlay.svg`` -- input (and, when propagation succeeded,
  transmitted) waveform with the front instant marked
* ``transmission_landscape.svg`` -- log10 |tau(zeta)| over the scanned
  upper-half-plane rectangle from scan_grid.csv

Rendering is deterministic: Agg backend, pinned svg.hashsalt, no Date
metadata -- repeated runs produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "causlab"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .errors import MissingArtifactError  # noqa: E402

__all__ = ["emit_plots"]

_SVG = {"format": "svg", "metadata": {"Date": None}}


def _columns(path: Path) -> dict[str, np.ndarray]:
    data = np.genfromtxt(path, delimiter=",", names=True)
    return {name: np.atleast_1d(data[name]) for name in data.dtype.names}


def _save(fig, path: Path) -> None:
    fig.savefig(path, **_SVG)
    plt.close(fig)


def _plot_spectrum(out: Path) -> list[str]:
    cols = _columns(out / "spectrum.csv")
    omega = cols["omega"]
    rendered = []

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(omega, cols["P"], color="tab:blue")
    ax.set_xlabel("omega")
    ax.set_ylabel("P = |tau|^2")
    ax.set_title("Transmitted power")
    ax.grid(True, alpha=0.3)
    _save(fig, out / "power_spectrum.svg")
    rendered.append("power_spectrum.svg")

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(omega, cols["t_delay"], color="tab:red")
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_xlabel("omega")
    ax.set_ylabel("t_delay = d theta / d omega")
    ax.set_title("Group delay")
    ax.grid(True, alpha=0.3)
    _save(fig, out / "group_delay.svg")
    rendered.append("group_delay.svg")
    return rendered


def _front_time(out: Path):
    report = out / "causality.json"
    if not report.exists():
        return None
    probe = json.loads(report.read_text()).get("probe", {})
    return probe.get("front_time")


def _plot_waveforms(out: Path) -> list[str]:
    cols_in = _columns(out / "waveform_input.csv")
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.plot(cols_in["t"], cols_in["V"], label="input", color="tab:blue", lw=0.8)
    output = out / "waveform_output.csv"
    if output.exists():
        cols_out = _columns(output)
        ax.plot(
            cols_out["t"], cols_out["V"],
            label="transmitted", color="tab:orange", lw=0.8, alpha=0.8,
        )
    front = _front_time(out)
    if front is not None:
        ax.axvline(front, color="black", linestyle="--", lw=1.0, label="front")
    ax.set_xlabel("t")
    ax.set_ylabel("V")
    ax.set_title("Waveforms")
    ax.legend(loc="upper right")
    _save(fig, out / "waveform_overlay.svg")
    return ["waveform_overlay.svg"]


def _plot_landscape(out: Path) -> list[str]:
    cols = _columns(out / "scan_grid.csv")
    re = cols["re_zeta"]
    im = cols["im_zeta"]
    mag = np.hypot(cols["re_value"], cols["im_value"])
    re_axis = np.unique(re)
    im_axis = np.unique(im)
    grid = np.log10(np.maximum(mag, 1e-300)).reshape(im_axis.size, re_axis.size)

    fig, ax = plt.subplots(figsize=(6.5, 5.0))
    mesh = ax.pcolormesh(re_axis, im_axis, grid, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="log10 |tau|")
    ax.set_xlabel("Re zeta")
    ax.set_ylabel("Im zeta")
    ax.set_title("Transmission over the scanned region")
    _save(fig, out / "transmission_landscape.svg")
    return ["transmission_landscape.svg"]


def emit_plots(out_dir: Union[str, Path]) -> list[str]:
    """Render SVGs for every recognized artifact in `out_dir`.

    Returns the rendered file names (sorted).  Raises
    MissingArtifactError when the directory holds nothing renderable.
    """
    out = Path(out_dir)
    if not out.is_dir():
        raise MissingArtifactError(f"no run directory at {out}")
    rendered: list[str] = []
    if (out / "spectrum.csv").exists():
        rendered += _plot_spectrum(out)
    if (out / "waveform_input.csv").exists():
        rendered += _plot_waveforms(out)
    if (out / "scan_grid.csv").exists():
        rendered += _plot_landscape(out)
    if not rendered:
        raise MissingArtifactError(
            f"nothing renderable in {out} (expected spectrum.csv, "
            "waveform_input.csv, or scan_grid.csv from a scenario run)"
        )
    return sorted(rendered)

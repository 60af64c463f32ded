"""Rendered run reports: figures next to the delimited traces.

Everything here is a thin presentation layer over `simulate` and `wheel`;
the CSV files carry the same numbers the library returns, and the PNGs are
for eyeballing a run without loading the CSVs into anything.
"""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .simulate import RunScenario, Spectrum, TimeSeries, Window, dominant_peaks, run_flat_ground, spectrum
from .wheel import CapLayout, SlideUnit, contact_height_profile

__all__ = [
    "save_timeseries_figure",
    "save_spectrum_figure",
    "save_profile_figure",
    "run_report",
]


def save_timeseries_figure(series: TimeSeries, path: str | Path, title: str = "") -> None:
    fig, (ax_h, ax_s) = plt.subplots(2, 1, sharex=True, figsize=(9, 6))
    for i in range(series.n_wheels):
        ax_h.plot(series.t, series.heights[i], linewidth=0.7, label=f"wheel {i + 1}")
        ax_s.plot(series.t, series.slides[i], linewidth=0.7, label=f"wheel {i + 1}")
    ax_h.plot(series.t, series.proxy, color="black", linewidth=1.2, label="proxy")
    ax_h.set_ylabel("height deviation [mm]")
    ax_h.legend(loc="lower right", fontsize="small", ncol=3)
    ax_s.set_ylabel("slide offset [mm]")
    ax_s.set_xlabel("time [s]")
    if title:
        ax_h.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_spectrum_figure(
    spec: Spectrum, path: str | Path, peaks: list[tuple[float, float]] | None = None, title: str = ""
) -> None:
    fig, ax = plt.subplots(figsize=(9, 4))
    ax.plot(spec.freq, spec.magnitude, linewidth=0.8)
    if peaks:
        ax.plot([f for f, _ in peaks], [m for _, m in peaks], "rv", markersize=6)
        for f, m in peaks:
            ax.annotate(f"{f:.2f} Hz", (f, m), textcoords="offset points", xytext=(4, 4), fontsize=8)
    ax.set_xlabel("frequency [Hz]")
    ax.set_ylabel(f"magnitude [{spec.window.value} window]")
    ax.set_xlim(0, min(50.0, float(spec.freq[-1])))
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_profile_figure(scenario: RunScenario, path: str | Path) -> None:
    geom = scenario.chassis.geom
    layout = CapLayout.from_geometry(geom)
    slides = [SlideUnit.for_geometry(geom) for _ in range(geom.n_caps)]
    profile = contact_height_profile(geom, layout, slides)
    fig, ax = plt.subplots(figsize=(9, 3.5))
    ax.plot([p[0] for p in profile], [p[1] for p in profile], linewidth=1.0)
    ax.set_xlabel("drive angle [deg]")
    ax.set_ylabel("height deviation [mm]")
    ax.set_title(f"contact profile, {geom.n_caps} caps, centered slides")
    ax.set_xlim(0, 360)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def run_report(scenario: RunScenario, out_dir: str | Path, n_peaks: int = 3) -> dict:
    """Run one scenario and write traces, spectra, and figures to a directory.

    Writes run.csv and spectrum.csv plus timeseries.png, spectrum.png, and
    profile.png, then a report.json manifest tying them together.

    Returns:
        The manifest dictionary (also written to report.json).
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    series = run_flat_ground(scenario)
    spec = spectrum(series, "proxy", Window.HANN)
    peaks = dominant_peaks(spec, k=n_peaks)

    (out / "run.csv").write_text(series.to_csv())
    (out / "spectrum.csv").write_text(spec.to_csv())
    save_timeseries_figure(series, out / "timeseries.png", title=f"{scenario.motion.value} run")
    save_spectrum_figure(spec, out / "spectrum.png", peaks, title=f"{scenario.motion.value} proxy spectrum")
    save_profile_figure(scenario, out / "profile.png")

    manifest = {
        "motion": scenario.motion.value,
        "wheel_rate_rps": scenario.wheel_rate,
        "duration_s": scenario.duration,
        "sample_rate_hz": scenario.sample_rate,
        "cap_pass_hz": scenario.chassis.geom.n_caps * scenario.wheel_rate,
        "dominant_peaks": [{"freq_hz": f, "mag": m} for f, m in peaks],
        "files": {
            "run_csv": "run.csv",
            "spectrum_csv": "spectrum.csv",
            "timeseries_png": "timeseries.png",
            "spectrum_png": "spectrum.png",
            "profile_png": "profile.png",
        },
    }
    (out / "report.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest

"""Flat-ground running simulation and spectral analysis.

The wheel rides at its nominal radius except while the contact crosses an
inter-cap edge, where it drops by the chord sag of the opening.  Ground
friction also drags the loaded cap along its (tilted) pole axis a little on
every pass, and the return spring re-centers it while the cap is off the
ground, so the openings breathe as the wheel rolls.  A run produces per
wheel height-deviation and slide-offset traces plus a chassis height proxy
(the mean wheel deviation), and the spectrum helpers turn any trace into a
one-sided magnitude spectrum for vibration comparisons between gaits.
"""

from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .chassis import ChassisConfig, Twist, inverse_kinematics
from .wheel import CapLayout, ElementKind, SlideUnit, contact_state, slide_step

__all__ = [
    "Motion",
    "Window",
    "RunScenario",
    "TimeSeries",
    "Spectrum",
    "run_flat_ground",
    "spectrum",
    "dominant_peaks",
]

DEFAULT_WHEEL_RATE_RPS = 0.96
DEFAULT_SAMPLE_RATE_HZ = 1000.0
DEFAULT_SLIDE_DRIFT_COEFF = 0.05   # fraction of the axial velocity component picked up by the slide


class Motion(enum.Enum):
    FORWARD = "forward"
    DIAGONAL = "diagonal"
    TURNING = "turning"


class Window(enum.Enum):
    HANN = "hann"
    RECT = "rect"


@dataclass(frozen=True)
class RunScenario:
    """One flat-ground run.

    Attributes:
        chassis: chassis layout and wheel build.
        motion: gait; forward drives all four wheels, diagonal drives one
            wheel pair and parks the other on its rollers, turning spins in
            place.
        wheel_rate: surface rotation rate of the driven wheels, rev/s.
        duration: run length, s.
        sample_rate: trace sampling rate, Hz.
        slide_drift_coeff: fraction of the contact velocity component along
            the loaded cap's pole axis that leaks into slide drift.
    """

    chassis: ChassisConfig
    motion: Motion = Motion.FORWARD
    wheel_rate: float = DEFAULT_WHEEL_RATE_RPS
    duration: float = 10.0
    sample_rate: float = DEFAULT_SAMPLE_RATE_HZ
    slide_drift_coeff: float = DEFAULT_SLIDE_DRIFT_COEFF

    def __post_init__(self) -> None:
        if self.wheel_rate <= 0 or not math.isfinite(self.wheel_rate):
            raise ValueError(f"wheel_rate must be positive, got {self.wheel_rate!r}")
        if self.duration <= 0 or not math.isfinite(self.duration):
            raise ValueError(f"duration must be positive, got {self.duration!r}")
        if self.sample_rate <= 0 or not math.isfinite(self.sample_rate):
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate!r}")
        if self.slide_drift_coeff < 0 or not math.isfinite(self.slide_drift_coeff):
            raise ValueError(
                f"slide_drift_coeff must be nonnegative, got {self.slide_drift_coeff!r}"
            )
        cap_pass_hz = self.chassis.geom.n_caps * self.wheel_rate
        if self.sample_rate < 2.0 * cap_pass_hz:
            raise ValueError(
                f"sample_rate {self.sample_rate} Hz undersamples the "
                f"{cap_pass_hz} Hz cap-pass rate"
            )

    def body_twist(self) -> Twist:
        """Body twist whose fastest wheel runs at `wheel_rate`."""
        surface = self.wheel_rate * 2.0 * math.pi * self.chassis.geom.r_w
        if self.motion is Motion.FORWARD:
            return Twist(math.sqrt(2.0) * surface, 0.0, 0.0)
        if self.motion is Motion.DIAGONAL:
            component = surface / math.sqrt(2.0)
            return Twist(component, component, 0.0)
        return Twist(0.0, 0.0, surface / self.chassis.mount_radius)


@dataclass(frozen=True)
class TimeSeries:
    """Sampled traces from one run.  Lengths are mm, time s."""

    t: np.ndarray                 # (n,)
    heights: np.ndarray           # (n_wheels, n) height deviation per wheel
    slides: np.ndarray            # (n_wheels, n) largest-magnitude slide offset per wheel
    proxy: np.ndarray             # (n,) chassis height proxy, mean of wheel deviations
    sample_rate: float

    @property
    def n_wheels(self) -> int:
        return self.heights.shape[0]

    def channel(self, name: str) -> np.ndarray:
        """Trace by column name: proxy, or w<i>_h / w<i>_s with i from 1."""
        if name == "proxy":
            return self.proxy
        if name.startswith("w") and "_" in name:
            index_text, _, kind = name[1:].partition("_")
            if index_text.isdigit() and 1 <= int(index_text) <= self.n_wheels:
                i = int(index_text) - 1
                if kind == "h":
                    return self.heights[i]
                if kind == "s":
                    return self.slides[i]
        raise KeyError(f"unknown channel {name!r}")

    def column_names(self) -> list[str]:
        names = ["t_s"]
        names += [f"w{i + 1}_h" for i in range(self.n_wheels)]
        names += [f"w{i + 1}_s" for i in range(self.n_wheels)]
        names.append("proxy")
        return names

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write(",".join(self.column_names()) + "\n")
        for k in range(len(self.t)):
            row = [repr(float(self.t[k]))]
            row += [repr(float(self.heights[i, k])) for i in range(self.n_wheels)]
            row += [repr(float(self.slides[i, k])) for i in range(self.n_wheels)]
            row.append(repr(float(self.proxy[k])))
            out.write(",".join(row) + "\n")
        return out.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "TimeSeries":
        lines = [line for line in text.strip().splitlines() if line]
        header = lines[0].split(",")
        if header[0] != "t_s" or header[-1] != "proxy" or len(header) % 2 != 0:
            raise ValueError("not a run time-series CSV")
        n_wheels = (len(header) - 2) // 2
        data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
        if data.shape[0] < 2:
            raise ValueError("time series needs at least two samples")
        t = data[:, 0]
        dt = t[1] - t[0]
        if dt <= 0:
            raise ValueError("time column must increase")
        return cls(
            t=t,
            heights=data[:, 1 : 1 + n_wheels].T.copy(),
            slides=data[:, 1 + n_wheels : 1 + 2 * n_wheels].T.copy(),
            proxy=data[:, -1],
            sample_rate=1.0 / dt,
        )


@dataclass(frozen=True)
class Spectrum:
    """One-sided magnitude spectrum of a trace."""

    freq: np.ndarray        # Hz
    magnitude: np.ndarray   # trace units, energy-preserving scaling
    window: Window
    sample_rate: float

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("freq_hz,mag\n")
        for f, m in zip(self.freq, self.magnitude):
            out.write(f"{float(f)!r},{float(m)!r}\n")
        return out.getvalue()

    def band_energy(self, f_lo: float, f_hi: float) -> float:
        """Sum of squared magnitudes for bins with f_lo <= f <= f_hi."""
        mask = (self.freq >= f_lo) & (self.freq <= f_hi)
        return float(np.sum(self.magnitude[mask] ** 2))


def run_flat_ground(scenario: RunScenario) -> TimeSeries:
    """Simulate a run on flat ground.

    Each wheel advances its drive angle at the surface speed commanded by
    the gait.  At every sample the contact element sets the wheel's height
    deviation; the loaded cap's slide integrates drift proportional to the
    contact velocity component along its pole axis, every other slide
    spring-returns.  The recorded slide trace is the largest-magnitude cap
    offset of the wheel, and the chassis proxy is the mean wheel deviation.
    """
    chassis = scenario.chassis
    geom = chassis.geom
    layout = CapLayout.from_geometry(geom)
    speeds = inverse_kinematics(chassis, scenario.body_twist())
    n_wheels = chassis.n_wheels
    n_caps = geom.n_caps

    dt = 1.0 / scenario.sample_rate
    n_samples = int(round(scenario.duration * scenario.sample_rate))
    if n_samples < 2:
        raise ValueError("run too short for the chosen sample rate")

    # deg/s drive-angle rate per wheel
    rates = [math.degrees(v / geom.r_w) for v in speeds]
    pole_rad = [math.radians(a) for a in layout.pole_angles]

    slides = [
        [SlideUnit.for_geometry(geom) for _ in range(n_caps)] for _ in range(n_wheels)
    ]
    t = np.arange(n_samples) * dt
    heights = np.zeros((n_wheels, n_samples))
    offsets = np.zeros((n_wheels, n_samples))

    for k in range(n_samples):
        time = t[k]
        for i in range(n_wheels):
            angle = math.fmod(rates[i] * time, 360.0)
            state = contact_state(geom, layout, angle, slides[i])
            heights[i, k] = state.height_deviation
            offsets[i, k] = max(
                (u.offset for u in slides[i]), key=abs, default=0.0
            )
            active = (
                state.element.caps[0]
                if state.element.kind is ElementKind.CAP_SURFACE
                else None
            )
            for j in range(n_caps):
                loaded = j == active
                drift = 0.0
                if loaded:
                    tilt = pole_rad[j] - math.radians(angle)
                    drift = scenario.slide_drift_coeff * speeds[i] * math.sin(tilt)
                slides[i][j] = slide_step(
                    replace(slides[i][j], loaded=loaded), drift, dt
                )

    return TimeSeries(
        t=t,
        heights=heights,
        slides=offsets,
        proxy=heights.mean(axis=0),
        sample_rate=scenario.sample_rate,
    )


def _next_pow2(n: int) -> int:
    return 1 << (n - 1).bit_length()


def spectrum(series: TimeSeries, channel: str = "proxy", window: Window = Window.HANN) -> Spectrum:
    """One-sided magnitude spectrum of a trace.

    The trace is mean-removed, windowed, zero-padded to the next power of
    two, and transformed.  Magnitudes carry an energy-preserving scaling:
    the sum of squared magnitudes equals the windowed signal energy, which
    keeps band-energy comparisons meaningful.

    Raises:
        ValueError: if the trace is shorter than 256 samples or not
            uniformly sampled.
    """
    x = np.asarray(series.channel(channel), dtype=float)
    if x.size < 256:
        raise ValueError(f"need at least 256 samples, got {x.size}")
    dt = 1.0 / series.sample_rate
    if np.max(np.abs(np.diff(series.t) - dt)) > 1e-9 * dt + 1e-12:
        raise ValueError("time series is not uniformly sampled")

    x = x - x.mean()
    if window is Window.HANN:
        taper = np.hanning(x.size)
    else:
        taper = np.ones(x.size)
    xw = x * taper

    n_fft = _next_pow2(x.size)
    transform = np.fft.rfft(xw, n_fft)
    magnitude = np.abs(transform) / math.sqrt(n_fft)
    magnitude[1:-1] *= math.sqrt(2.0)
    freq = np.fft.rfftfreq(n_fft, d=dt)
    return Spectrum(freq=freq, magnitude=magnitude, window=window, sample_rate=series.sample_rate)


def dominant_peaks(
    spec: Spectrum, k: int = 3, band: tuple[float, float] | None = None
) -> list[tuple[float, float]]:
    """The k tallest local maxima of a spectrum inside `band`.

    Returns:
        (freq_hz, magnitude) pairs in descending magnitude; fewer than k
        when the band holds fewer maxima, empty for an empty band.
    """
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k!r}")
    mag = spec.magnitude
    f_lo, f_hi = band if band is not None else (0.0, float("inf"))
    peaks = []
    for i in range(1, len(mag) - 1):
        if not (f_lo <= spec.freq[i] <= f_hi):
            continue
        if mag[i] > mag[i - 1] and mag[i] > mag[i + 1]:
            peaks.append((float(spec.freq[i]), float(mag[i])))
    peaks.sort(key=lambda p: (-p[1], p[0]))
    return peaks[:k]

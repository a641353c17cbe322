"""Frequency-domain analysis of dipole time series: windowed spectra in
acceleration form, envelope-minimum detection, Gabor time-frequency maps,
and harmonic polarization ellipses.

The dipole acceleration is formed spectrally (a(w) = w^2 d(w)) rather than by
double time-differentiation, which is exact for the windowed record and adds
no differentiation noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .lewenstein import DipoleTimeSeries

_COMPONENTS = {"x": 0, "y": 1, "z": 2}


@dataclass(frozen=True)
class HarmonicSpectrum:
    """Acceleration-form spectra of all three response components of one run."""

    orders: np.ndarray              # w / w0 axis
    amplitudes: np.ndarray          # (n, 3) complex acceleration amplitudes
    intensity: np.ndarray           # (n, 3) |amplitude|^2
    drive_axis: str
    omega0: float
    metadata: dict = dataclass_field(default_factory=dict)

    def component(self, axis: str) -> np.ndarray:
        return self.intensity[:, _COMPONENTS[axis]]

    @property
    def order_step(self) -> float:
        return float(self.orders[1] - self.orders[0])


@dataclass(frozen=True)
class TimeFrequencyMap:
    times: np.ndarray
    orders: np.ndarray
    magnitude: np.ndarray           # (n_times, n_orders)

    def __post_init__(self) -> None:
        if self.magnitude.shape != (self.times.size, self.orders.size):
            raise ValueError("map dimensions must match the time and order axes")


@dataclass(frozen=True)
class SpectralMinimum:
    lo: float
    hi: float
    depth: float                    # envelope dip ratio, > 1

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError("minimum interval needs lo < hi")
        if not self.depth > 1.0:
            raise ValueError("minimum depth ratio must exceed 1")


def retained(series: DipoleTimeSeries, discard_cycles: float) -> DipoleTimeSeries:
    """Drop the turn-on transient: samples earlier than `discard_cycles` periods."""
    t0 = series.field.turn_on_time + discard_cycles * series.field.period
    mask = series.times >= t0 - 1e-9
    if mask.sum() < 2:
        raise ValueError("discard window leaves fewer than two samples")
    return DipoleTimeSeries(
        series.times[mask],
        series.dipole[mask],
        series.drive_axis,
        series.channels,
        series.orbital_labels,
        series.field,
        series.tau_grid,
    )


def spectrum_from_dipole(series: DipoleTimeSeries, window: str = "hann") -> HarmonicSpectrum:
    """Windowed FFT of each dipole component, weighted to acceleration form.

    The series must already have its turn-on discard applied (see `retained`).
    """
    n = series.times.size
    if window == "hann":
        win = np.hanning(n)
    elif window in ("none", "rect", "boxcar"):
        win = np.ones(n)
    else:
        raise ValueError(f"unknown window {window!r}")
    if n < 4:
        raise ValueError("series too short to window")

    dt = series.dt
    signal = series.dipole.real * win[:, None]
    amps = np.fft.rfft(signal, axis=0) * dt
    omega = 2.0 * math.pi * np.fft.rfftfreq(n, dt)
    acc = (omega**2)[:, None] * amps
    omega0 = series.field.omega
    return HarmonicSpectrum(
        orders=omega / omega0,
        amplitudes=acc,
        intensity=np.abs(acc) ** 2,
        drive_axis=series.drive_axis,
        omega0=omega0,
        metadata={
            "channels": series.channels,
            "orbitals": list(series.orbital_labels),
            "window": window,
            "samples": int(n),
        },
    )


def harmonic_peaks(
    spectrum: HarmonicSpectrum,
    component: str,
    orders: np.ndarray,
    half_width: float = 0.35,
) -> np.ndarray:
    """Peak intensity near each requested harmonic order (max within +-half_width)."""
    intensity = spectrum.component(component)
    out = np.empty(len(orders))
    for k, n in enumerate(orders):
        sel = (spectrum.orders >= n - half_width) & (spectrum.orders <= n + half_width)
        out[k] = intensity[sel].max() if sel.any() else 0.0
    return out


def band_power(spectrum: HarmonicSpectrum, component: str, lo: float, hi: float) -> float:
    """Total spectral intensity of one component over an order band."""
    sel = (spectrum.orders >= lo) & (spectrum.orders <= hi)
    return float(spectrum.component(component)[sel].sum())


def find_envelope_minima(
    spectrum: HarmonicSpectrum,
    component: str,
    *,
    odd_only: bool = True,
    depth_factor: float = 10.0,
    order_lo: float = 9.0,
    order_hi: float | None = None,
    flank: int = 5,
) -> list[SpectralMinimum]:
    """Intervals where the harmonic-peak envelope dips by more than
    `depth_factor` relative to the flanking envelope on both sides.

    The envelope is built over odd harmonic peaks (or all integer orders for
    non-centrosymmetric targets).  `order_hi` defaults to just below the end
    of the order axis; callers normally pass the predicted cutoff.
    """
    max_order = spectrum.orders[-1]
    if order_hi is None:
        order_hi = max_order - 2.0
    step = 2 if odd_only else 1
    start = int(order_lo) | 1 if odd_only else int(math.ceil(order_lo))
    peak_orders = np.arange(start, min(order_hi, max_order - 1) + 1e-9, step)
    if peak_orders.size < 2 * flank + 1:
        return []
    env = harmonic_peaks(spectrum, component, peak_orders)
    floor = env.max() * 1e-300 + 1e-300
    env = np.maximum(env, floor)

    flagged = np.zeros(peak_orders.size, dtype=bool)
    depth = np.ones(peak_orders.size)
    for k in range(peak_orders.size):
        left = env[max(0, k - flank) : k]
        right = env[k + 1 : k + 1 + flank]
        if left.size == 0 or right.size == 0:
            continue
        ref = min(left.max(), right.max())
        if env[k] * depth_factor < ref:
            flagged[k] = True
            depth[k] = ref / env[k]

    minima: list[SpectralMinimum] = []
    k = 0
    while k < flagged.size:
        if not flagged[k]:
            k += 1
            continue
        j = k
        while j + 1 < flagged.size and flagged[j + 1]:
            j += 1
        minima.append(
            SpectralMinimum(
                lo=float(peak_orders[k] - step / 2),
                hi=float(peak_orders[j] + step / 2),
                depth=float(depth[k : j + 1].max()),
            )
        )
        k = j + 1
    return minima


def fitted_cutoff_order(
    spectrum: HarmonicSpectrum,
    component: str,
    *,
    order_lo: float = 21.0,
    knee_depth_db: float = 30.0,
) -> float:
    """Plateau end from a two-segment linear fit of the envelope in dB.

    The odd-peak envelope is replaced by its running maximum from the right,
    which makes isolated interference dips invisible so only the permanent
    post-cutoff decay registers; the envelope is truncated `knee_depth_db`
    below the plateau median (before any noise floor), and the break point
    minimizing the two-line least-squares error is the fitted cutoff.
    """
    max_order = spectrum.orders[-1] - 1.0
    peak_orders = np.arange(int(order_lo) | 1, max_order, 2.0)
    env = harmonic_peaks(spectrum, component, peak_orders)
    env = np.maximum(env, env.max() * 1e-300 + 1e-300)
    tail_max = np.maximum.accumulate(env[::-1])[::-1]
    db = 10.0 * np.log10(tail_max)

    # tail_max is non-increasing: drop everything more than 45 dB below the
    # plateau top (post-cutoff noise floors would otherwise dominate the fit)
    deep = np.nonzero(db < db[0] - 45.0)[0]
    if deep.size:
        peak_orders = peak_orders[: deep[0]]
        db = db[: deep[0]]

    reference = np.median(db[: max(3, int(0.6 * db.size))])
    below = np.nonzero(db < reference - knee_depth_db)[0]
    stop = below[0] + 2 if below.size else db.size
    orders = peak_orders[: min(stop, db.size)]
    values = db[: min(stop, db.size)]
    if orders.size < 7:
        return float(orders[-1]) if orders.size else float(peak_orders[0])

    def segment_fit(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, float]:
        coeff = np.polyfit(x, y, 1)
        resid = y - np.polyval(coeff, x)
        return coeff, float(resid @ resid)

    best = (None, None, np.inf)
    for k in range(3, orders.size - 2):
        c1, sse1 = segment_fit(orders[: k + 1], values[: k + 1])
        c2, sse2 = segment_fit(orders[k:], values[k:])
        if sse1 + sse2 < best[2]:
            best = (k, (c1, c2), sse1 + sse2)
    k, (c_plateau, _) = best[0], best[1]
    # Plateau end: the last order whose envelope still sits on the fitted
    # plateau line; the soft knee beyond it belongs to the decay.
    on_line = values >= np.polyval(c_plateau, orders) - 1.5
    candidates = np.nonzero(on_line[: k + 2])[0]
    return float(orders[candidates[-1]]) if candidates.size else float(orders[k])


def gabor_map(
    series: DipoleTimeSeries,
    component: str,
    window_width: float | None = None,
    *,
    max_order: float = 81.0,
    time_stride: int = 4,
    weight: str = "acceleration",
) -> TimeFrequencyMap:
    """Gaussian-windowed short-time Fourier magnitude on a (t, w/w0) grid.

    `window_width` is the Gaussian sigma in time; the default 1/(3 w0) trades
    ~+-3 orders of frequency resolution for sub-half-cycle time resolution,
    which resolves the short/long trajectory arcs.  `weight` of
    "acceleration" multiplies by w^2; "none" leaves the raw dipole transform
    (used by the synthetic-chirp checks).
    """
    comp = _COMPONENTS[component]
    omega0 = series.field.omega
    sigma = window_width if window_width is not None else 1.0 / (3.0 * omega0)
    if weight not in ("acceleration", "none"):
        raise ValueError(f"unknown weight {weight!r}")

    t = series.times
    dt = series.dt
    n = t.size
    signal = series.dipole[:, comp].real
    centers = t[::time_stride]

    omega = 2.0 * math.pi * np.fft.rfftfreq(n, dt)
    keep = omega / omega0 <= max_order
    win = np.exp(-((t[None, :] - centers[:, None]) ** 2) / (2.0 * sigma**2))
    transform = np.fft.rfft(signal[None, :] * win, axis=1) * dt
    magnitude = np.abs(transform[:, keep])
    if weight == "acceleration":
        magnitude = magnitude * (omega[keep] ** 2)[None, :]
    return TimeFrequencyMap(centers, omega[keep] / omega0, magnitude)


@dataclass(frozen=True)
class PolarizationEllipse:
    order: float
    ellipticity: float              # minor/major axis ratio in [0, 1]
    major_axis: np.ndarray          # unit 3-vector
    angle_from_drive_deg: float


def harmonic_polarization(
    spectrum: HarmonicSpectrum, order: float, half_width: float = 0.35
) -> PolarizationEllipse:
    """Polarization ellipse of one harmonic from the three complex amplitudes."""
    if order < spectrum.orders[0] or order > spectrum.orders[-1]:
        raise ValueError(f"order {order} outside the spectral axis")
    sel = (spectrum.orders >= order - half_width) & (spectrum.orders <= order + half_width)
    idx = np.nonzero(sel)[0]
    power = np.abs(spectrum.amplitudes[idx]) ** 2
    best = idx[int(power.sum(axis=1).argmax())]
    amp = spectrum.amplitudes[best]

    norm2 = float(np.real(np.vdot(amp, amp)))
    if norm2 == 0.0:
        return PolarizationEllipse(order, 0.0, np.array([1.0, 0.0, 0.0]), 0.0)
    zz = complex(amp @ amp)
    # |a|^2 + |b|^2 = |E|^2 and a^2 - b^2 = |E.E| give the semi-axes.
    num = max(norm2 - abs(zz), 0.0)
    ellipticity = math.sqrt(num / (norm2 + abs(zz)))
    rotated = amp * np.exp(-0.5j * np.angle(zz) if zz != 0 else 1.0)
    major = np.real(rotated)
    if np.linalg.norm(major) < 1e-12 * math.sqrt(norm2):
        major = np.imag(rotated)
    major = major / np.linalg.norm(major)

    drive = {"x": 0, "y": 1, "z": 2}.get(spectrum.drive_axis)
    if drive is None:
        angle = 0.0
    else:
        cosang = min(1.0, abs(major[drive]))
        angle = math.degrees(math.acos(cosang))
    return PolarizationEllipse(order, ellipticity, major, angle)

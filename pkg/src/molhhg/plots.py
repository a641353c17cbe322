"""Figure rendering for run reports: spectra, scans, dipole traces, and
time-frequency maps, written next to the delimited output files."""

from __future__ import annotations

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
from matplotlib.colors import LogNorm

from .lewenstein import DipoleTimeSeries
from .rme_scan import RmeScan, RmeZero
from .spectrum import HarmonicSpectrum, TimeFrequencyMap

_SAVE_OPTS = {"dpi": 130, "metadata": {"Software": "molhhg"}}


def plot_spectrum(
    spectrum: HarmonicSpectrum,
    component: str,
    path,
    cutoff_order: float | None = None,
    title: str = "",
) -> None:
    intensity = spectrum.component(component)
    fig, ax = plt.subplots(figsize=(7.5, 4.2))
    positive = intensity > 0
    ax.semilogy(spectrum.orders[positive], intensity[positive], lw=0.7, color="navy")
    if cutoff_order is not None:
        ax.axvline(cutoff_order, ls="--", color="gray", alpha=0.7, label="cutoff rule")
        ax.legend(loc="upper right", fontsize=8)
    ax.set_xlabel(r"harmonic order $\omega/\omega_0$")
    ax.set_ylabel(f"$|a_{component}|^2$ (arb. units)")
    ax.set_xlim(0, spectrum.orders[-1])
    ax.set_title(title or f"drive {spectrum.drive_axis}, response {component}")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)


def plot_dipole(series: DipoleTimeSeries, path, title: str = "") -> None:
    fig, ax = plt.subplots(figsize=(7.5, 3.6))
    period = series.field.period
    for comp, label in enumerate("xyz"):
        ax.plot(series.times / period, series.dipole[:, comp].real, lw=0.6, label=label)
    ax.set_xlabel("time (optical cycles)")
    ax.set_ylabel("dipole (a.u.)")
    ax.legend(fontsize=8)
    ax.set_title(title or f"dipole, drive {series.drive_axis}")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)


def plot_scan(
    scan: RmeScan, path, zeros: list[RmeZero] | None = None, title: str = ""
) -> None:
    fig, ax = plt.subplots(figsize=(7.5, 4.2))
    styles = {"x": ("solid", "tab:blue"), "y": ("dashed", "tab:red"),
              "z": ("dashdot", "tab:green")}
    floor = scan.magnitudes.max() * 1e-18
    for comp in "xyz":
        mags = np.maximum(scan.component(comp), floor)
        ls, color = styles[comp]
        ax.semilogy(scan.orders, mags, ls=ls, color=color, lw=1.0,
                    label=rf"$|d_{{rec,{comp}}}|^2$")
    for z in zeros or []:
        ax.axvline(z.order, color="k", alpha=0.25, lw=0.7)
    ax.set_xlabel(r"harmonic order $\omega/\omega_0$")
    ax.set_ylabel("RME modulus squared (a.u.)")
    ax.legend(fontsize=8)
    ax.set_title(title or rf"RME scan along $\Pi_{scan.scanned_axis}$")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)


def plot_gabor(tf_map: TimeFrequencyMap, path, period: float, title: str = "") -> None:
    fig, ax = plt.subplots(figsize=(7.5, 4.2))
    mag = tf_map.magnitude.T**2
    vmax = mag.max()
    if vmax <= 0:
        vmax = 1.0
    vmin = vmax * 1e-8
    ax.imshow(
        np.maximum(mag, vmin),
        origin="lower",
        aspect="auto",
        extent=(
            tf_map.times[0] / period,
            tf_map.times[-1] / period,
            tf_map.orders[0],
            tf_map.orders[-1],
        ),
        norm=LogNorm(vmin=vmin, vmax=vmax),
        cmap="inferno",
        interpolation="nearest",
    )
    ax.set_xlabel("time (optical cycles)")
    ax.set_ylabel(r"harmonic order $\omega/\omega_0$")
    ax.set_title(title or "time-frequency map")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)

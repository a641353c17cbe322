"""Recombination-matrix-element scans along one kinetic-momentum axis, zero
finding, and the correlation of RME zeros with spectral-envelope minima.

Harmonic order and kinetic momentum are linked by energy conservation,
w = Pi^2/2 + Ip, so a scan steps the photon order, inverts for |Pi| along the
chosen axis (the two other components held at fixed values, default zero),
and evaluates the full molecular matrix element there.  Multi-orbital scans
superpose per-orbital amplitudes, each orbital using its own Ip in the
inversion, before squaring (an incoherent switch sums squared magnitudes
instead).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .field import LaserField
from .gto_ft import recombination_matrix_element
from .molecule import Molecule
from .spectrum import SpectralMinimum

_AXIS_INDEX = {"x": 0, "y": 1, "z": 2}


@dataclass(frozen=True)
class RmeScan:
    scanned_axis: str
    fixed_components: tuple[float, float]
    orders: np.ndarray                  # harmonic order per sample
    pi_values: np.ndarray               # scanned-axis momentum (first orbital's Ip)
    magnitudes: np.ndarray              # (n, 3): |d_rec,c|^2 per Cartesian component
    orbital_labels: tuple[str, ...]
    ip_reference: float
    superposition: str = "coherent"

    def component(self, axis: str) -> np.ndarray:
        return self.magnitudes[:, _AXIS_INDEX[axis]]


@dataclass(frozen=True)
class RmeZero:
    component: str
    scanned_axis: str
    order: float
    magnitude: float


@dataclass(frozen=True)
class MinimumCorrelation:
    minimum: SpectralMinimum
    matched_zeros: tuple[RmeZero, ...]

    @property
    def matched(self) -> bool:
        return len(self.matched_zeros) > 0


@dataclass(frozen=True)
class CorrelationReport:
    entries: tuple[MinimumCorrelation, ...]
    unmatched_zeros: tuple[RmeZero, ...] = dataclass_field(default_factory=tuple)

    @property
    def matched_count(self) -> int:
        return sum(1 for e in self.entries if e.matched)

    @property
    def unmatched_count(self) -> int:
        return sum(1 for e in self.entries if not e.matched)

    def to_dict(self) -> dict:
        return {
            "minima": [
                {
                    "interval": [e.minimum.lo, e.minimum.hi],
                    "depth": e.minimum.depth,
                    "matched": e.matched,
                    "zeros": [
                        {
                            "component": z.component,
                            "scanned_axis": z.scanned_axis,
                            "order": z.order,
                            "magnitude": z.magnitude,
                        }
                        for z in e.matched_zeros
                    ],
                }
                for e in self.entries
            ],
            "matched": self.matched_count,
            "unmatched_qpi_candidates": self.unmatched_count,
        }


def _pi_magnitude(order: float, ip: float, omega0: float, fixed_norm2: float) -> float:
    """Invert w = Pi^2/2 + Ip for the scanned-axis momentum component."""
    pi2 = 2.0 * (order * omega0 - ip) - fixed_norm2
    return math.sqrt(pi2) if pi2 > 0 else 0.0


def scan_rme(
    molecule: Molecule,
    orbital_set,
    field: LaserField,
    scanned_axis: str,
    order_range: tuple[float, float],
    *,
    n_samples: int = 400,
    fixed_components: tuple[float, float] = (0.0, 0.0),
    superposition: str = "coherent",
) -> RmeScan:
    """Scan |d_rec|^2 components against harmonic order along one momentum axis."""
    if scanned_axis not in _AXIS_INDEX:
        raise ValueError(f"unknown scan axis {scanned_axis!r}")
    if superposition not in ("coherent", "incoherent"):
        raise ValueError(f"unknown superposition mode {superposition!r}")
    from .lewenstein import _resolve_orbitals

    indices = _resolve_orbitals(molecule, orbital_set)
    ips = [molecule.orbitals[i].ionization_potential for i in indices]
    omega0 = field.omega
    fixed_norm2 = fixed_components[0] ** 2 + fixed_components[1] ** 2
    threshold = (max(ips) + 0.5 * fixed_norm2) / omega0
    lo, hi = order_range
    if lo < threshold - 1e-12:
        raise ValueError(
            f"order range starts at {lo}, below the ionization threshold "
            f"{threshold:.3f} (no real momentum solves the energy balance)"
        )
    if not lo < hi:
        raise ValueError("order range must be increasing")

    orders = np.linspace(lo, hi, n_samples)
    axis_i = _AXIS_INDEX[scanned_axis]
    other = [d for d in range(3) if d != axis_i]

    def momenta(ip: float) -> np.ndarray:
        pi = np.zeros((orders.size, 3))
        pi[:, axis_i] = [_pi_magnitude(o, ip, omega0, fixed_norm2) for o in orders]
        pi[:, other[0]] = fixed_components[0]
        pi[:, other[1]] = fixed_components[1]
        return pi

    if superposition == "coherent":
        total = np.zeros((orders.size, 3), dtype=complex)
        for idx, ip in zip(indices, ips):
            total += recombination_matrix_element(molecule, idx, momenta(ip))
        magnitudes = np.abs(total) ** 2
    else:
        magnitudes = np.zeros((orders.size, 3))
        for idx, ip in zip(indices, ips):
            magnitudes += np.abs(recombination_matrix_element(molecule, idx, momenta(ip))) ** 2

    return RmeScan(
        scanned_axis=scanned_axis,
        fixed_components=tuple(fixed_components),
        orders=orders,
        pi_values=momenta(ips[0])[:, axis_i],
        magnitudes=magnitudes,
        orbital_labels=tuple(molecule.orbitals[i].label for i in indices),
        ip_reference=ips[0],
        superposition=superposition,
    )


def find_rme_zeros(
    scan: RmeScan,
    component: str,
    *,
    depth_factor: float = 100.0,
    envelope_window: float = 8.0,
) -> list[RmeZero]:
    """Local minima of |d_c|^2 at least `depth_factor` below the running
    envelope, refined by parabolic interpolation of log-magnitude.

    Dips are declared zeros without requiring a sign change: contracted
    components can touch near-zero without crossing.
    """
    if scan.orders.size < 3:
        return []
    values = scan.component(component)
    orders = scan.orders
    floor = values.max() * 1e-300 + 1e-300
    values = np.maximum(values, floor)

    half = envelope_window / 2.0
    zeros: list[RmeZero] = []
    for k in range(1, orders.size - 1):
        if not (values[k] < values[k - 1] and values[k] <= values[k + 1]):
            continue
        window = (orders >= orders[k] - half) & (orders <= orders[k] + half)
        envelope = values[window].max()
        if values[k] * depth_factor > envelope:
            continue
        # Parabolic refinement on log magnitude.
        y0, y1, y2 = np.log(values[k - 1 : k + 2])
        denom = y0 - 2.0 * y1 + y2
        shift = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
        shift = float(np.clip(shift, -1.0, 1.0))
        step = orders[k + 1] - orders[k]
        zeros.append(
            RmeZero(
                component=component,
                scanned_axis=scan.scanned_axis,
                order=float(orders[k] + shift * step),
                magnitude=float(values[k]),
            )
        )
    return zeros


def correlate_minima(
    zeros: list[RmeZero], minima: list[SpectralMinimum]
) -> CorrelationReport:
    """Match spectral minima to RME zeros falling inside their intervals.

    Minima with no zero from any scan are quantum-path-interference
    candidates.
    """
    entries = []
    used: set[int] = set()
    for minimum in minima:
        inside = tuple(
            z for k, z in enumerate(zeros) if minimum.lo <= z.order <= minimum.hi
        )
        used.update(k for k, z in enumerate(zeros) if minimum.lo <= z.order <= minimum.hi)
        entries.append(MinimumCorrelation(minimum, inside))
    unmatched = tuple(z for k, z in enumerate(zeros) if k not in used)
    return CorrelationReport(tuple(entries), unmatched)

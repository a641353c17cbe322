"""Semi-infinite monochromatic laser field, exact integrals of A and A^2,
and strong-field diagnostics (Up, quiver radius, Q, cutoff).

Turn-on convention: E(t) = E0 sin(w0 (t - t_on)) for t >= t_on and zero
before, so A(t) = (E0/w0)(cos(w0 (t - t_on)) - 1) is continuous at the
turn-on and carries a DC offset.  A "monochromatic" convention (pure-cosine
A, field on for all times) is available for sensitivity studies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import constants
from .molecule import Molecule, max_internuclear_distance

_AXES = {"x": (1.0, 0.0, 0.0), "y": (0.0, 1.0, 0.0), "z": (0.0, 0.0, 1.0)}


def polarization_vector(axis) -> np.ndarray:
    """Unit polarization vector from 'x'/'y'/'z' or an arbitrary 3-vector."""
    if isinstance(axis, str):
        try:
            return np.array(_AXES[axis.lower()])
        except KeyError:
            raise ValueError(f"unknown polarization axis {axis!r}") from None
    vec = np.asarray(axis, dtype=float)
    if vec.shape != (3,) or not np.all(np.isfinite(vec)):
        raise ValueError("polarization must be a finite 3-vector")
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > 1e-6:
        raise ValueError(f"polarization vector must be unit length, |v| = {norm:.6g}")
    return vec / norm


@dataclass(frozen=True)
class LaserField:
    amplitude: float                      # E0 (a.u.)
    omega: float                          # carrier w0 (a.u.)
    polarization: np.ndarray              # unit 3-vector
    turn_on_time: float = 0.0
    convention: str = "semi_infinite"     # or "monochromatic"

    def __post_init__(self) -> None:
        if self.omega <= 0:
            raise ValueError("carrier frequency must be positive")
        if self.convention not in ("semi_infinite", "monochromatic"):
            raise ValueError(f"unknown field convention {self.convention!r}")
        pol = polarization_vector(self.polarization)
        pol.setflags(write=False)
        object.__setattr__(self, "polarization", pol)

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    @property
    def a0(self) -> float:
        """Vector-potential amplitude E0/w0."""
        return self.amplitude / self.omega

    def with_polarization(self, axis) -> "LaserField":
        return LaserField(
            self.amplitude, self.omega, polarization_vector(axis),
            self.turn_on_time, self.convention,
        )


def make_field(
    *,
    intensity_w_cm2: float | None = None,
    e0_au: float | None = None,
    wavelength_nm: float | None = None,
    omega_au: float | None = None,
    polarization="x",
    turn_on_time: float = 0.0,
    convention: str = "semi_infinite",
) -> LaserField:
    """Build a LaserField from either (intensity | E0) and (wavelength | omega)."""
    if (intensity_w_cm2 is None) == (e0_au is None):
        raise ValueError("specify exactly one of intensity_w_cm2 / e0_au")
    if (wavelength_nm is None) == (omega_au is None):
        raise ValueError("specify exactly one of wavelength_nm / omega_au")
    e0 = e0_au if e0_au is not None else constants.field_amplitude_from_intensity(intensity_w_cm2)
    omega = omega_au if omega_au is not None else constants.omega_from_wavelength(wavelength_nm)
    return LaserField(e0, omega, polarization_vector(polarization), turn_on_time, convention)


def _phase(field: LaserField, t) -> np.ndarray:
    return field.omega * (np.asarray(t, dtype=float) - field.turn_on_time)


def electric_field(field: LaserField, t) -> np.ndarray:
    """E(t) = E0 sin(w0 (t - t_on)) theta(t - t_on) along the polarization axis.

    `t` may be scalar or any array; the polarization axis is appended as the
    trailing dimension.
    """
    ph = _phase(field, t)
    env = field.amplitude * np.sin(ph)
    if field.convention == "semi_infinite":
        env = np.where(ph >= 0.0, env, 0.0)
    return np.multiply.outer(env, field.polarization)


def vector_potential(field: LaserField, t) -> np.ndarray:
    """A(t) with E = -dA/dt; continuous at the turn-on (A(t_on) = 0)."""
    ph = _phase(field, t)
    if field.convention == "semi_infinite":
        env = field.a0 * np.where(ph >= 0.0, np.cos(ph) - 1.0, 0.0)
    else:
        env = field.a0 * np.cos(ph)
    return np.multiply.outer(env, field.polarization)


def _integral_a_scalarized(field: LaserField, s1, s2):
    """Antiderivative-based integrals over clamped phase-times (semi-infinite)."""
    w = field.omega
    # int (cos - 1) ds and int (cos - 1)^2 ds between s1, s2 (s in shifted time)
    ia = (np.sin(w * s2) - np.sin(w * s1)) / w - (s2 - s1)
    ia2 = (
        1.5 * (s2 - s1)
        + (np.sin(2.0 * w * s2) - np.sin(2.0 * w * s1)) / (4.0 * w)
        - 2.0 * (np.sin(w * s2) - np.sin(w * s1)) / w
    )
    return ia, ia2


def _integrals(field: LaserField, t1, t2):
    t1 = np.asarray(t1, dtype=float)
    t2 = np.asarray(t2, dtype=float)
    if np.any(t2 - t1 < -1e-12):
        raise ValueError("integral bounds must satisfy t1 <= t2")
    if field.convention == "semi_infinite":
        s1 = np.maximum(t1 - field.turn_on_time, 0.0)
        s2 = np.maximum(t2 - field.turn_on_time, 0.0)
        ia, ia2 = _integral_a_scalarized(field, s1, s2)
    else:
        w = field.omega
        s1 = t1 - field.turn_on_time
        s2 = t2 - field.turn_on_time
        ia = (np.sin(w * s2) - np.sin(w * s1)) / w
        ia2 = 0.5 * (s2 - s1) + (np.sin(2.0 * w * s2) - np.sin(2.0 * w * s1)) / (4.0 * w)
    return field.a0 * ia, field.a0**2 * ia2


def integral_A(field: LaserField, t1, t2) -> np.ndarray:
    """Closed-form int_{t1}^{t2} A(s) ds; 3-vector (or (..., 3) for arrays)."""
    ia, _ = _integrals(field, t1, t2)
    return np.multiply.outer(ia, field.polarization)


def integral_A2(field: LaserField, t1, t2):
    """Closed-form int_{t1}^{t2} A(s).A(s) ds (scalar or array)."""
    _, ia2 = _integrals(field, t1, t2)
    return ia2 if np.ndim(ia2) else float(ia2)


@dataclass(frozen=True)
class FieldDiagnostics:
    up: float                 # ponderomotive energy (hartree)
    alpha0: float             # quiver radius (bohr)
    q_parameter: float        # R_max / (2 alpha0)
    cutoff_energy: float      # Ip + 3.17 Up (hartree)
    cutoff_order: float       # cutoff_energy / w0


def diagnostics(field: LaserField, molecule: Molecule, orbital_index: int) -> FieldDiagnostics:
    """Up, quiver radius, Q, and the cutoff predicted by Ip + 3.17 Up."""
    if not 0 <= orbital_index < len(molecule.orbitals):
        raise IndexError(f"orbital index {orbital_index} out of range")
    ip = molecule.orbitals[orbital_index].ionization_potential
    up = field.amplitude**2 / (4.0 * field.omega**2)
    alpha0 = field.amplitude / field.omega**2
    r_max = max_internuclear_distance(molecule)
    # zero field means no quiver motion; report an infinite Q rather than fail
    q = r_max / (2.0 * alpha0) if alpha0 > 0 else math.inf
    cutoff_energy = ip + 3.17 * up
    return FieldDiagnostics(up, alpha0, q, cutoff_energy, cutoff_energy / field.omega)

"""Physical constants and unit conversions (atomic units internally)."""

from __future__ import annotations

import math

# Peak intensity of a linearly polarized wave with E0 = 1 a.u., in W/cm^2.
INTENSITY_AU_W_CM2 = 3.50945e16

# omega[a.u.] = WAVELENGTH_CONST / lambda[nm]  (2*pi*c in mixed units)
WAVELENGTH_CONST_NM = 45.5633

BOHR_PER_ANGSTROM = 1.0 / 0.52917721
ANGSTROM_PER_BOHR = 0.52917721

DEBYE_PER_AU = 2.541746

# Electron charge in atomic units; carried explicitly through field/action code.
ELECTRON_CHARGE = -1.0


def field_amplitude_from_intensity(intensity_w_cm2: float) -> float:
    """Peak electric field E0 (a.u.) for a given intensity in W/cm^2."""
    if intensity_w_cm2 < 0:
        raise ValueError("intensity must be non-negative")
    return math.sqrt(intensity_w_cm2 / INTENSITY_AU_W_CM2)


def omega_from_wavelength(wavelength_nm: float) -> float:
    """Carrier angular frequency (a.u.) for a vacuum wavelength in nm."""
    if wavelength_nm <= 0:
        raise ValueError("wavelength must be positive")
    return WAVELENGTH_CONST_NM / wavelength_nm

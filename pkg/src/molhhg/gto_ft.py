"""Closed-form plane-wave integrals of contracted Cartesian Gaussians.

Everything here reduces to the 1-D moment

    m(a, alpha, q) = int u^a exp(-alpha u^2) exp(i q u) du
                   = sqrt(pi/alpha) (i/(2 sqrt(alpha)))^a H_a(q/(2 sqrt(alpha)))
                     exp(-q^2/(4 alpha)),

with H_a the physicists' Hermite polynomial.  Three-dimensional overlaps and
dipole matrix elements factorize over Cartesian dimensions; the dipole
operator raises one 1-D moment order per component (r exp(i Pi.r) =
-i grad_Pi exp(i Pi.r)) and adds a center-offset term.

Scalar calls are routed through the batch path (a batch of one), so batch and
scalar evaluation are bit-identical by construction.
"""

from __future__ import annotations

import math

import numpy as np

from .molecule import ContractedShell, Molecule

# Plane-wave normalization <r|Pi> = (2 pi)^(-3/2) exp(i Pi.r); single source of
# truth for every downstream module.
PLANE_WAVE_NORM = (2.0 * math.pi) ** -1.5

# Highest Cartesian power accepted on a shell; one more order is needed
# internally for the dipole raise.
MAX_SHELL_POWER = 6
_MAX_MOMENT_ORDER = MAX_SHELL_POWER + 1


class CapabilityError(ValueError):
    """Requested Cartesian power beyond the supported table."""


def hermite_values(max_order: int, u: np.ndarray) -> np.ndarray:
    """H_0..H_max_order at u, stacked on a new leading axis."""
    out = np.empty((max_order + 1,) + u.shape)
    out[0] = 1.0
    if max_order >= 1:
        out[1] = 2.0 * u
    for n in range(1, max_order):
        out[n + 1] = 2.0 * u * out[n] - 2.0 * n * out[n - 1]
    return out


def gaussian_moments(max_order: int, alpha: float, q: np.ndarray) -> np.ndarray:
    """m(a, alpha, q) for a = 0..max_order, shape (max_order+1, *q.shape)."""
    if max_order > _MAX_MOMENT_ORDER:
        raise CapabilityError(
            f"moment order {max_order} exceeds supported maximum {_MAX_MOMENT_ORDER}"
        )
    q = np.asarray(q, dtype=float)
    half_rt = 0.5 / math.sqrt(alpha)
    u = q * half_rt
    herm = hermite_values(max_order, u)
    envelope = math.sqrt(math.pi / alpha) * np.exp(-(u**2))
    scale = (1j * half_rt) ** np.arange(max_order + 1)
    return scale.reshape((-1,) + (1,) * q.ndim) * herm * envelope


def gaussian_moment_1d(a: int, alpha: float, q) -> complex | np.ndarray:
    """int u^a exp(-alpha u^2) exp(i q u) du for scalar or batched q."""
    if a < 0:
        raise ValueError("power must be non-negative")
    if a > _MAX_MOMENT_ORDER:
        raise CapabilityError(
            f"power {a} exceeds supported maximum {_MAX_MOMENT_ORDER}"
        )
    if alpha <= 0:
        raise ValueError("exponent must be positive")
    q_arr = np.atleast_1d(np.asarray(q, dtype=float))
    vals = gaussian_moments(a, alpha, q_arr)[a]
    return complex(vals[0]) if np.isscalar(q) or np.ndim(q) == 0 else vals.reshape(np.shape(q))


def _check_shell(shell: ContractedShell) -> None:
    if max(shell.powers) > MAX_SHELL_POWER:
        raise CapabilityError(
            f"shell power {max(shell.powers)} exceeds supported maximum {MAX_SHELL_POWER}"
        )


def _dot_position(pi_arr: np.ndarray, position: np.ndarray) -> np.ndarray:
    # elementwise form keeps batch evaluation bit-identical to scalar
    # evaluation (matmul kernels reorder sums depending on the batch size)
    return (
        pi_arr[..., 0] * position[0]
        + pi_arr[..., 1] * position[1]
        + pi_arr[..., 2] * position[2]
    )


def plane_wave_overlap(shell: ContractedShell, center, pi_momentum) -> complex | np.ndarray:
    """<exp(i Pi.r) | shell at center>: sum_k w_k e^(i Pi.R) prod_d m(a_d, alpha_k, Pi_d).

    `pi_momentum` may be a 3-vector or an (..., 3) batch.
    """
    _check_shell(shell)
    center = np.asarray(center, dtype=float)
    pi_arr = np.asarray(pi_momentum, dtype=float)
    scalar_input = pi_arr.ndim == 1
    pi_arr = np.atleast_2d(pi_arr)

    a, b, c = shell.powers
    total = np.zeros(pi_arr.shape[:-1], dtype=complex)
    for w, alpha in zip(shell.weights(), shell.exponents()):
        mx = gaussian_moments(a, alpha, pi_arr[..., 0])[a]
        my = gaussian_moments(b, alpha, pi_arr[..., 1])[b]
        mz = gaussian_moments(c, alpha, pi_arr[..., 2])[c]
        total += w * mx * my * mz
    total *= np.exp(1j * _dot_position(pi_arr, center))
    return complex(total[0]) if scalar_input else total


def _stripped_center_element(
    molecule: Molecule, orbital_index: int, center_index: int, pi_arr: np.ndarray
) -> np.ndarray:
    """Per-center dipole element without the e^(i Pi.R_i) phase, shape (..., 3)."""
    coeff = molecule.orbitals[orbital_index].coefficients
    center = molecule.centers[center_index]
    offset = sum(len(c.shells) for c in molecule.centers[:center_index])

    overlap = np.zeros(pi_arr.shape[:-1], dtype=complex)
    raised = np.zeros(pi_arr.shape[:-1] + (3,), dtype=complex)
    for local, shell in enumerate(center.shells):
        c_l = coeff[offset + local]
        if c_l == 0.0:
            continue
        _check_shell(shell)
        a, b, c = shell.powers
        for w, alpha in zip(shell.weights(), shell.exponents()):
            mx = gaussian_moments(a + 1, alpha, pi_arr[..., 0])
            my = gaussian_moments(b + 1, alpha, pi_arr[..., 1])
            mz = gaussian_moments(c + 1, alpha, pi_arr[..., 2])
            cw = c_l * w
            overlap += cw * mx[a] * my[b] * mz[c]
            raised[..., 0] += cw * mx[a + 1] * my[b] * mz[c]
            raised[..., 1] += cw * mx[a] * my[b + 1] * mz[c]
            raised[..., 2] += cw * mx[a] * my[b] * mz[c + 1]
    return PLANE_WAVE_NORM * (raised + center.position * overlap[..., None])


def dipole_matrix_element(
    molecule: Molecule,
    orbital_index: int,
    pi_momentum,
    mode: str = "full",
    center_index: int | None = None,
) -> np.ndarray:
    """Recombination dipole element d*_rec(Pi) = <psi | r | Pi>, a complex 3-vector.

    mode="full" sums all centers with their plane-wave phases; the
    "per_center_stripped" mode returns one center's contribution with the
    e^(i Pi.R_i) phase removed (that phase belongs to the modified action).
    `pi_momentum` may be a 3-vector or an (..., 3) batch.
    """
    if not 0 <= orbital_index < len(molecule.orbitals):
        raise IndexError(f"orbital index {orbital_index} out of range")
    pi_arr = np.asarray(pi_momentum, dtype=float)
    scalar_input = pi_arr.ndim == 1
    pi_arr = np.atleast_2d(pi_arr)

    if mode == "per_center_stripped":
        if center_index is None:
            raise ValueError("per_center_stripped mode requires a center_index")
        if not 0 <= center_index < len(molecule.centers):
            raise IndexError(f"center index {center_index} out of range")
        value = _stripped_center_element(molecule, orbital_index, center_index, pi_arr)
    elif mode == "full":
        value = np.zeros(pi_arr.shape[:-1] + (3,), dtype=complex)
        for i, center in enumerate(molecule.centers):
            phase = np.exp(1j * _dot_position(pi_arr, center.position))
            value += phase[..., None] * _stripped_center_element(
                molecule, orbital_index, i, pi_arr
            )
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return value[0] if scalar_input else value


def recombination_matrix_element(molecule: Molecule, orbital_index: int, pi_momentum) -> np.ndarray:
    """d*_rec(Pi): alias of the full-mode dipole matrix element."""
    return dipole_matrix_element(molecule, orbital_index, pi_momentum, mode="full")


def ionization_matrix_element(molecule: Molecule, orbital_index: int, pi_momentum) -> np.ndarray:
    """d_ion(Pi) = <Pi | r | psi> = conj(d*_rec(Pi)) for real LCAO states."""
    return np.conj(recombination_matrix_element(molecule, orbital_index, pi_momentum))

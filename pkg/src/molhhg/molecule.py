"""Molecular model: geometry, contracted Cartesian Gaussian basis, and orbitals.

All quantities are in atomic units (positions in bohr, exponents in bohr^-2,
ionization potentials in hartree).  The static dipole is stored in debye and
is informational only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


def double_factorial(n: int) -> float:
    """(2k-1)!! with the convention (-1)!! = 1."""
    if n <= 0:
        return 1.0
    result = 1.0
    while n > 1:
        result *= n
        n -= 2
    return result


def primitive_norm(powers: tuple[int, int, int], alpha: float) -> float:
    """Normalization of a Cartesian Gaussian x^a y^b z^c exp(-alpha r^2).

    N = (2a/pi)^(3/4) (4a)^((a+b+c)/2) / sqrt((2a-1)!!(2b-1)!!(2c-1)!!)
    """
    a, b, c = powers
    l = a + b + c
    return (
        (2.0 * alpha / math.pi) ** 0.75
        * (4.0 * alpha) ** (l / 2.0)
        / math.sqrt(
            double_factorial(2 * a - 1)
            * double_factorial(2 * b - 1)
            * double_factorial(2 * c - 1)
        )
    )


@dataclass(frozen=True)
class GaussianPrimitive:
    """One Gaussian primitive: exponent and contraction coefficient.

    The contraction coefficient refers to the *normalized* primitive (the
    convention of standard quantum-chemistry basis set tabulations).
    """

    exponent: float
    coefficient: float

    def __post_init__(self) -> None:
        if not (self.exponent > 0.0 and math.isfinite(self.exponent)):
            raise ValueError(f"primitive exponent must be positive, got {self.exponent}")
        if not math.isfinite(self.coefficient):
            raise ValueError("primitive coefficient must be finite")


@dataclass(frozen=True)
class ContractedShell:
    """Contracted Cartesian Gaussian x^a y^b z^c sum_k eta_k exp(-alpha_k r^2).

    `normalization` is an overall scale applied on top of the per-primitive
    norms; `normalized()` fixes it such that the contracted self-overlap is 1.
    """

    powers: tuple[int, int, int]
    primitives: tuple[GaussianPrimitive, ...]
    normalization: float = 1.0

    def __post_init__(self) -> None:
        a, b, c = self.powers
        if min(a, b, c) < 0:
            raise ValueError(f"Cartesian powers must be non-negative, got {self.powers}")
        if len(self.primitives) == 0:
            raise ValueError("shell needs at least one primitive")
        if not (self.normalization > 0.0 and math.isfinite(self.normalization)):
            raise ValueError("shell normalization must be positive")
        object.__setattr__(self, "powers", (int(a), int(b), int(c)))
        object.__setattr__(self, "primitives", tuple(self.primitives))

    @property
    def total_angular(self) -> int:
        return sum(self.powers)

    def weights(self) -> np.ndarray:
        """Effective primitive weights: normalization * eta_k * N(a,b,c,alpha_k)."""
        return np.array(
            [
                self.normalization * p.coefficient * primitive_norm(self.powers, p.exponent)
                for p in self.primitives
            ]
        )

    def exponents(self) -> np.ndarray:
        return np.array([p.exponent for p in self.primitives])

    def self_overlap(self) -> float:
        """Analytic <phi|phi> of the contracted shell."""
        a, b, c = self.powers
        w = self.weights()
        al = self.exponents()
        gamma = al[:, None] + al[None, :]
        poly = (
            double_factorial(2 * a - 1)
            * double_factorial(2 * b - 1)
            * double_factorial(2 * c - 1)
            / (2.0 * gamma) ** (a + b + c)
        )
        s = (math.pi / gamma) ** 1.5 * poly
        return float(np.einsum("k,m,km->", w, w, s))

    def normalized(self) -> "ContractedShell":
        """Copy with `normalization` fixed so that the self-overlap equals 1."""
        base = ContractedShell(self.powers, self.primitives, 1.0)
        scale = 1.0 / math.sqrt(base.self_overlap())
        return ContractedShell(self.powers, self.primitives, scale)


@dataclass(frozen=True)
class AtomicCenter:
    """Nuclear position with the basis shells attached to it."""

    position: np.ndarray
    element: str
    shells: tuple[ContractedShell, ...]

    def __post_init__(self) -> None:
        pos = np.asarray(self.position, dtype=float)
        if pos.shape != (3,) or not np.all(np.isfinite(pos)):
            raise ValueError("center position must be a finite 3-vector")
        pos = pos.copy()
        pos.setflags(write=False)
        object.__setattr__(self, "position", pos)
        object.__setattr__(self, "shells", tuple(self.shells))


@dataclass(frozen=True)
class MolecularOrbital:
    """LCAO coefficients (one per shell, center-major order) plus metadata."""

    coefficients: np.ndarray
    ionization_potential: float
    label: str
    degeneracy: int = 1

    def __post_init__(self) -> None:
        coeff = np.asarray(self.coefficients, dtype=float)
        if coeff.ndim != 1 or not np.all(np.isfinite(coeff)):
            raise ValueError("orbital coefficients must be a finite 1-D array")
        coeff = coeff.copy()
        coeff.setflags(write=False)
        object.__setattr__(self, "coefficients", coeff)
        if not (self.ionization_potential > 0.0 and math.isfinite(self.ionization_potential)):
            raise ValueError("ionization potential must be positive")
        if self.degeneracy < 1:
            raise ValueError("degeneracy must be a positive integer")


@dataclass(frozen=True)
class Molecule:
    """Immutable molecule: centers, orbitals, and an informational static dipole."""

    centers: tuple[AtomicCenter, ...]
    orbitals: tuple[MolecularOrbital, ...]
    static_dipole_debye: np.ndarray = field(
        default_factory=lambda: np.zeros(3)
    )
    name: str = ""

    def __post_init__(self) -> None:
        if len(self.centers) < 1:
            raise ValueError("molecule needs at least one center")
        object.__setattr__(self, "centers", tuple(self.centers))
        object.__setattr__(self, "orbitals", tuple(self.orbitals))
        dip = np.asarray(self.static_dipole_debye, dtype=float)
        if dip.shape != (3,) or not np.all(np.isfinite(dip)):
            raise ValueError("static dipole must be a finite 3-vector")
        dip = dip.copy()
        dip.setflags(write=False)
        object.__setattr__(self, "static_dipole_debye", dip)
        nshell = self.shell_count
        for orb in self.orbitals:
            if orb.coefficients.shape != (nshell,):
                raise ValueError(
                    f"orbital {orb.label!r} has {orb.coefficients.shape[0]} coefficients, "
                    f"molecule has {nshell} shells"
                )

    @property
    def shell_count(self) -> int:
        return sum(len(c.shells) for c in self.centers)

    @property
    def positions(self) -> np.ndarray:
        """(N, 3) array of center positions."""
        return np.array([c.position for c in self.centers])

    def flat_shells(self) -> list[tuple[int, ContractedShell]]:
        """Shells in center-major order as (center_index, shell) pairs."""
        out = []
        for i, center in enumerate(self.centers):
            for shell in center.shells:
                out.append((i, shell))
        return out

    def orbitals_by_label(self, labels: list[str] | tuple[str, ...]) -> list[int]:
        """Indices of all orbitals whose label is in `labels` (degenerate sets included)."""
        wanted = set(labels)
        idx = [i for i, o in enumerate(self.orbitals) if o.label in wanted]
        missing = wanted - {o.label for o in self.orbitals}
        if missing:
            known = sorted({o.label for o in self.orbitals})
            raise KeyError(f"unknown orbital labels {sorted(missing)}; molecule has {known}")
        return idx


def max_internuclear_distance(molecule: Molecule) -> float:
    """Largest distance between any two nuclei; 0 for a single atom."""
    pos = molecule.positions
    if len(pos) == 1:
        return 0.0
    diff = pos[:, None, :] - pos[None, :, :]
    return float(np.sqrt((diff**2).sum(axis=-1)).max())


def evaluate_orbital(molecule: Molecule, orbital_index: int, r) -> float | np.ndarray:
    """Evaluate psi(r) = sum_j sum_l C_l phi_l(r - R_j) at one or many points.

    `r` may be a 3-vector or an (..., 3) array; the return matches its shape
    without the last axis.
    """
    if not 0 <= orbital_index < len(molecule.orbitals):
        raise IndexError(
            f"orbital index {orbital_index} out of range "
            f"(molecule has {len(molecule.orbitals)} orbitals)"
        )
    pts = np.asarray(r, dtype=float)
    if pts.shape[-1] != 3:
        raise ValueError("evaluation point(s) must have a trailing axis of length 3")
    if not np.all(np.isfinite(pts)):
        raise ValueError("evaluation point must be finite")
    scalar_input = pts.ndim == 1
    pts = np.atleast_2d(pts)

    coeff = molecule.orbitals[orbital_index].coefficients
    value = np.zeros(pts.shape[:-1])
    for (center_idx, shell), c in zip(molecule.flat_shells(), coeff):
        if c == 0.0:
            continue
        rel = pts - molecule.centers[center_idx].position
        rsq = (rel**2).sum(axis=-1)
        a, b, cc = shell.powers
        poly = rel[..., 0] ** a * rel[..., 1] ** b * rel[..., 2] ** cc
        radial = np.zeros_like(rsq)
        for w, alpha in zip(shell.weights(), shell.exponents()):
            radial += w * np.exp(-alpha * rsq)
        value += c * poly * radial
    return float(value[0]) if scalar_input else value


def _overlap_1d(i: int, j: int, gamma: float, pa: float, pb: float) -> float:
    """1-D Cartesian overlap factor via the Gaussian product theorem recursion."""
    if i < 0 or j < 0:
        return 0.0
    if i == 0 and j == 0:
        return math.sqrt(math.pi / gamma)
    if i > 0:
        return (
            pa * _overlap_1d(i - 1, j, gamma, pa, pb)
            + (i - 1) / (2 * gamma) * _overlap_1d(i - 2, j, gamma, pa, pb)
            + j / (2 * gamma) * _overlap_1d(i - 1, j - 1, gamma, pa, pb)
        )
    return (
        pb * _overlap_1d(i, j - 1, gamma, pa, pb)
        + (j - 1) / (2 * gamma) * _overlap_1d(i, j - 2, gamma, pa, pb)
        + i / (2 * gamma) * _overlap_1d(i - 1, j, gamma, pa, pb)
    )


def shell_overlap(
    shell_a: ContractedShell,
    center_a: np.ndarray,
    shell_b: ContractedShell,
    center_b: np.ndarray,
) -> float:
    """Analytic overlap of two contracted Cartesian shells at arbitrary centers."""
    ra = np.asarray(center_a, dtype=float)
    rb = np.asarray(center_b, dtype=float)
    ab2 = float(((ra - rb) ** 2).sum())
    total = 0.0
    for wa, alpha in zip(shell_a.weights(), shell_a.exponents()):
        for wb, beta in zip(shell_b.weights(), shell_b.exponents()):
            gamma = alpha + beta
            p = (alpha * ra + beta * rb) / gamma
            pref = math.exp(-alpha * beta * ab2 / gamma)
            s = pref
            for d in range(3):
                s *= _overlap_1d(
                    shell_a.powers[d], shell_b.powers[d], gamma, p[d] - ra[d], p[d] - rb[d]
                )
            total += wa * wb * s
    return total


def orbital_norm(molecule: Molecule, orbital_index: int) -> float:
    """sqrt(<psi|psi>) of an LCAO orbital, from analytic shell overlaps.

    Used to flag ingested molecules whose orbital coefficients do not refer to
    normalized contracted shells (norm far from 1).
    """
    coeff = molecule.orbitals[orbital_index].coefficients
    shells = molecule.flat_shells()
    positions = molecule.positions
    total = 0.0
    for i, (ci, shell_i) in enumerate(shells):
        for j in range(i, len(shells)):
            cj, shell_j = shells[j]
            if coeff[i] == 0.0 or coeff[j] == 0.0:
                continue
            s = shell_overlap(shell_i, positions[ci], shell_j, positions[cj])
            total += (1 if i == j else 2) * coeff[i] * coeff[j] * s
    return math.sqrt(abs(total))

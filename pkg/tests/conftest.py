"""Shared fixtures: toy molecules, the laser used throughout, and cached
desk-scale engine runs reused across the acceptance criteria."""

from __future__ import annotations

import numpy as np
import pytest

from molhhg.field import make_field
from molhhg.fixtures import load_fixture
from molhhg.lewenstein import TauGrid, dipole_time_series
from molhhg.molecule import (
    AtomicCenter,
    ContractedShell,
    GaussianPrimitive,
    MolecularOrbital,
    Molecule,
)
from molhhg.spectrum import retained, spectrum_from_dipole

# Desk-scale grids used by every cached acceptance run (quick profile).
QUICK = {
    "samples_per_cycle": 256,
    "n_cycles": 6,
    "discard_cycles": 2,
    "tau_nodes": 384,
    "tau_max_cycles": 1.25,
    "tau_min": 0.05,
    "epsilon": 1e-4,
}


def s_shell(alpha: float) -> ContractedShell:
    return ContractedShell((0, 0, 0), (GaussianPrimitive(alpha, 1.0),)).normalized()


def single_atom(position=(0.0, 0.0, 0.0), alpha: float = 1.0, ip: float = 0.5) -> Molecule:
    center = AtomicCenter(np.asarray(position, float), "A", (s_shell(alpha),))
    return Molecule((center,), (MolecularOrbital(np.array([1.0]), ip, "HOMO"),))


def h2_like(separation: float = 2.0, alpha: float = 0.8, ip: float = 0.6) -> Molecule:
    half = separation / 2.0
    c1 = AtomicCenter(np.array([half, 0.0, 0.0]), "H", (s_shell(alpha),))
    c2 = AtomicCenter(np.array([-half, 0.0, 0.0]), "H", (s_shell(alpha),))
    orb = MolecularOrbital(np.array([0.7071, 0.7071]), ip, "HOMO")
    return Molecule((c1, c2), (orb,))


def mixed_toy() -> Molecule:
    """Two centers, s + p shells, deliberately asymmetric."""
    s = s_shell(0.8)
    px = ContractedShell((1, 0, 0), (GaussianPrimitive(0.5, 1.0),)).normalized()
    pz = ContractedShell(
        (0, 0, 1),
        (GaussianPrimitive(0.9, 0.6), GaussianPrimitive(0.25, 0.55)),
    ).normalized()
    c1 = AtomicCenter(np.array([1.1, 0.4, -0.3]), "X", (s, px))
    c2 = AtomicCenter(np.array([-0.9, -0.2, 0.5]), "Y", (s, pz))
    orb = MolecularOrbital(np.array([0.55, 0.3, 0.5, 0.35]), 0.45, "HOMO")
    return Molecule((c1, c2), (orb,))


@pytest.fixture(scope="session")
def drive_field():
    return make_field(intensity_w_cm2=5e14, wavelength_nm=800, polarization="x")


def run_desk(molecule, orbitals, axis, *, grids=None, n_workers=None):
    """One desk-scale dipole run plus its spectrum."""
    g = dict(QUICK)
    if grids:
        g.update(grids)
    field = make_field(intensity_w_cm2=5e14, wavelength_nm=800, polarization=axis)
    tau = TauGrid.for_field(
        field,
        tau_min=g["tau_min"],
        tau_max_cycles=g["tau_max_cycles"],
        n_nodes=g["tau_nodes"],
        epsilon=g["epsilon"],
    )
    dt = field.period / g["samples_per_cycle"]
    times = dt * np.arange(1, g["samples_per_cycle"] * g["n_cycles"] + 1)
    series = dipole_time_series(
        molecule, orbitals, field, times, tau, n_workers=n_workers
    )
    spectrum = spectrum_from_dipole(retained(series, g["discard_cycles"]))
    return series, spectrum


@pytest.fixture(scope="session")
def ring():
    return load_fixture("ring")


@pytest.fixture(scope="session")
def bowl():
    return load_fixture("bowl")


@pytest.fixture(scope="session")
def fullerene():
    return load_fixture("fullerene")


@pytest.fixture(scope="session")
def ring_drive_z(ring):
    return run_desk(ring, ["HOMO"], "z")


@pytest.fixture(scope="session")
def ring_drive_x(ring):
    return run_desk(ring, ["HOMO"], "x")


@pytest.fixture(scope="session")
def ring_drive_y(ring):
    return run_desk(ring, ["HOMO"], "y")


@pytest.fixture(scope="session")
def fullerene_drive_x(fullerene):
    return run_desk(fullerene, ["HOMO"], "x")


@pytest.fixture(scope="session")
def fullerene_drive_y(fullerene):
    return run_desk(fullerene, ["HOMO"], "y")


@pytest.fixture(scope="session")
def bowl_drive_z(bowl):
    return run_desk(bowl, ["HOMO"], "z")

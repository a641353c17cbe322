import math

import numpy as np
import pytest

from molhhg.field import make_field
from molhhg.gto_ft import recombination_matrix_element
from molhhg.rme_scan import (
    RmeZero,
    correlate_minima,
    find_rme_zeros,
    scan_rme,
)
from molhhg.spectrum import SpectralMinimum
from conftest import h2_like, single_atom


@pytest.fixture(scope="module")
def field():
    return make_field(intensity_w_cm2=5e14, wavelength_nm=800, polarization="x")


class TestScan:
    def test_threshold_order_gives_zero_momentum(self, field):
        mol = single_atom(ip=0.5)
        threshold = 0.5 / field.omega
        scan = scan_rme(mol, ["HOMO"], field, "x", (threshold, threshold + 30), n_samples=50)
        assert scan.pi_values[0] == pytest.approx(0.0, abs=1e-12)

    def test_below_threshold_rejected(self, field):
        with pytest.raises(ValueError, match="threshold"):
            scan_rme(single_atom(ip=0.5), ["HOMO"], field, "x", (1.0, 30.0))

    def test_energy_conservation_invariant(self, field):
        mol = single_atom(ip=0.5)
        scan = scan_rme(mol, ["HOMO"], field, "y", (10.0, 70.0), n_samples=123)
        orders = (scan.pi_values**2 / 2.0 + 0.5) / field.omega
        np.testing.assert_allclose(orders, scan.orders, rtol=1e-12)

    def test_fixed_components_enter_energy_balance(self, field):
        mol = single_atom(ip=0.5)
        scan = scan_rme(
            mol, ["HOMO"], field, "x", (20.0, 60.0), n_samples=40,
            fixed_components=(0.4, -0.2),
        )
        total = scan.pi_values**2 + 0.4**2 + 0.2**2
        orders = (total / 2.0 + 0.5) / field.omega
        np.testing.assert_allclose(orders, scan.orders, rtol=1e-12)

    def test_isotropy_for_s_atom(self, field):
        mol = single_atom(ip=0.5, alpha=0.9)
        scans = {
            axis: scan_rme(mol, ["HOMO"], field, axis, (10.0, 70.0), n_samples=64)
            for axis in "xyz"
        }
        # the scanned-axis component carries the signal; same magnitude on all axes
        sx = scans["x"].component("x")
        sy = scans["y"].component("y")
        sz = scans["z"].component("z")
        np.testing.assert_allclose(sx, sy, rtol=1e-12)
        np.testing.assert_allclose(sx, sz, rtol=1e-12)

    def test_matches_pointwise_gto_ft(self, field):
        mol = h2_like()
        scan = scan_rme(mol, ["HOMO"], field, "x", (12.0, 60.0), n_samples=31)
        for k in (0, 10, 30):
            pi_vec = np.array([scan.pi_values[k], 0.0, 0.0])
            direct = np.abs(recombination_matrix_element(mol, 0, pi_vec)) ** 2
            np.testing.assert_array_equal(scan.magnitudes[k], direct)

    def test_incoherent_mode_sums_squares(self, field):
        from molhhg.molecule import MolecularOrbital, Molecule

        base = h2_like()
        orb2 = MolecularOrbital(np.array([0.9, 0.2]), 0.7, "HOMO-1")
        mol = Molecule(base.centers, base.orbitals + (orb2,))
        coherent = scan_rme(
            mol, ["HOMO", "HOMO-1"], field, "x", (16.0, 40.0), n_samples=16
        )
        incoherent = scan_rme(
            mol, ["HOMO", "HOMO-1"], field, "x", (16.0, 40.0), n_samples=16,
            superposition="incoherent",
        )
        assert not np.allclose(coherent.magnitudes, incoherent.magnitudes)
        k = 7
        parts = []
        for label, ip in (("HOMO", 0.6), ("HOMO-1", 0.7)):
            single = scan_rme(mol, [label], field, "x", (16.0, 40.0), n_samples=16)
            parts.append(single.magnitudes[k])
        np.testing.assert_allclose(
            incoherent.magnitudes[k], parts[0] + parts[1], rtol=1e-12
        )


class TestZeros:
    def test_monotone_scan_has_no_zeros(self, field):
        scan = scan_rme(single_atom(ip=0.5), ["HOMO"], field, "x", (10.0, 70.0))
        assert find_rme_zeros(scan, "x") == []

    def test_two_center_interference_zeros(self, field):
        # bonding s pair separated by d: the x-component vanishes where the
        # structure factor does; an analytic model locates the zeros
        d = 2.0
        mol = h2_like(separation=d, alpha=0.8, ip=0.5)
        scan = scan_rme(mol, ["HOMO"], field, "x", (9.0, 80.0), n_samples=1200)
        zeros = find_rme_zeros(scan, "x")
        assert zeros, "expected interference zeros"
        # analytic zeros: d/dPi of cos-weighted Gaussian form; brute-force scan
        pi = np.linspace(0.2, 3.2, 40000)
        vals = np.abs(
            recombination_matrix_element(mol, 0, np.stack(
                [pi, np.zeros_like(pi), np.zeros_like(pi)], axis=1))[:, 0]
        )
        sign_changes = pi[np.nonzero(np.diff(np.sign(np.gradient(vals))) > 0)[0]]
        analytic_orders = (sign_changes**2 / 2 + 0.5) / field.omega
        for z in zeros:
            assert np.min(np.abs(analytic_orders - z.order)) < 0.1

    def test_refinement_improves_position(self, field):
        mol = h2_like(separation=2.0, alpha=0.8, ip=0.5)
        coarse = scan_rme(mol, ["HOMO"], field, "x", (9.0, 80.0), n_samples=150)
        fine = scan_rme(mol, ["HOMO"], field, "x", (9.0, 80.0), n_samples=6000)
        z_coarse = find_rme_zeros(coarse, "x")
        z_fine = find_rme_zeros(fine, "x")
        assert len(z_coarse) == len(z_fine)
        for zc, zf in zip(z_coarse, z_fine):
            assert abs(zc.order - zf.order) < 0.25

    def test_ring_z_component_vanishes_everywhere(self, field):
        from molhhg.fixtures import load_fixture

        ring = load_fixture("ring")
        for axis in "xyz":
            scan = scan_rme(ring, ["HOMO"], field, axis, (9.0, 75.0), n_samples=200)
            x_peak = max(
                scan_rme(ring, ["HOMO"], field, a2, (9.0, 75.0), n_samples=200)
                .component("x").max()
                for a2 in ("x",)
            )
            assert scan.component("z").max() < 1e-10 * x_peak


class TestCorrelation:
    def test_empty_zero_list_leaves_minima_unmatched(self):
        minima = [SpectralMinimum(23.0, 27.0, 12.0)]
        report = correlate_minima([], minima)
        assert report.matched_count == 0
        assert report.unmatched_count == 1

    def test_containment_matches(self):
        zeros = [RmeZero("x", "x", 25.0, 1e-9)]
        minima = [SpectralMinimum(23.0, 27.0, 12.0), SpectralMinimum(40.0, 44.0, 15.0)]
        report = correlate_minima(zeros, minima)
        assert report.entries[0].matched
        assert not report.entries[1].matched
        payload = report.to_dict()
        assert payload["matched"] == 1
        assert payload["unmatched_qpi_candidates"] == 1

    def test_unmatched_zeros_reported(self):
        zeros = [RmeZero("x", "x", 25.0, 1e-9), RmeZero("y", "x", 60.0, 1e-8)]
        minima = [SpectralMinimum(23.0, 27.0, 12.0)]
        report = correlate_minima(zeros, minima)
        assert len(report.unmatched_zeros) == 1
        assert report.unmatched_zeros[0].order == 60.0


class TestSyntheticZeroMapping:
    def test_sin_squared_zeros_map_through_energy_conservation(self, field):
        # |d|^2 = sin^2(Pi d / 2) * Gaussian with d = 2: zeros at Pi = k pi
        from molhhg.rme_scan import RmeScan

        ip = 0.5
        omega0 = field.omega
        pi_vals = np.linspace(0.05, 3.4, 4000)
        orders = (pi_vals**2 / 2 + ip) / omega0
        mags = np.zeros((pi_vals.size, 3))
        mags[:, 0] = np.sin(pi_vals * 1.0) ** 2 * np.exp(-(pi_vals**2) / 6.0)
        scan = RmeScan(
            scanned_axis="x",
            fixed_components=(0.0, 0.0),
            orders=orders,
            pi_values=pi_vals,
            magnitudes=mags,
            orbital_labels=("HOMO",),
            ip_reference=ip,
        )
        zeros = find_rme_zeros(scan, "x")
        expected_pi = np.array([np.pi])   # only k=1 lies inside the window
        expected_orders = (expected_pi**2 / 2 + ip) / omega0
        assert len(zeros) == len(expected_orders)
        for z, exp in zip(zeros, expected_orders):
            assert z.order == pytest.approx(exp, abs=0.05)

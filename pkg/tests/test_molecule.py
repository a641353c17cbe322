import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from molhhg.molecule import (
    AtomicCenter,
    ContractedShell,
    GaussianPrimitive,
    MolecularOrbital,
    Molecule,
    evaluate_orbital,
    max_internuclear_distance,
    orbital_norm,
    primitive_norm,
    shell_overlap,
)
from conftest import h2_like, mixed_toy, s_shell, single_atom


class TestTypes:
    def test_primitive_rejects_bad_exponent(self):
        with pytest.raises(ValueError, match="positive"):
            GaussianPrimitive(-1.0, 0.5)
        with pytest.raises(ValueError, match="positive"):
            GaussianPrimitive(0.0, 0.5)

    def test_shell_rejects_negative_powers(self):
        with pytest.raises(ValueError):
            ContractedShell((-1, 0, 0), (GaussianPrimitive(1.0, 1.0),))

    def test_shell_rejects_empty_primitives(self):
        with pytest.raises(ValueError):
            ContractedShell((0, 0, 0), ())

    def test_orbital_requires_positive_ip(self):
        with pytest.raises(ValueError):
            MolecularOrbital(np.array([1.0]), -0.5, "HOMO")

    def test_molecule_checks_coefficient_length(self):
        center = AtomicCenter(np.zeros(3), "H", (s_shell(1.0),))
        with pytest.raises(ValueError, match="coefficients"):
            Molecule((center,), (MolecularOrbital(np.array([1.0, 2.0]), 0.5, "X"),))

    def test_molecule_is_immutable(self):
        mol = single_atom()
        with pytest.raises(Exception):
            mol.centers = ()
        assert not mol.centers[0].position.flags.writeable


class TestMaxInternuclearDistance:
    def test_single_atom_is_zero(self):
        assert max_internuclear_distance(single_atom()) == 0.0

    def test_two_atoms(self):
        assert max_internuclear_distance(h2_like(2.0)) == pytest.approx(2.0)

    def test_ring_diameter_matches_published_radius(self):
        # planar C20 ring of average radius 7.8 bohr has 15.6 bohr diameter
        from molhhg.fixtures import load_fixture

        ring = load_fixture("ring")
        assert max_internuclear_distance(ring) == pytest.approx(15.6, abs=1e-9)

    @given(
        st.lists(
            st.tuples(
                st.floats(-10, 10, allow_nan=False),
                st.floats(-10, 10, allow_nan=False),
                st.floats(-10, 10, allow_nan=False),
            ),
            min_size=2,
            max_size=6,
        ),
        st.randoms(),
    )
    @settings(max_examples=30, deadline=None)
    def test_permutation_and_rotation_invariant(self, points, rng):
        shell = (s_shell(1.0),)
        coeff = np.ones(len(points))

        def build(pts):
            centers = tuple(AtomicCenter(np.array(p), "C", shell) for p in pts)
            return Molecule(centers, (MolecularOrbital(coeff, 0.5, "M"),))

        base = max_internuclear_distance(build(points))
        shuffled = list(points)
        rng.shuffle(shuffled)
        assert max_internuclear_distance(build(shuffled)) == pytest.approx(
            base, rel=1e-12, abs=1e-12
        )
        theta = rng.uniform(0, 2 * math.pi)
        rot = np.array(
            [
                [math.cos(theta), -math.sin(theta), 0.0],
                [math.sin(theta), math.cos(theta), 0.0],
                [0.0, 0.0, 1.0],
            ]
        )
        rotated = [tuple(rot @ np.array(p)) for p in points]
        assert max_internuclear_distance(build(rotated)) == pytest.approx(
            base, rel=1e-12, abs=1e-12
        )


class TestEvaluateOrbital:
    def test_unit_s_gaussian_at_origin(self):
        shell = ContractedShell((0, 0, 0), (GaussianPrimitive(1.0, 1.0),), 1.0)
        # strip the built-in primitive norm so the bare Gaussian value is 1
        center = AtomicCenter(np.zeros(3), "H", (shell,))
        mol = Molecule(
            (center,),
            (MolecularOrbital(np.array([1.0 / primitive_norm((0, 0, 0), 1.0)]), 0.5, "S"),),
        )
        assert evaluate_orbital(mol, 0, np.zeros(3)) == pytest.approx(1.0)
        assert evaluate_orbital(mol, 0, np.array([1.0, 0, 0])) == pytest.approx(
            math.exp(-1.0)
        )

    def test_px_value(self):
        shell = ContractedShell((1, 0, 0), (GaussianPrimitive(1.0, 1.0),), 1.0)
        center = AtomicCenter(np.zeros(3), "H", (shell,))
        mol = Molecule(
            (center,),
            (MolecularOrbital(np.array([1.0 / primitive_norm((1, 0, 0), 1.0)]), 0.5, "P"),),
        )
        # 0.5 * exp(-0.25)
        assert evaluate_orbital(mol, 0, np.array([0.5, 0, 0])) == pytest.approx(
            0.5 * math.exp(-0.25)
        )

    def test_invalid_index_raises(self):
        with pytest.raises(IndexError):
            evaluate_orbital(single_atom(), 3, np.zeros(3))

    def test_translation_covariance(self):
        mol = mixed_toy()
        shift = np.array([0.7, -1.3, 2.1])
        shifted = Molecule(
            tuple(
                AtomicCenter(c.position + shift, c.element, c.shells)
                for c in mol.centers
            ),
            mol.orbitals,
        )
        rng = np.random.default_rng(7)
        pts = rng.normal(scale=2.0, size=(40, 3))
        base = evaluate_orbital(mol, 0, pts)
        moved = evaluate_orbital(shifted, 0, pts + shift)
        np.testing.assert_allclose(moved, base, rtol=1e-12, atol=1e-15)


class TestNormalization:
    @pytest.mark.parametrize(
        "powers,alphas",
        [
            ((0, 0, 0), [1.0]),
            ((1, 0, 0), [0.5]),
            ((0, 2, 0), [2.0]),
            ((0, 0, 0), [13.0, 1.8, 0.4]),
            ((0, 1, 1), [0.9, 0.2]),
        ],
    )
    def test_normalized_shell_has_unit_quadrature_norm(self, powers, alphas):
        prims = tuple(GaussianPrimitive(a, 1.0 / (k + 1)) for k, a in enumerate(alphas))
        shell = ContractedShell(powers, prims).normalized()

        # independent oracle: numerical quadrature of the squared contracted
        # shell, expanded over primitive pairs so each factor is 1-D
        total = 0.0
        for wk, ak in zip(shell.weights(), shell.exponents()):
            for wm, am in zip(shell.weights(), shell.exponents()):
                g = ak + am
                prod = wk * wm
                for p in powers:
                    prod *= quad(
                        lambda u, p=p, g=g: u ** (2 * p) * math.exp(-g * u * u),
                        -12.0,
                        12.0,
                        epsabs=1e-14,
                    )[0]
                total += prod
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_primitive_norm_formula(self):
        # (2a/pi)^(3/4) for an s Gaussian
        assert primitive_norm((0, 0, 0), 1.0) == pytest.approx(
            (2.0 / math.pi) ** 0.75
        )

    def test_shell_overlap_against_quadrature(self):
        a = ContractedShell((1, 0, 0), (GaussianPrimitive(0.7, 1.0),)).normalized()
        b = ContractedShell((0, 0, 0), (GaussianPrimitive(0.4, 1.0),)).normalized()
        ra = np.array([0.3, -0.2, 0.1])
        rb = np.array([-0.5, 0.4, 0.6])
        analytic = shell_overlap(a, ra, b, rb)

        grid = np.linspace(-9, 9, 241)
        pts = np.stack(np.meshgrid(grid, grid, grid, indexing="ij"), axis=-1)
        da = pts - ra
        db = pts - rb
        fa = da[..., 0] * np.exp(-0.7 * (da**2).sum(-1)) * a.weights()[0]
        fb = np.exp(-0.4 * (db**2).sum(-1)) * b.weights()[0]
        step = grid[1] - grid[0]
        numeric = (fa * fb).sum() * step**3
        assert analytic == pytest.approx(numeric, rel=1e-6)

    def test_orbital_norm_unity_for_fixtures(self):
        from molhhg.fixtures import load_fixture

        for name in ("ring", "bowl", "fullerene"):
            mol = load_fixture(name)
            for k in range(len(mol.orbitals)):
                assert orbital_norm(mol, k) == pytest.approx(1.0, abs=1e-9)

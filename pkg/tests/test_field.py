import math

import numpy as np
import pytest
from scipy.integrate import quad

from molhhg import constants
from molhhg.field import (
    LaserField,
    diagnostics,
    electric_field,
    integral_A,
    integral_A2,
    make_field,
    polarization_vector,
    vector_potential,
)
from conftest import h2_like, single_atom


@pytest.fixture
def field():
    return make_field(intensity_w_cm2=5e14, wavelength_nm=800, polarization="x")


class TestConstruction:
    def test_intensity_conversion(self, field):
        assert field.amplitude == pytest.approx(0.11936, abs=2e-5)

    def test_wavelength_conversion(self, field):
        assert field.omega == pytest.approx(45.5633 / 800.0)

    def test_exclusive_parameters(self):
        with pytest.raises(ValueError):
            make_field(intensity_w_cm2=1e14, e0_au=0.1, wavelength_nm=800)
        with pytest.raises(ValueError):
            make_field(e0_au=0.1)

    def test_polarization_vector(self):
        np.testing.assert_array_equal(polarization_vector("z"), [0.0, 0.0, 1.0])
        with pytest.raises(ValueError, match="unit"):
            polarization_vector([1.0, 1.0, 0.0])
        v = polarization_vector([1 / math.sqrt(2), 1 / math.sqrt(2), 0.0])
        assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-15)


class TestElectricField:
    def test_zero_before_turn_on(self, field):
        np.testing.assert_array_equal(electric_field(field, -1.0), np.zeros(3))

    def test_sine_peak(self, field):
        t = math.pi / (2 * field.omega)
        np.testing.assert_allclose(
            electric_field(field, t), [field.amplitude, 0.0, 0.0], rtol=1e-12
        )

    def test_vector_potential_continuous_at_turn_on(self, field):
        np.testing.assert_array_equal(vector_potential(field, 0.0), np.zeros(3))
        np.testing.assert_allclose(
            vector_potential(field, field.period), np.zeros(3), atol=1e-15
        )

    def test_e_equals_minus_da_dt(self, field):
        dt = 1e-6
        for frac in (0.2, 0.7, 1.3):
            t = frac * field.period
            fd = -(vector_potential(field, t + dt) - vector_potential(field, t - dt)) / (
                2 * dt
            )
            np.testing.assert_allclose(fd, electric_field(field, t), atol=1e-8)

    def test_monochromatic_convention(self):
        f = make_field(
            e0_au=0.1, omega_au=0.06, polarization="x", convention="monochromatic"
        )
        t = -3.0  # field exists before t = 0
        assert electric_field(f, t)[0] == pytest.approx(0.1 * math.sin(0.06 * t))
        np.testing.assert_allclose(
            integral_A(f, 0.0, f.period), np.zeros(3), atol=1e-12
        )


class TestIntegrals:
    def test_empty_interval(self, field):
        np.testing.assert_array_equal(integral_A(field, 1.0, 1.0), np.zeros(3))
        assert integral_A2(field, 1.0, 1.0) == 0.0

    def test_full_period_dc_offset(self, field):
        t2 = field.period
        expected = -field.a0 * t2
        value = integral_A(field, 0.0, t2)
        assert value[0] == pytest.approx(expected, rel=1e-12)
        numeric = quad(lambda s: vector_potential(field, s)[0], 0.0, t2, limit=200)[0]
        assert value[0] == pytest.approx(numeric, rel=1e-10)

    def test_full_period_a2(self, field):
        t2 = field.period
        expected = field.a0**2 * t2 * 1.5
        assert integral_A2(field, 0.0, t2) == pytest.approx(expected, rel=1e-12)
        numeric = quad(lambda s: vector_potential(field, s)[0] ** 2, 0.0, t2, limit=200)[0]
        assert integral_A2(field, 0.0, t2) == pytest.approx(numeric, rel=1e-10)

    def test_piecewise_across_turn_on(self, field):
        value = integral_A(field, -2.0, field.period / 3)
        clamped = integral_A(field, 0.0, field.period / 3)
        np.testing.assert_allclose(value, clamped, rtol=1e-14)
        numeric = quad(
            lambda s: vector_potential(field, s)[0], -2.0, field.period / 3, limit=200
        )[0]
        assert value[0] == pytest.approx(numeric, rel=1e-9)

    def test_additivity(self, field):
        rng = np.random.default_rng(5)
        for _ in range(10):
            t1, tm, t2 = np.sort(rng.uniform(-1.0, 3 * field.period, size=3))
            left = integral_A(field, t1, tm) + integral_A(field, tm, t2)
            np.testing.assert_allclose(
                left, integral_A(field, t1, t2), rtol=1e-12, atol=1e-12
            )
            a2 = integral_A2(field, t1, tm) + integral_A2(field, tm, t2)
            assert a2 == pytest.approx(integral_A2(field, t1, t2), rel=1e-12, abs=1e-12)

    def test_rejects_reversed_bounds(self, field):
        with pytest.raises(ValueError):
            integral_A(field, 2.0, 1.0)


class TestDiagnostics:
    def test_published_field_parameters(self, field):
        d = diagnostics(field, single_atom(ip=0.5), 0)
        assert d.up == pytest.approx(1.098, abs=2e-3)
        assert d.alpha0 == pytest.approx(36.80, abs=0.01)

    def test_q_for_two_center_toy(self, field):
        d = diagnostics(field, h2_like(2.0), 0)
        assert d.q_parameter == pytest.approx(2.0 / (2 * d.alpha0), rel=1e-12)

    def test_cutoff_formula(self, field):
        mol = single_atom(ip=0.3192)
        d = diagnostics(field, mol, 0)
        assert d.cutoff_energy == pytest.approx(0.3192 + 3.17 * d.up, rel=1e-12)
        assert d.cutoff_order == pytest.approx(d.cutoff_energy / field.omega, rel=1e-12)

    def test_monotone_in_amplitude(self):
        mol = h2_like(2.0)
        previous = None
        for e0 in (0.05, 0.08, 0.12, 0.2):
            f = make_field(e0_au=e0, wavelength_nm=800, polarization="x")
            d = diagnostics(f, mol, 0)
            if previous is not None:
                assert d.up > previous.up
                assert d.alpha0 > previous.alpha0
                assert d.cutoff_energy > previous.cutoff_energy
                assert d.q_parameter < previous.q_parameter
            previous = d

    def test_invalid_orbital(self, field):
        with pytest.raises(IndexError):
            diagnostics(field, single_atom(), 2)


class TestTurnOnTime:
    def test_shifted_turn_on(self):
        f = make_field(e0_au=0.1, omega_au=0.06, polarization="x", turn_on_time=50.0)
        np.testing.assert_array_equal(electric_field(f, 49.9), np.zeros(3))
        np.testing.assert_array_equal(vector_potential(f, 50.0), np.zeros(3))
        t = 50.0 + math.pi / (2 * 0.06)
        assert electric_field(f, t)[0] == pytest.approx(0.1, rel=1e-12)
        # integrals clamp at the shifted turn-on
        base = make_field(e0_au=0.1, omega_au=0.06, polarization="x")
        shifted = integral_A(f, 40.0, 60.0)
        reference = integral_A(base, -10.0, 10.0)
        np.testing.assert_allclose(shifted, reference, rtol=1e-12)

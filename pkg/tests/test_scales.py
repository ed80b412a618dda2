"""Characteristic scales: closed-form identities and scaling laws."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qgallery import (
    Quantity,
    acceleration_for_formation_time,
    centrifugal_acceleration,
    characteristic_scales,
    get_particle,
)
from qgallery.constants import G_EARTH, HBAR
from qgallery.units import ACCELERATION, DimensionError, LENGTH, TIME, VELOCITY

accels = st.floats(min_value=1e-6, max_value=1e12)


class TestIdentities:
    def test_energy_time_uncertainty(self, neutron):
        s = characteristic_scales(neutron, G_EARTH)
        assert math.isclose(s.energy * s.time, HBAR, rel_tol=1e-14)

    def test_energy_equals_m_a_l(self, neutron):
        s = characteristic_scales(neutron, G_EARTH)
        assert math.isclose(s.energy, neutron.mass * G_EARTH * s.height, rel_tol=1e-14)

    def test_closed_form_energy(self, neutron):
        s = characteristic_scales(neutron, G_EARTH)
        e = (HBAR**2 * neutron.mass * G_EARTH**2 / 2.0) ** (1.0 / 3.0)
        assert math.isclose(s.energy, e, rel_tol=1e-14)

    @given(a=accels)
    def test_scaling_laws(self, neutron, a):
        base = characteristic_scales(neutron, a)
        doubled = characteristic_scales(neutron, 2.0 * a)
        assert math.isclose(doubled.energy / base.energy, 2.0 ** (2.0 / 3.0), rel_tol=1e-12)
        assert math.isclose(doubled.height / base.height, 2.0 ** (-1.0 / 3.0), rel_tol=1e-12)
        assert math.isclose(doubled.time / base.time, 2.0 ** (-2.0 / 3.0), rel_tol=1e-12)

    @given(a=accels)
    def test_formation_time_inversion_roundtrip(self, neutron, a):
        tau = characteristic_scales(neutron, a).time
        assert math.isclose(
            acceleration_for_formation_time(neutron, tau), a, rel_tol=1e-12
        )

    def test_heavier_particle_has_smaller_states(self, neutron):
        electron_scale = characteristic_scales(get_particle("Ps33"), G_EARTH)
        neutron_scale = characteristic_scales(neutron, G_EARTH)
        assert electron_scale.height > neutron_scale.height


class TestInputs:
    def test_quantity_acceleration_accepted(self, neutron):
        a = Quantity(G_EARTH, ACCELERATION)
        assert characteristic_scales(neutron, a).acceleration == G_EARTH

    def test_wrong_dimension_rejected(self, neutron):
        with pytest.raises(DimensionError):
            characteristic_scales(neutron, Quantity(1.0, TIME))

    def test_nonpositive_acceleration_rejected(self, neutron):
        with pytest.raises(ValueError, match="positive"):
            characteristic_scales(neutron, 0.0)

    def test_nonpositive_formation_time_rejected(self, neutron):
        with pytest.raises(ValueError, match="positive"):
            acceleration_for_formation_time(neutron, 0.0)


class TestCentrifugal:
    def test_closed_form(self):
        assert math.isclose(centrifugal_acceleration(120.0, 160.0), 90.0, rel_tol=1e-14)

    def test_quantity_inputs(self):
        a = centrifugal_acceleration(Quantity(10.0, VELOCITY), Quantity(2.0, LENGTH))
        assert math.isclose(a, 50.0, rel_tol=1e-14)

    def test_negative_velocity_rejected(self):
        with pytest.raises(ValueError):
            centrifugal_acceleration(-1.0, 1.0)

    def test_nonpositive_radius_rejected(self):
        with pytest.raises(ValueError):
            centrifugal_acceleration(1.0, 0.0)

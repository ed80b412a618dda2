"""Characteristic scales of a quantum state bound by a uniform acceleration
against a mirror.

For a particle of mass m pressed onto a reflecting surface by a uniform
acceleration a (gravitational, centrifugal, or reduced), the natural energy,
height, and time scales are

    E = (hbar^2 m a^2 / 2)^(1/3)
    l = E / (m a)
    tau = hbar / E

They obey E * tau = hbar and E = m * a * l identically, and scale with the
acceleration as a^(2/3), a^(-1/3), and a^(-2/3).
"""

from __future__ import annotations

from dataclasses import dataclass

from .constants import HBAR
from .particles import ParticleSpec
from .units import ACCELERATION, LENGTH, VELOCITY, magnitude_si


@dataclass(frozen=True)
class CharacteristicScales:
    energy: float  # J
    height: float  # m
    time: float  # s
    acceleration: float  # m/s^2


def characteristic_scales(particle: ParticleSpec, a) -> CharacteristicScales:
    """Characteristic (ground-state scale) energy, height, and time.

    Parameters
    ----------
    particle : ParticleSpec
    a : float or Quantity
        Effective acceleration pressing the particle to the mirror [m/s^2].
    """
    a = magnitude_si(a, ACCELERATION)
    if not a > 0:
        raise ValueError(f"acceleration must be positive, got {a}")
    m = particle.mass
    energy = (HBAR**2 * m * a**2 / 2.0) ** (1.0 / 3.0)
    return CharacteristicScales(
        energy=energy,
        height=energy / (m * a),
        time=HBAR / energy,
        acceleration=a,
    )


def acceleration_for_formation_time(particle: ParticleSpec, tau: float) -> float:
    """Invert tau = (2 hbar / (m a^2))^(1/3) for the acceleration."""
    if not tau > 0:
        raise ValueError("formation time must be positive")
    return (2.0 * HBAR / (particle.mass * tau**3)) ** 0.5


def centrifugal_acceleration(v, r) -> float:
    """Effective centrifugal acceleration v^2 / R for motion along a
    cylindrical mirror of radius R."""
    v = magnitude_si(v, VELOCITY)
    r = magnitude_si(r, LENGTH)
    if v < 0:
        raise ValueError("velocity must be non-negative")
    if not r > 0:
        raise ValueError(f"mirror radius must be positive, got {r}")
    return v * v / r

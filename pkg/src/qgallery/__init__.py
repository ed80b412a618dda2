"""qgallery: gravitational and whispering-gallery quantum states of neutrons
and light (anti)atoms — spectra, interference patterns, and experiment-design
and sensitivity tooling."""

__version__ = "0.1.0"

from .particles import ParticleSpec, get_particle, load_catalog
from .scales import (
    CharacteristicScales,
    acceleration_for_formation_time,
    centrifugal_acceleration,
    characteristic_scales,
)
from .units import DimensionError, Quantity

__all__ = [
    "CharacteristicScales",
    "DimensionError",
    "ParticleSpec",
    "Quantity",
    "acceleration_for_formation_time",
    "centrifugal_acceleration",
    "characteristic_scales",
    "get_particle",
    "load_catalog",
    "__version__",
]

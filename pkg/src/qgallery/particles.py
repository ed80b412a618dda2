"""Particle catalog.

The default catalog ships as a YAML data file and can be extended or
overridden by user configuration files with the same schema
(key = particle name; values = mass_kg, lifetime_s, annihilates).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources

import yaml


class CatalogError(ValueError):
    """Malformed particle catalog file."""


@dataclass(frozen=True)
class ParticleSpec:
    name: str
    mass: float  # kg
    lifetime: float  # s, math.inf for stable
    annihilates_on_contact: bool = False

    def __post_init__(self):
        if not self.mass > 0:
            raise CatalogError(f"{self.name}: mass must be positive")
        if not self.lifetime > 0:
            raise CatalogError(f"{self.name}: lifetime must be positive or inf")

    @property
    def decays(self) -> bool:
        return math.isfinite(self.lifetime)


def _parse_catalog(raw: dict, source: str) -> dict[str, ParticleSpec]:
    if not isinstance(raw, dict):
        raise CatalogError(f"{source}: top level must be a mapping")
    catalog = {}
    for name, fields in raw.items():
        if not isinstance(fields, dict):
            raise CatalogError(f"{source}: entry {name!r} must be a mapping")
        try:
            catalog[name] = ParticleSpec(
                name=name,
                mass=float(fields["mass_kg"]),
                lifetime=float(fields["lifetime_s"]),
                annihilates_on_contact=bool(fields.get("annihilates", False)),
            )
        except KeyError as exc:
            raise CatalogError(f"{source}: entry {name!r} missing key {exc}") from exc
    return catalog


def load_catalog(path=None) -> dict[str, ParticleSpec]:
    """Load the default catalog, optionally overlaying a user file."""
    text = resources.files("qgallery.data").joinpath("particles.yaml").read_text()
    catalog = _parse_catalog(yaml.safe_load(text), "builtin catalog")
    if path is not None:
        with open(path) as fh:
            catalog.update(_parse_catalog(yaml.safe_load(fh), str(path)))
    return catalog


_DEFAULT = None


def get_particle(name: str) -> ParticleSpec:
    """Look up a particle in the builtin catalog."""
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = load_catalog()
    try:
        return _DEFAULT[name]
    except KeyError:
        raise CatalogError(
            f"unknown particle {name!r}; known: {sorted(_DEFAULT)}"
        ) from None

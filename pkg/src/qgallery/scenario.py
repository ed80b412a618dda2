"""Scene files: YAML descriptions of one pipeline run each.

All physical keys carry their unit in the name (``mirror.length_m``,
``beam.velocities_m_s``); a scene's identity is the SHA-256 of its file
bytes, which stamps every CSV the run emits. List-valued keys
(``absorber.slit_height_m``, ``accelerations.extra_m_s2``, and — for
curved mirrors — ``beam.velocities_m_s``) expand into variants, one
output per combination.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Optional

import yaml

from .constants import G_EARTH, HBAR
from .particles import CatalogError, ParticleSpec, get_particle

_ORIENTATIONS = ("up", "down")
_MATERIALS = ("hard_wall", "silica_h", "silica_hbar")


class ScenarioError(ValueError):
    """Scene validation failure; message carries the field path."""


def _need(mapping: dict, key: str, path: str, kind=None):
    if key not in mapping:
        raise ScenarioError(f"{path}.{key}: missing required key")
    value = mapping[key]
    if kind is not None and not isinstance(value, kind):
        raise ScenarioError(
            f"{path}.{key}: expected {getattr(kind, '__name__', kind)}, "
            f"got {type(value).__name__}"
        )
    return value


def _number(mapping: dict, key: str, path: str, default=None, positive=False):
    if key not in mapping or mapping[key] is None:
        if default is not None or key not in mapping:
            return default
        return None
    value = mapping[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{path}.{key}: expected a number")
    if positive and not value > 0:
        raise ScenarioError(f"{path}.{key}: must be positive")
    return float(value)


def _number_list(mapping: dict, key: str, path: str, default=None, positive=False):
    if key not in mapping or mapping[key] is None:
        return default
    value = mapping[key]
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        value = [value]
    if not isinstance(value, list) or not value:
        raise ScenarioError(f"{path}.{key}: expected a number or non-empty list")
    out = []
    for i, item in enumerate(value):
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            raise ScenarioError(f"{path}.{key}[{i}]: expected a number")
        if positive and not item > 0:
            raise ScenarioError(f"{path}.{key}[{i}]: must be positive")
        out.append(float(item))
    return out


@dataclass(frozen=True)
class Variant:
    """One fully resolved pipeline configuration."""

    label: str
    acceleration: float  # m/s^2 in the bound-state problem
    a_extra: float  # m/s^2 included in `acceleration`
    dh: float  # m slit height
    velocities: tuple  # m/s slices sharing this acceleration
    n_states: int


@dataclass(frozen=True)
class Scenario:
    name: str
    particle: ParticleSpec
    particle_name: str
    mirror_length: float  # m
    mirror_radius: Optional[float]  # m; None = flat
    orientation: str  # up | down
    material: str  # hard_wall | silica_h | silica_hbar
    absorber_length: float  # m
    slit_heights: tuple  # m, variant axis
    gravity: bool
    effective_acceleration: Optional[float]  # m/s^2 override (reduced gravity)
    extra_accelerations: tuple  # m/s^2, variant axis
    velocities: tuple  # m/s
    detector_distance: float  # m
    fall_acceleration: float  # m/s^2
    position_resolution: float  # m
    time_resolution: float  # s
    n_states: Optional[int]
    output_pattern: bool
    output_surface_current: bool
    seed: int
    scene_hash: str
    source_path: str = ""
    raw: dict = field(default_factory=dict, repr=False)

    def base_acceleration(self, v: float) -> float:
        """Bound-state acceleration before any extra term."""
        if self.effective_acceleration is not None:
            return self.effective_acceleration
        if self.mirror_radius is not None:
            a = v * v / self.mirror_radius
            if self.gravity:
                a += G_EARTH if self.orientation == "up" else -G_EARTH
            if a <= 0:
                raise ScenarioError(
                    f"accelerations: centrifugal {v * v / self.mirror_radius:.3e} "
                    "minus gravity is not positive"
                )
            return a
        if not self.gravity:
            raise ScenarioError(
                "accelerations: flat mirror with gravity off and no "
                "effective_m_s2 leaves no confining acceleration"
            )
        return G_EARTH

    def _derived_n_states(self, a: float, dh: float) -> int:
        """Semiclassical count of states below the slit, plus two above."""
        e_c = (HBAR**2 * self.particle.mass * a * a / 2.0) ** (1.0 / 3.0)
        l_char = e_c / (self.particle.mass * a)
        xi_h = dh / l_char
        below = int((2.0 / 3.0) * xi_h**1.5 / math.pi)
        return min(max(below, 1) + 2, 220)

    def variants(self) -> list:
        """Expand the variant axes into resolved configurations."""
        out = []
        multi_dh = len(self.slit_heights) > 1
        multi_extra = len(self.extra_accelerations) > 1
        curved = self.mirror_radius is not None
        v_groups = (
            [(v,) for v in self.velocities] if curved else [tuple(self.velocities)]
        )
        multi_v = curved and len(self.velocities) > 1
        for dh in self.slit_heights:
            for a_extra in self.extra_accelerations:
                for vg in v_groups:
                    a = self.base_acceleration(vg[0]) + a_extra
                    if a <= 0:
                        raise ScenarioError(
                            f"accelerations: total acceleration {a:.3e} <= 0"
                        )
                    parts = [self.name]
                    if multi_dh:
                        parts.append(f"dh{dh * 1e6:g}um")
                    if multi_extra:
                        parts.append(f"aextra{a_extra:g}")
                    if multi_v:
                        parts.append(f"v{vg[0]:g}")
                    n = (
                        self.n_states
                        if self.n_states is not None
                        else self._derived_n_states(a, dh)
                    )
                    out.append(
                        Variant(
                            label="-".join(parts),
                            acceleration=a,
                            a_extra=a_extra,
                            dh=dh,
                            velocities=vg,
                            n_states=n,
                        )
                    )
        return out


def parse_scenario(text: str, source_path: str = "") -> Scenario:
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioError(f"YAML parse error: {exc}") from None
    if not isinstance(raw, dict):
        raise ScenarioError("scene file must be a YAML mapping")

    name = _need(raw, "name", "scene", str)
    particle_name = _need(raw, "particle", "scene", str)
    try:
        particle = get_particle(particle_name)
    except CatalogError:
        raise ScenarioError(f"particle: unknown particle {particle_name!r}") from None

    mirror = _need(raw, "mirror", "scene", dict)
    mirror_length = _number(mirror, "length_m", "mirror", positive=True)
    if mirror_length is None:
        raise ScenarioError("mirror.length_m: missing required key")
    mirror_radius = _number(mirror, "radius_m", "mirror", positive=True)
    orientation = mirror.get("orientation", "up")
    if orientation not in _ORIENTATIONS:
        raise ScenarioError(
            f"mirror.orientation: {orientation!r} not in {_ORIENTATIONS}"
        )
    material = mirror.get("material", "hard_wall")
    if material not in _MATERIALS:
        raise ScenarioError(f"mirror.material: {material!r} not in {_MATERIALS}")

    absorber = _need(raw, "absorber", "scene", dict)
    slit_heights = _number_list(absorber, "slit_height_m", "absorber", positive=True)
    if not slit_heights:
        raise ScenarioError("absorber.slit_height_m: missing required key")
    absorber_length = _number(
        absorber, "length_m", "absorber", default=mirror_length, positive=True
    )
    if absorber_length > mirror_length:
        raise ScenarioError(
            "absorber.length_m: absorber cannot be longer than the mirror"
        )

    acc = raw.get("accelerations", {}) or {}
    if not isinstance(acc, dict):
        raise ScenarioError("accelerations: expected a mapping")
    gravity = acc.get("gravity", True)
    if not isinstance(gravity, bool):
        raise ScenarioError("accelerations.gravity: expected true/false")
    effective = _number(acc, "effective_m_s2", "accelerations", positive=True)
    extra = _number_list(acc, "extra_m_s2", "accelerations", default=[0.0])

    beam = _need(raw, "beam", "scene", dict)
    velocities = _number_list(beam, "velocities_m_s", "beam", positive=True)
    if not velocities:
        raise ScenarioError("beam.velocities_m_s: missing required key")

    det = _need(raw, "detector", "scene", dict)
    distance = _number(det, "distance_m", "detector", positive=True)
    if distance is None:
        raise ScenarioError("detector.distance_m: missing required key")
    fall = _number(det, "fall_acceleration_m_s2", "detector", default=0.0)
    pos_res = _number(det, "position_resolution_m", "detector", default=0.0)
    time_res = _number(det, "time_resolution_s", "detector", default=0.0)
    if pos_res < 0 or time_res < 0:
        raise ScenarioError("detector resolutions must be >= 0")

    solver_cfg = raw.get("solver", {}) or {}
    if not isinstance(solver_cfg, dict):
        raise ScenarioError("solver: expected a mapping")
    n_states = solver_cfg.get("n_states")
    if n_states is not None:
        if isinstance(n_states, bool) or not isinstance(n_states, int) or n_states < 1:
            raise ScenarioError("solver.n_states: expected a positive integer")

    outputs = raw.get("outputs", {}) or {}
    if not isinstance(outputs, dict):
        raise ScenarioError("outputs: expected a mapping")
    out_pattern = outputs.get("pattern", True)
    out_current = outputs.get("surface_current", False)
    for key, value in (("pattern", out_pattern), ("surface_current", out_current)):
        if not isinstance(value, bool):
            raise ScenarioError(f"outputs.{key}: expected true/false")
    if not (out_pattern or out_current):
        raise ScenarioError("outputs: at least one of pattern/surface_current")

    seed = raw.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ScenarioError("seed: expected an integer")

    scene_hash = hashlib.sha256(text.encode()).hexdigest()
    return Scenario(
        name=name,
        particle=particle,
        particle_name=particle_name,
        mirror_length=mirror_length,
        mirror_radius=mirror_radius,
        orientation=orientation,
        material=material,
        absorber_length=absorber_length,
        slit_heights=tuple(slit_heights),
        gravity=gravity,
        effective_acceleration=effective,
        extra_accelerations=tuple(extra),
        velocities=tuple(velocities),
        detector_distance=distance,
        fall_acceleration=fall,
        position_resolution=pos_res,
        time_resolution=time_res,
        n_states=n_states,
        output_pattern=out_pattern,
        output_surface_current=out_current,
        seed=seed,
        scene_hash=scene_hash,
        source_path=source_path,
        raw=raw,
    )


def load_scenario(path) -> Scenario:
    with open(path) as fh:
        text = fh.read()
    return parse_scenario(text, source_path=str(path))


def builtin_scene_names() -> list:
    """Names of the shipped scene files (sorted)."""
    from importlib import resources

    names = []
    for entry in resources.files("qgallery").joinpath("scenes").iterdir():
        if entry.name.endswith(".yaml"):
            names.append(entry.name[:-5])
    return sorted(names)


def load_builtin_scene(name: str) -> Scenario:
    from importlib import resources

    ref = resources.files("qgallery").joinpath("scenes").joinpath(f"{name}.yaml")
    if not ref.is_file():
        raise ScenarioError(
            f"unknown scene {name!r}; shipped scenes: {builtin_scene_names()}"
        )
    return parse_scenario(ref.read_text(), source_path=f"builtin:{name}")

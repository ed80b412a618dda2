"""Scene files: parsing, validation, variant expansion, builtin catalog."""

import hashlib
import math
import textwrap

import pytest

from qgallery.constants import G_EARTH
from qgallery.scenario import (
    Scenario,
    ScenarioError,
    builtin_scene_names,
    load_builtin_scene,
    load_scenario,
    parse_scenario,
)

MINIMAL = textwrap.dedent(
    """
    name: demo
    particle: n
    mirror:
      length_m: 0.3
    absorber:
      slit_height_m: 40.0e-6
    beam:
      velocities_m_s: 50.0
    detector:
      distance_m: 7.0
    """
)


def scene(**overrides):
    import yaml

    raw = yaml.safe_load(MINIMAL)
    for dotted, value in overrides.items():
        parts = dotted.split(".")
        node = raw
        for p in parts[:-1]:
            node = node.setdefault(p, {})
        if value is None:
            node.pop(parts[-1], None)
        else:
            node[parts[-1]] = value
    return parse_scenario(yaml.safe_dump(raw))


class TestParsing:
    def test_minimal_scene_defaults(self):
        s = parse_scenario(MINIMAL)
        assert s.name == "demo"
        assert s.orientation == "up" and s.material == "hard_wall"
        assert s.gravity and s.extra_accelerations == (0.0,)
        assert s.absorber_length == s.mirror_length
        assert s.output_pattern and not s.output_surface_current
        assert s.fall_acceleration == 0.0

    def test_hash_is_sha256_of_text(self):
        s = parse_scenario(MINIMAL)
        assert s.scene_hash == hashlib.sha256(MINIMAL.encode()).hexdigest()

    def test_hash_changes_with_any_byte(self):
        assert (
            parse_scenario(MINIMAL).scene_hash
            != parse_scenario(MINIMAL + "\n").scene_hash
        )

    def test_error_messages_carry_field_path(self):
        with pytest.raises(ScenarioError, match="mirror.length_m"):
            scene(**{"mirror.length_m": None})
        with pytest.raises(ScenarioError, match="detector.distance_m"):
            scene(**{"detector.distance_m": None})
        with pytest.raises(ScenarioError, match="beam.velocities_m_s"):
            scene(**{"beam.velocities_m_s": None})

    def test_unknown_particle_rejected(self):
        with pytest.raises(ScenarioError, match="particle"):
            scene(particle="unobtainium")

    def test_orientation_and_material_whitelists(self):
        with pytest.raises(ScenarioError, match="orientation"):
            scene(**{"mirror.orientation": "sideways"})
        with pytest.raises(ScenarioError, match="material"):
            scene(**{"mirror.material": "teflon"})

    def test_absorber_longer_than_mirror_rejected(self):
        with pytest.raises(ScenarioError, match="absorber"):
            scene(**{"absorber.length_m": 1.0})

    def test_negative_numbers_rejected_where_positive_required(self):
        with pytest.raises(ScenarioError, match="positive"):
            scene(**{"mirror.length_m": -1.0})
        with pytest.raises(ScenarioError, match="positive"):
            scene(**{"beam.velocities_m_s": [50.0, -1.0]})

    def test_bool_is_not_a_number(self):
        with pytest.raises(ScenarioError, match="number"):
            scene(**{"detector.distance_m": True})

    def test_n_states_must_be_positive_int(self):
        with pytest.raises(ScenarioError, match="n_states"):
            scene(**{"solver.n_states": 2.5})
        with pytest.raises(ScenarioError, match="n_states"):
            scene(**{"solver.n_states": 0})

    def test_at_least_one_output(self):
        with pytest.raises(ScenarioError, match="outputs"):
            scene(
                **{"outputs.pattern": False, "outputs.surface_current": False}
            )

    def test_yaml_syntax_error_wrapped(self):
        with pytest.raises(ScenarioError, match="YAML"):
            parse_scenario("name: [unclosed")

    def test_non_mapping_rejected(self):
        with pytest.raises(ScenarioError, match="mapping"):
            parse_scenario("- a\n- b\n")


class TestBaseAcceleration:
    def test_flat_gravity(self):
        assert scene().base_acceleration(50.0) == G_EARTH

    def test_flat_without_gravity_rejected(self):
        s = scene(**{"accelerations.gravity": False})
        with pytest.raises(ScenarioError, match="confining"):
            s.base_acceleration(50.0)

    def test_effective_override(self):
        s = scene(
            **{
                "accelerations.gravity": False,
                "accelerations.effective_m_s2": 5.2e-3,
            }
        )
        assert s.base_acceleration(2.0) == 5.2e-3

    def test_curved_orientation_up_adds_gravity(self):
        s = scene(**{"mirror.radius_m": 160.0})
        assert math.isclose(
            s.base_acceleration(120.0), 120.0**2 / 160.0 + G_EARTH, rel_tol=1e-14
        )

    def test_curved_orientation_down_subtracts_gravity(self):
        s = scene(
            **{"mirror.radius_m": 160.0, "mirror.orientation": "down"}
        )
        assert math.isclose(
            s.base_acceleration(120.0), 120.0**2 / 160.0 - G_EARTH, rel_tol=1e-14
        )

    def test_centrifugal_weaker_than_gravity_rejected(self):
        s = scene(
            **{"mirror.radius_m": 160.0, "mirror.orientation": "down"}
        )
        with pytest.raises(ScenarioError, match="not positive"):
            s.base_acceleration(1.0)


class TestVariants:
    def test_flat_mirror_merges_velocities(self):
        s = scene(**{"beam.velocities_m_s": [49.0, 50.0, 51.0]})
        variants = s.variants()
        assert len(variants) == 1
        assert variants[0].velocities == (49.0, 50.0, 51.0)

    def test_curved_mirror_splits_velocities(self):
        s = scene(
            **{
                "mirror.radius_m": 1.0e4,
                "beam.velocities_m_s": [5.0e3, 2.0e5],
            }
        )
        variants = s.variants()
        assert len(variants) == 2
        assert variants[0].acceleration != variants[1].acceleration
        assert all("v" in v.label for v in variants)

    def test_slit_axis_expansion(self):
        s = scene(**{"absorber.slit_height_m": [30.0e-6, 60.0e-6]})
        variants = s.variants()
        assert [v.dh for v in variants] == [30.0e-6, 60.0e-6]
        assert variants[0].label.endswith("dh30um")

    def test_extra_acceleration_axis(self):
        s = scene(**{"accelerations.extra_m_s2": [0.0, 1.0e-5]})
        variants = s.variants()
        assert len(variants) == 2
        assert variants[1].acceleration == pytest.approx(G_EARTH + 1.0e-5)
        assert "aextra" in variants[1].label

    def test_derived_state_count_grows_with_slit(self):
        narrow = scene(**{"absorber.slit_height_m": 20.0e-6}).variants()[0]
        wide = scene(**{"absorber.slit_height_m": 100.0e-6}).variants()[0]
        assert wide.n_states > narrow.n_states
        assert narrow.n_states >= 3

    def test_explicit_state_count_wins(self):
        s = scene(**{"solver.n_states": 12})
        assert s.variants()[0].n_states == 12


class TestBuiltinScenes:
    def test_catalog_names(self):
        assert builtin_scene_names() == [
            "h-gqs",
            "h-wgs",
            "hbar-wgs",
            "mu-wgs",
            "ps-wgs",
            "ucn-reduced",
            "vcn-gqs",
        ]

    def test_all_builtin_scenes_parse_and_expand(self):
        for name in builtin_scene_names():
            s = load_builtin_scene(name)
            variants = s.variants()
            assert variants, name
            for v in variants:
                assert v.acceleration > 0
                assert v.n_states >= 1

    def test_unknown_scene_lists_catalog(self):
        with pytest.raises(ScenarioError, match="vcn-gqs"):
            load_builtin_scene("missing")

    def test_load_from_path(self, tmp_path):
        path = tmp_path / "demo.yaml"
        path.write_text(MINIMAL)
        s = load_scenario(path)
        assert s.source_path == str(path)
        assert s.scene_hash == parse_scenario(MINIMAL).scene_hash

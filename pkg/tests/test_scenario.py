import pytest

from dynakernel import ConfigError, Point, parse_scenario
from dynakernel.scenario import load_scenario_file


def test_minimal_scenario_defaults():
    cfg = parse_scenario("{}")
    assert cfg.seed == 0
    assert cfg.tick_rate == 10.0
    assert (cfg.width, cfg.height) == (800.0, 600.0)
    assert cfg.default_model == "default"
    assert cfg.models == {} and cfg.nodes == [] and cfg.run_limit is None


def test_full_scenario():
    cfg = parse_scenario("""
    {
      "seed": 7,
      "tick_rate": 0,
      "width": 400,
      "height": 300,
      "models": {
        "default": {"behavior": "red-green-v1"},
        "walker": {"behavior": "red-green-v4",
                   "behavior_params": {"step": 2.5},
                   "comm_range": 80,
                   "wireless": true,
                   "properties": {"color": "gray", "home": {"x": 1, "y": 2}}}
      },
      "topology_listeners": ["red-green-centralized"],
      "nodes": [{"x": 100, "y": 100}, {"x": 160, "y": 100, "model": "walker"}],
      "run_limit": 200
    }
    """)
    assert cfg.seed == 7 and cfg.tick_rate == 0.0
    assert cfg.models["walker"].behavior == "red-green-v4"
    assert cfg.models["walker"].behavior_params == {"step": 2.5}
    assert cfg.models["walker"].comm_range == 80.0
    assert cfg.models["walker"].properties == {"color": "gray", "home": Point(1, 2)}
    assert cfg.topology_listeners == ["red-green-centralized"]
    assert cfg.nodes[1].model == "walker"
    assert cfg.run_limit == 200


def test_invalid_json_names_location():
    with pytest.raises(ConfigError) as e:
        parse_scenario("{nope", source="bad.json")
    assert "bad.json" in str(e.value)


def test_unknown_behavior_names_binding():
    with pytest.raises(ConfigError) as e:
        parse_scenario('{"models": {"m": {"behavior": "red-green-v9"}}}')
    assert "models.m.behavior" in str(e.value)
    assert "red-green-v9" in str(e.value)


def test_unknown_topology_listener():
    with pytest.raises(ConfigError) as e:
        parse_scenario('{"topology_listeners": ["nope"]}')
    assert "topology_listeners[0]" in str(e.value)


def test_unknown_fields_rejected():
    with pytest.raises(ConfigError):
        parse_scenario('{"sneed": 1}')
    with pytest.raises(ConfigError):
        parse_scenario('{"models": {"m": {"behaviour": "red-green-v1"}}}')
    with pytest.raises(ConfigError):
        parse_scenario('{"nodes": [{"x": 1, "y": 2, "z": 3}]}')


def test_type_errors_carry_location():
    cases = [
        ('{"seed": "7"}', "seed"),
        ('{"seed": true}', "seed"),
        ('{"tick_rate": -1}', "tick_rate"),
        ('{"width": 0}', "width"),
        ('{"run_limit": -5}', "run_limit"),
        ('{"models": {"m": {"comm_range": -1}}}', "models.m.comm_range"),
        ('{"models": {"m": {"wireless": 1}}}', "models.m.wireless"),
        ('{"nodes": [{"x": "a", "y": 2}]}', "nodes[0].x"),
    ]
    for text, location in cases:
        with pytest.raises(ConfigError) as e:
            parse_scenario(text)
        assert location in str(e.value), text


def test_node_referencing_undeclared_model():
    with pytest.raises(ConfigError) as e:
        parse_scenario('{"nodes": [{"x": 1, "y": 2, "model": "ghost"}]}')
    assert "ghost" in str(e.value)


def test_default_model_must_be_declared():
    with pytest.raises(ConfigError):
        parse_scenario('{"default_model": "ghost"}')
    cfg = parse_scenario(
        '{"default_model": "m", "models": {"m": {"behavior": "red-green-v2"}}}')
    assert cfg.default_model == "m"


def test_bad_property_value_location():
    with pytest.raises(ConfigError) as e:
        parse_scenario('{"models": {"m": {"properties": {"p": {"x": 1}}}}}')
    assert "models.m.properties.p" in str(e.value)


def test_load_from_file(tmp_path):
    path = tmp_path / "scenario.json"
    path.write_text('{"seed": 3}')
    assert load_scenario_file(path).seed == 3
    with pytest.raises(ConfigError) as e:
        load_scenario_file(tmp_path / "missing.json")
    assert "missing.json" in str(e.value)

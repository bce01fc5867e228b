import math

import pytest

from largespin.errors import ConfigParseError, ConfigValidationError
from largespin.pipeline import (
    CSV_HEADER,
    RunConfig,
    SweepGrid,
    config_from_mapping,
    evaluate_point,
    first_derivative_step,
    read_config,
    read_csv,
    rows_to_csv,
    run_sweep,
    write_csv,
)
from largespin.cef_full import FieldConfig

BASE = {"ion": "Ho3+", "a": 1.0, "b_ratio": math.pi**2 / 8}


def test_header_exact():
    assert CSV_HEADER == ["grid_var", "grid_value", "model", "E0", "E1", "E2", "E3",
                          "moment_plane", "moment_z", "chi_plane", "chi_axis"]


def test_minimal_config_defaults():
    cfg = config_from_mapping(dict(BASE))
    assert cfg.ion.label == "Ho3+"
    assert cfg.b == pytest.approx(math.pi**2 / 8 / 64)
    assert cfg.models == ("full", "rotor", "tb")
    assert cfg.w is None and cfg.sweep is None


def test_custom_spin_and_g_override():
    cfg = config_from_mapping({"two_J": 5, "g": 2.0, "a": 2.0, "b": 0.1})
    assert cfg.ion.two_J == 5 and cfg.ion.g == 2.0
    cfg = config_from_mapping({**BASE, "g": 1.1})
    assert cfg.ion.g == 1.1


@pytest.mark.parametrize(
    "patch,key",
    [
        ({"colour": 1}, "colour"),
        ({"a": -1.0}, "a"),
        ({"a": "one"}, "a"),
        ({"ion": "Er3+"}, "ion"),
        ({"two_J": 16}, "two_J"),
        ({"b": 0.1}, "b_ratio"),
        ({"field": {"h": -1.0}}, "field.h"),
        ({"field": {"x": 1.0}}, "field.x"),
        ({"models": ["full", "magic"]}, "models"),
        ({"w": 0.0}, "w"),
        ({"m_max": 4}, "m_max"),
        ({"sweep": {"variable": "T", "start": 0, "stop": 1, "steps": 3}}, "sweep.variable"),
        ({"sweep": {"variable": "h", "start": 0, "stop": 1, "steps": 1}}, "sweep.steps"),
        ({"sweep": {"variable": "h", "start": 0, "stop": 1}}, "sweep.steps"),
        ({"sweep": {"variable": "h", "start": -1, "stop": 1, "steps": 3}}, "sweep.start"),
    ],
)
def test_validation_errors_name_the_key(patch, key):
    with pytest.raises(ConfigValidationError) as exc:
        config_from_mapping({**BASE, **patch})
    assert exc.value.key == key


def test_missing_required():
    with pytest.raises(ConfigValidationError):
        config_from_mapping({"a": 1.0, "b": 0.1})
    with pytest.raises(ConfigValidationError):
        config_from_mapping({"ion": "Ho3+", "b": 0.1})


def test_w_extract_keyword():
    assert config_from_mapping({**BASE, "w": "extract"}).w is None
    assert config_from_mapping({**BASE, "w": 1e-3}).w == 1e-3


def test_read_config_yaml(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text(
        "ion: Dy3+\na: 1.0\nb_ratio: 1.2337\nfield:\n  h: 0.001\n  phi_h: 0.3\n"
        "sweep:\n  variable: hz\n  start: 0.0\n  stop: 0.1\n  steps: 3\n  models: [rotor]\n"
    )
    cfg = read_config(path)
    assert cfg.ion.label == "Dy3+"
    assert cfg.field == FieldConfig(0.001, 0.3, 0.0)
    assert cfg.sweep.models == ("rotor",)


def test_parse_error_reports_line(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("ion: Ho3+\na: 1.0\nfield: {h: [1, 2\n")
    with pytest.raises(ConfigParseError) as exc:
        read_config(path)
    assert exc.value.line is not None and exc.value.line >= 3


def test_parse_error_top_level_not_mapping(tmp_path):
    path = tmp_path / "list.yaml"
    path.write_text("- 1\n- 2\n")
    with pytest.raises(ConfigParseError):
        read_config(path)


def test_first_derivative_step():
    assert first_derivative_step(1e-4, 1.0) == pytest.approx(1e-7, rel=1e-15)
    assert first_derivative_step(1.0, 1.0) == 1e-6


def test_grid_values():
    g = SweepGrid("h", 0.0, 1.0, 5)
    assert list(g.values()) == [0.0, 0.25, 0.5, 0.75, 1.0]


def test_sweep_rows_and_csv_roundtrip(tmp_path):
    cfg = config_from_mapping({**BASE, "sweep": {"variable": "hz", "start": 0.0, "stop": 0.2, "steps": 3}})
    rows = run_sweep(cfg)
    assert [(r.grid_value, r.model) for r in rows[:3]] == [(0.0, "full"), (0.0, "rotor"), (0.0, "tb")]
    assert len(rows) == 9 and all(r.error is None for r in rows)
    path = tmp_path / "out.csv"
    write_csv(rows, path)
    text = path.read_text()
    assert text.splitlines()[0] == ",".join(CSV_HEADER)
    assert text == rows_to_csv(run_sweep(cfg))
    back = read_csv(path)
    for r, rec in zip(rows, back):
        assert rec["E0"] == r.energies[0]
        assert rec["chi_axis"] == r.chi_axis


def test_integer_in_plane_response_at_zero_field():
    cfg = config_from_mapping({**BASE, "models": ["rotor"]})
    row = evaluate_point(cfg, "rotor", cfg.params, FieldConfig())
    w = row.energies[3] - row.energies[0]
    assert row.error is None
    assert abs(row.moment_plane) < 1e-6
    # chi_plane ~ J^2/(2w); quadruplet width is 4w
    assert row.chi_plane == pytest.approx(64 / (2 * w / 4), rel=0.05)


def test_row_error_leaves_empty_fields():
    # a tiny truncation that cannot hold the quadruplet: the tb model needs an extracted w
    cfg = RunConfig(config_from_mapping(BASE).ion, 1.0, 50.0, models=("tb",), m_max=8)
    row = evaluate_point(cfg, "tb", cfg.params, FieldConfig())
    assert row.error is not None
    cells = row.cells()
    assert cells[3:] == [""] * 8


def test_sweep_continues_after_bad_point():
    cfg = config_from_mapping({**BASE, "w": 1e-3, "models": ["tb"],
                               "sweep": {"variable": "b", "start": 0.0, "stop": 0.1, "steps": 2}})
    rows = run_sweep(cfg)
    assert len(rows) == 2
    assert all(r.error is None for r in rows)

"""Config validation, canonical serialization, and the CSV-emitting CLI."""

import csv
import json

import pytest

from pfio.cli import main
from pfio.config import (ConfigError, RunConfig, build_grid, build_phase,
                         build_symbol, canonical_json, config_hash,
                         parse_config, validate_config)


def test_empty_config_gives_defaults():
    assert validate_config({}) == RunConfig()


def test_scalar_entries_accepted_for_tuples():
    cfg = validate_config({"grid": {"samples": 64}})
    assert cfg.grid.samples == (64,)


def test_unknown_key_reported_with_path():
    with pytest.raises(ConfigError) as err:
        validate_config({"grid": {"smaples": 64}})
    assert "grid.smaples: unknown key" in err.value.violations


def test_type_error_reported_with_index():
    with pytest.raises(ConfigError) as err:
        validate_config({"grid": {"samples": ["many"]}})
    assert any(v.startswith("grid.samples[0]: expected an integer")
               for v in err.value.violations)


def test_bool_is_not_an_integer():
    with pytest.raises(ConfigError):
        validate_config({"decomposition": {"t_max": True}})


def test_multiple_errors_collected():
    with pytest.raises(ConfigError) as err:
        validate_config({"phase": {"kind": "quadratic", "sign": 0}})
    msgs = err.value.violations
    assert any("phase.kind" in m for m in msgs)
    assert any("phase.sign" in m for m in msgs)


def test_cross_check_messages():
    cases = [
        ({"grid": {"samples": [63]}}, "grid.samples: counts must be even"),
        ({"grid": {"half_width": [0.0]}}, "grid.half_width: must be positive"),
        ({"phase": {"kind": "translation"}}, "phase.shift"),
        ({"symbol": {"rho": 1.0}}, "symbol.rho"),
        ({"symbol": {"kind": "product", "rho": 0.5}},
         "only the separable kind"),
        ({"symbol": {"order": 0.5}}, "symbol.order"),
        ({"experiment": {"fractional": {"order": -2.0}}},
         "experiment.fractional.order"),
        ({"experiment": {"roi": {"orientation": "sideways"}}},
         "experiment.roi.orientation"),
        ({"experiment": {"omega_sharp": {"grid_samples": 10, "aperture": 1.5}}},
         "experiment.omega_sharp.aperture"),
    ]
    for data, needle in cases:
        with pytest.raises(ConfigError) as err:
            validate_config(data)
        assert any(needle in m for m in err.value.violations), (data, needle)


def test_canonical_json_ignores_input_key_order():
    a = validate_config({"grid": {"samples": 64, "half_width": 1.0},
                         "phase": {"kind": "linear"}})
    b = validate_config({"phase": {"kind": "linear"},
                         "grid": {"half_width": 1.0, "samples": 64}})
    assert canonical_json(a) == canonical_json(b)
    assert config_hash(a) == config_hash(b)


def test_config_hash_changes_with_any_value():
    base = validate_config({})
    other = validate_config({"decomposition": {"seed": 8}})
    assert config_hash(base) != config_hash(other)


def test_canonical_json_round_trips_through_validator():
    cfg = validate_config({"space": {"dims": [1, 2]},
                           "phase": {"kind": "translation",
                                     "shift": [0.3, -0.1, 0.2]}})
    again = validate_config(json.loads(canonical_json(cfg)))
    assert again == cfg


def test_parse_config_rejects_malformed_json(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigError) as err:
        parse_config(str(p))
    assert "not valid JSON" in err.value.violations[0]


def test_build_grid_broadcasts_singletons():
    cfg = validate_config({"space": {"dims": [2]},
                           "grid": {"samples": [64], "half_width": [1.0]}})
    grid = build_grid(cfg)
    assert grid.samples == (64, 64)
    assert grid.half_width == (1.0, 1.0)


def test_build_phase_factor_count_follows_blocks():
    cfg = validate_config({"space": {"dims": [1, 2]},
                           "phase": {"kind": "half_wave"}})
    phase = build_phase(cfg)
    assert len(phase.factors) == 2


def test_build_symbol_product_orders():
    cfg = validate_config({"space": {"dims": [1, 2]},
                           "symbol": {"kind": "product", "orders": [-0.25, -0.5]}})
    sym = build_symbol(cfg)
    assert sym.order == pytest.approx(-0.75)


# ---------------------------------------------------------------------------
# CLI surface

SMALL = {
    "grid": {"samples": [96], "half_width": [1.5]},
    "experiment": {"roi": {"raster_samples": 48}},
}


def _write(tmp_path, data, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data), encoding="utf-8")
    return str(p)


def test_cli_missing_config_file_is_usage_error(tmp_path, capsys):
    rc = main(["roi", "--config", str(tmp_path / "absent.json"),
               "--out", str(tmp_path / "out")])
    assert rc == 2
    assert "config error" in capsys.readouterr().err


def test_cli_invalid_config_is_usage_error(tmp_path, capsys):
    path = _write(tmp_path, {"grid": {"samples": [63]}})
    rc = main(["roi", "--config", path, "--out", str(tmp_path / "out")])
    assert rc == 2
    err = capsys.readouterr().err
    assert "grid.samples" in err


def test_cli_unknown_subcommand_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate", "--out", str(tmp_path)])
    assert exc.value.code == 2


def test_cli_roi_writes_csv_and_manifest(tmp_path):
    path = _write(tmp_path, SMALL)
    out = tmp_path / "out"
    rc = main(["roi", "--config", path, "--out", str(out)])
    assert rc == 0

    text = (out / "roi.csv").read_text(encoding="utf-8")
    header = text.splitlines()[0]
    assert header == "experiment,params,sweep_var,sweep_value,measured,fitted_slope,residual"

    manifest = json.loads((out / "roi.manifest.json").read_text(encoding="utf-8"))
    cfg = parse_config(path)
    assert manifest["config_hash"] == config_hash(cfg)
    assert manifest["passed"] is True
    assert manifest["outputs"] == ["roi.csv"]
    assert manifest["wall_time_s"] >= 0
    assert set(manifest["versions"]) == {"python", "numpy", "pfio"}
    assert manifest["seed"] == cfg.decomposition.seed


def test_cli_rerun_is_bit_identical(tmp_path):
    path = _write(tmp_path, SMALL)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["roi", "--config", path, "--out", str(out1)]) == 0
    assert main(["roi", "--config", path, "--out", str(out2)]) == 0
    assert (out1 / "roi.csv").read_bytes() == (out2 / "roi.csv").read_bytes()


def test_params_column_round_trips_through_validator(tmp_path):
    path = _write(tmp_path, SMALL)
    out = tmp_path / "out"
    assert main(["roi", "--config", path, "--out", str(out)]) == 0
    with open(out / "roi.csv", newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert rows
    cfg = parse_config(path)
    for row in rows:
        assert validate_config(json.loads(row["params"])) == cfg


def test_cli_failed_window_exits_one(tmp_path):
    # a 32-point grid resolves no level in the default j range, so the
    # mass-spread window cannot be evaluated and the run must report failure
    path = _write(tmp_path, {"grid": {"samples": [32], "half_width": [1.5]}})
    out = tmp_path / "out"
    rc = main(["kernel-decay", "--config", path, "--out", str(out)])
    assert rc == 1
    manifest = json.loads((out / "kernel-decay.manifest.json").read_text())
    assert manifest["passed"] is False
    text = (out / "kernel_decay.csv").read_text(encoding="utf-8")
    assert "skipped: level exceeds grid band" in text


def test_cli_parallel_jobs_match_serial(tmp_path):
    data = {"grid": {"samples": [64], "half_width": [1.5]},
            "experiment": {"j_values": [2, 3]}}
    path = _write(tmp_path, data)
    out1, out2 = tmp_path / "serial", tmp_path / "par"
    rc1 = main(["kernel-decay", "--config", path, "--out", str(out1)])
    rc2 = main(["kernel-decay", "--config", path, "--jobs", "2",
                "--out", str(out2)])
    assert rc1 == rc2
    assert (out1 / "kernel_decay.csv").read_bytes() == \
        (out2 / "kernel_decay.csv").read_bytes()

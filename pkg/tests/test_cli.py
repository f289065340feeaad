import csv
import json

import pytest

from clustercov.cli import main, run_sweep
from clustercov.config import (
    ConfigError,
    PRESETS,
    build_sweep,
    load_config,
    parse_config_text,
)

TINY_CONFIG = """
# three-point smoke sweep
axis = gamma_th_db
axis_grid = -10, -5, 0
methods = gc, mc
trials = 1500
seed = 5
size_model = fixed
ordering = unordered
cluster_size = 6
"""


@pytest.fixture
def tiny_config(tmp_path):
    path = tmp_path / "tiny.cfg"
    path.write_text(TINY_CONFIG)
    return path


class TestConfigParsing:
    def test_flat_document(self):
        parsed = parse_config_text("a = 1\nb = 2.5  # trailing comment\nc = x, 2\n\n")
        assert parsed == {"a": 1, "b": 2.5, "c": ("x", 2)}

    def test_malformed_line(self):
        with pytest.raises(ConfigError, match="line 1"):
            parse_config_text("not an assignment")

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="unknown configuration key"):
            build_sweep({"no_such_key": 1})

    def test_unknown_preset(self):
        with pytest.raises(ConfigError, match="preset"):
            build_sweep({}, preset="fig99")

    def test_path_loss_gate(self):
        with pytest.raises(ConfigError, match="alpha"):
            build_sweep({"path_loss_exponent": 2.0})

    def test_bad_axis(self):
        with pytest.raises(ConfigError, match="axis"):
            build_sweep({"axis": "bananas"})

    def test_unsorted_grid(self):
        with pytest.raises(ConfigError, match="sorted"):
            build_sweep({"axis_grid": (3.0, 1.0)})

    def test_empty_grid(self):
        with pytest.raises(ConfigError, match="at least one point"):
            build_sweep({"axis_grid": ()})

    def test_bad_method(self):
        with pytest.raises(ConfigError, match="methods"):
            build_sweep({"methods": ("gc", "magic")})

    def test_fixed_size_needs_integer(self):
        with pytest.raises(ConfigError, match="cluster_size"):
            build_sweep({"size_model": "fixed", "cluster_size": 5.5})

    @pytest.mark.parametrize("preset", sorted(PRESETS))
    def test_presets_resolve(self, preset):
        settings, spec = build_sweep({}, preset=preset)
        assert spec.preset == preset
        assert len(spec.grid) >= 3
        assert spec.scenarios


class TestSweep:
    def test_writes_csv_and_metadata(self, tiny_config, tmp_path):
        out = tmp_path / "sweep.csv"
        _, spec = load_config(tiny_config)
        summary = run_sweep(spec, str(out))
        with open(out, newline="") as fh:
            rows = list(csv.reader(fh))
        header, data = rows[0], rows[1:]
        assert header[:5] == ["axis_value", "scenario", "method", "bound_side", "coverage"]
        # grid x methods x scenarios (one scenario here)
        assert len(data) == 3 * 2
        meta = json.loads((tmp_path / "sweep.csv.meta.json").read_text())
        assert meta["settings"]["seed"] == 5
        assert "mc-vs-gc" in summary["coverage_gaps"]

    def test_dbm_metadata_roundtrip(self, tiny_config, tmp_path):
        out = tmp_path / "sweep.csv"
        _, spec = load_config(tiny_config)
        run_sweep(spec, str(out))
        meta = json.loads((tmp_path / "sweep.csv.meta.json").read_text())
        dbm = meta["settings"]["tx_power_dbm"]
        mw = meta["resolved"]["tx_power_mw"]
        assert abs(10.0 ** (dbm / 10.0) - mw) <= 1e-9 * mw

    def test_byte_identical_reruns(self, tiny_config, tmp_path):
        _, spec = load_config(tiny_config)
        first = tmp_path / "a.csv"
        second = tmp_path / "b.csv"
        run_sweep(spec, str(first))
        run_sweep(spec, str(second))
        assert first.read_bytes() == second.read_bytes()

    def test_mc_rows_carry_stderr(self, tiny_config, tmp_path):
        out = tmp_path / "sweep.csv"
        _, spec = load_config(tiny_config)
        run_sweep(spec, str(out))
        with open(out, newline="") as fh:
            rows = list(csv.DictReader(fh))
        for row in rows:
            if row["method"] == "mc":
                assert float(row["stderr"]) >= 0.0
                assert row["bound_side"] == "estimate"
            else:
                assert row["stderr"] == ""
                assert row["bound_side"] == "upper-bound"


class TestMainEntry:
    def test_sweep_command(self, tiny_config, tmp_path, capsys):
        out = tmp_path / "cli.csv"
        code = main(["sweep", "--config", str(tiny_config), "--out", str(out),
                     "--trials", "500"])
        assert code == 0
        assert out.exists()
        assert "max |mc-vs-gc| coverage gap" in capsys.readouterr().out

    def test_validate_command(self, tiny_config, capsys):
        assert main(["validate", "--config", str(tiny_config)]) == 0
        assert "config OK" in capsys.readouterr().out

    def test_validate_rejects_bad_config(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text("path_loss_exponent = 1.5\n")
        assert main(["validate", "--config", str(bad)]) == 2
        assert "alpha" in capsys.readouterr().err

    def test_schema_error_before_output(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text("axis_grid = \n")  # empty value -> parse error
        out = tmp_path / "never.csv"
        assert main(["sweep", "--config", str(bad), "--out", str(out)]) == 2
        assert not out.exists()

    def test_oracle_command(self, capsys):
        assert main(["oracle", "--check", "beta"]) == 0
        assert "PASS" in capsys.readouterr().out

    def test_preset_flag(self, tmp_path):
        out = tmp_path / "fig2.csv"
        code = main(["sweep", "--preset", "fig2", "--out", str(out)])
        assert code == 0
        with open(out, newline="") as fh:
            rows = list(csv.DictReader(fh))
        # 16 thresholds x 2 methods x 4 scenarios
        assert len(rows) == 16 * 2 * 4
        methods = {row["method"] for row in rows}
        assert methods == {"exact", "gc"}

"""Run configuration precedence and deterministic report rendering."""

import json

import pytest

from hankelkit.config import RunConfig, load_config
from hankelkit.report import Report, render


class TestConfig:
    def test_defaults(self):
        cfg = load_config()
        assert cfg == RunConfig()
        assert cfg.format == "csv" and cfg.workers == 1

    def test_file_overrides_defaults(self, tmp_path):
        p = tmp_path / "run.cfg"
        p.write_text("quad_tol = 1e-7  # looser\ngrid_n = 32\nformat = json\n")
        cfg = load_config(str(p))
        assert cfg.quad_tol == 1e-7
        assert cfg.grid_n == 32
        assert cfg.format == "json"
        assert cfg.x_min == RunConfig().x_min

    def test_explicit_overrides_beat_file(self, tmp_path):
        p = tmp_path / "run.cfg"
        p.write_text("grid_n = 32\n")
        cfg = load_config(str(p), grid_n=128)
        assert cfg.grid_n == 128

    def test_none_override_is_ignored(self):
        assert load_config(None, grid_n=None).grid_n == RunConfig().grid_n

    def test_env_workers(self, monkeypatch, tmp_path):
        monkeypatch.setenv("HANKELKIT_WORKERS", "3")
        assert load_config().workers == 3
        # file wins over the environment
        p = tmp_path / "run.cfg"
        p.write_text("workers = 2\n")
        assert load_config(str(p)).workers == 2

    def test_bad_file_lines(self, tmp_path):
        p = tmp_path / "run.cfg"
        p.write_text("not a pair\n")
        with pytest.raises(ValueError):
            load_config(str(p))
        p.write_text("mystery = 1\n")
        with pytest.raises(ValueError):
            load_config(str(p))

    def test_validation(self):
        with pytest.raises(ValueError):
            RunConfig(quad_tol=-1.0)
        with pytest.raises(ValueError):
            RunConfig(x_min=2.0, x_max=1.0)
        with pytest.raises(ValueError):
            RunConfig(grid_scale="sqrt")
        with pytest.raises(ValueError):
            RunConfig(format="xml")
        with pytest.raises(ValueError):
            RunConfig(workers=0)

    def test_hash_stability(self):
        a, b = RunConfig(), RunConfig()
        assert a.hash() == b.hash()
        assert len(a.hash()) == 12
        assert RunConfig(seed=1).hash() != a.hash()


SAMPLE = Report(
    statement="demo-statement",
    columns=("k", "value", "ok"),
    rows=((0, 0.1, True), (1, 2.5e-13, False)),
    summary={"max": 0.1, "note": "short"},
)


class TestRender:
    def test_csv_layout(self):
        text = render(SAMPLE, RunConfig())
        lines = text.splitlines()
        assert lines[0].startswith("# version=")
        assert any(ln.startswith("# config_hash=") for ln in lines)
        assert "# statement=demo-statement" in lines
        assert "k,value,ok" in lines
        assert "1,2.5e-13,false" in lines

    def test_json_round_trip(self):
        text = render(SAMPLE, RunConfig(), fmt="json")
        payload = json.loads(text)
        assert payload["statement"] == "demo-statement"
        assert payload["rows"][0] == [0, 0.1, True]
        assert payload["seed"] == 0

    def test_byte_identical(self):
        cfg = RunConfig(seed=7)
        for fmt in ("csv", "json"):
            assert render(SAMPLE, cfg, fmt=fmt) == render(SAMPLE, cfg, fmt=fmt)

    def test_float_repr_round_trips(self):
        text = render(SAMPLE, RunConfig())
        cell = text.splitlines()[-1].split(",")[1]
        assert float(cell) == 2.5e-13

    def test_unknown_format_rejected(self):
        with pytest.raises(ValueError):
            render(SAMPLE, RunConfig(), fmt="yaml")

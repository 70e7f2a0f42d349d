"""Command-line interface: exit codes, report format, and rerun
determinism."""

import json

from click.testing import CliRunner

from hankelkit.cli import main


def run(*args):
    return CliRunner().invoke(main, list(args))


class TestEvalCommands:
    def test_kernel_eval_anchor(self):
        res = run("kernel", "eval", "--alpha", "-0.5", "--beta", "0.5",
                  "--x", "2", "--y", "1")
        assert res.exit_code == 0
        assert "0.4244131815783875" in res.output
        assert "# statement=transplantation-kernel-evaluation" in res.output

    def test_specfun_eval(self):
        res = run("specfun", "eval", "gamma", "5")
        assert res.exit_code == 0
        assert "24.0" in res.output

    def test_usage_error_exit_2(self):
        res = run("specfun", "eval", "gamma", "--", "-1")
        assert res.exit_code == 2

    def test_unknown_function_exit_2(self):
        res = run("specfun", "eval", "airy", "1")
        assert res.exit_code == 2

    def test_transform_with_explicit_grid(self):
        res = run("--format", "json", "hankel", "transform", "--nu", "0",
                  "--f", "weber:0", "--xmin", "1", "--xmax", "2", "--n", "3")
        assert res.exit_code == 0
        payload = json.loads(res.output)
        assert payload["statement"] == "hankel-transform-evaluation"
        assert len(payload["rows"]) == 3


class TestSweepCommands:
    def test_ap_divergent_informational(self):
        res = run("--format", "json", "ap", "--weight", "pow:1.5")
        assert res.exit_code == 0
        payload = json.loads(res.output)
        assert payload["summary"]["divergent"] is True

    def test_ap_bad_family_exit_2(self):
        res = run("ap", "--weight", "one", "--family", "triadic:0,1")
        assert res.exit_code == 2

    def test_verify_radial_passes(self):
        res = run("verify", "radial", "--n", "2")
        assert res.exit_code == 0
        assert "# statement=radial-transform-identity" in res.output

    def test_verify_cz_gap_exit_2(self):
        res = run("verify", "cz", "--a", "0", "--b", "1.5")
        assert res.exit_code == 2


class TestDeterminism:
    def test_reruns_byte_identical(self, tmp_path):
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        for p in (p1, p2):
            res = run("--seed", "3", "--out", str(p), "verify", "lemma")
            assert res.exit_code == 0
        assert p1.read_bytes() == p2.read_bytes()

    def test_header_carries_provenance(self, tmp_path):
        p = tmp_path / "r.csv"
        res = run("--seed", "9", "--out", str(p), "verify", "radial", "--n", "3")
        assert res.exit_code == 0
        text = p.read_text()
        assert "# seed=9" in text
        assert "# config_hash=" in text
        assert "# version=" in text

    def test_config_file_sets_format(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("format = json\n")
        res = run("--config", str(cfg), "specfun", "eval", "gamma", "4")
        assert res.exit_code == 0
        assert json.loads(res.output)["rows"][0][2] == 6.0

    def test_flag_beats_config_file(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("format = json\n")
        res = run("--config", str(cfg), "--format", "csv",
                  "specfun", "eval", "gamma", "4")
        assert res.exit_code == 0
        assert res.output.startswith("# version=")

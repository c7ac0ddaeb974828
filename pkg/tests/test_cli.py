"""Command-line front end: config parsing, outputs and exit codes."""

import csv
import json

import pytest

from periodize.cli import ConfigError, main, parse_config_text


def run(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


class TestConfigText:
    def test_comments_and_blanks(self):
        cfg = parse_config_text("# a comment\n\neq = 1.1  # trailing\n p=2\n")
        assert cfg == {"eq": "1.1", "p": "2"}

    def test_bad_line_reports_location(self):
        with pytest.raises(ConfigError) as err:
            parse_config_text("eq = 1.1\nnot a pair\n", "run.cfg")
        assert err.value.field == "run.cfg:2"


class TestSolve:
    def test_csv_and_manifest(self, capsys, tmp_path):
        out = tmp_path / "osc"
        code, doc = run(capsys, "solve", "--out", str(out), "eq=1.4", "a=1", "x0=0.7", "v0=0.3", "t1=2T", "n_samples=9")
        assert code == 0
        assert list(doc) == ["spec", "tolerances", "status", "classification", "residuals"]
        assert doc["status"]["status"] == "completed"
        assert doc["residuals"]["return_at_1T"] < 1e-8
        rows = list(csv.reader(out.with_suffix(".csv").open()))
        assert rows[0] == ["t", "re_0", "im_0", "re_1", "im_1"]
        assert float(rows[1][0]) == 0.0 and float(rows[1][1]) == 0.7
        assert json.loads(out.with_suffix(".json").read_text()) == doc

    def test_config_file_and_override(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("eq = 1.1\np = 2\nq = 1\nalpha = 1\nw0 = 0.1+0.05i\nt1 = 1T\n")
        code, doc = run(capsys, "solve", "--config", str(cfg), "w0=0.2")
        assert code == 0
        assert doc["classification"]["measured"]["verdict"] == "periodic"

    def test_missing_end_time(self, capsys):
        code, doc = run(capsys, "solve", "eq=1.1", "p=2", "q=1", "w0=0.1")
        assert code == 2 and doc["error"]["field"] == "t1"

    def test_complex_data_for_real_system(self, capsys):
        code, doc = run(capsys, "solve", "eq=1.4", "a=1", "w0=0.2", "t1=1")
        assert code == 2 and doc["error"]["field"] == "w0"


class TestClassify:
    def test_periodic_agrees(self, capsys):
        code, doc = run(capsys, "classify", "eq=1.1", "p=3", "q=1", "alpha=1", "Omega=0.5", "w0=0.1")
        assert code == 0
        c = doc["classification"]
        assert c["agree"] is True
        assert c["measured"]["verdict"] == "periodic"

    def test_singular_agrees(self, capsys):
        code, doc = run(capsys, "classify", "eq=1.1", "p=2", "q=1", "alpha=1", "w0=0.3-0.5i")
        c = doc["classification"]
        assert code == 0 and c["measured"]["verdict"] == "singular"
        assert c["analytic"]["verdict"] == "on_circle"

    def test_bad_value(self, capsys):
        code, doc = run(capsys, "classify", "eq=1.1", "p=2", "q=banana", "w0=0.1")
        assert code == 2
        assert doc["error"] == {"kind": "config", "field": "q", "message": doc["error"]["message"]}

    def test_out_of_domain_spec(self, capsys):
        code, doc = run(capsys, "basin", "eq=1.1", "p=2", "q=1", "resolution=2")
        assert code == 2 and doc["error"]["kind"] == "config"

    def test_unknown_key(self, capsys):
        code, doc = run(capsys, "classify", "eq=1.1", "zeta=1")
        assert code == 2 and doc["error"]["field"] == "zeta"


class TestBasin:
    args = ("eq=1.1", "p=2", "q=1", "alpha=1", "resolution=4x3", "max_multiple=4")

    def test_outputs(self, capsys, tmp_path):
        out = tmp_path / "b"
        code, doc = run(capsys, "basin", "--out", str(out), *self.args)
        assert code == 0
        rows = list(csv.reader(out.with_suffix(".csv").open()))
        assert rows[0] == ["re", "im", "verdict", "period_num", "period_den"]
        assert len(rows) == 1 + 12
        assert sum(doc["classification"]["fractions"].values()) == pytest.approx(1.0)

    def test_worker_count_irrelevant(self, capsys):
        _, one = run(capsys, "basin", *self.args)
        _, two = run(capsys, "basin", "--workers", "2", *self.args)
        assert one["classification"] == two["classification"]

    def test_zero_resolution_rejected(self, capsys):
        code, doc = run(capsys, "basin", "eq=1.1", "p=2", "q=1", "resolution=0")
        assert code == 2 and doc["error"]["field"] == "resolution"


class TestVerify:
    @pytest.mark.parametrize("family", ["2.56", "2.49", "kdv-soliton", "first-order"])
    def test_families_pass(self, capsys, family):
        code, doc = run(capsys, "verify", f"family={family}")
        assert code == 0 and doc["status"]["pass"] is True

    def test_unknown_family(self, capsys):
        code, doc = run(capsys, "verify", "family=nope")
        assert code == 2 and doc["error"]["field"] == "family"

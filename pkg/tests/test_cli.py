import json
import math

import pytest

from radsob.cli import RunConfig, main
from radsob.profile import builtin_corpus, save_corpus


def run_cli(capsys, argv):
    rc = main(argv)
    out = capsys.readouterr()
    return rc, out.out, out.err


class TestRunConfig:
    def test_round_trip_lossless(self):
        cfg = RunConfig(command="equiv", dim=4, k=3, p=3.0, radius=math.inf, s=0.5)
        assert RunConfig.from_dict(cfg.to_dict()) == cfg
        cfg2 = RunConfig(command="gram", radius=0.5, method="monte-carlo", samples=10)
        assert RunConfig.from_dict(cfg2.to_dict()) == cfg2

    def test_validation_mirrors_preconditions(self):
        with pytest.raises(ValueError):
            RunConfig(command="equiv", p=0.5)
        with pytest.raises(ValueError):
            RunConfig(command="equiv", dim=1)
        with pytest.raises(ValueError):
            RunConfig(command="equiv", radius=-1.0)
        with pytest.raises(ValueError):
            RunConfig(command="equiv", method="magic")


class TestGram:
    def test_d3_n2_output(self, capsys):
        rc, out, err = run_cli(capsys, ["gram", "--dim", "3", "--order", "2"])
        assert rc == 0
        assert "[[1,1],[1,3]]" in out
        doc = json.loads(out)
        assert doc["gamma_inv"] == [["3/2", "-1/2"], ["-1/2", "1/2"]]
        assert err == ""

    def test_budget_exit_code(self, capsys):
        rc, out, err = run_cli(capsys, ["gram", "--dim", "10", "--order", "9"])
        assert rc == 3
        assert out == ""
        assert "budget" in err

    def test_deterministic(self, capsys):
        _, out1, _ = run_cli(capsys, ["gram", "--dim", "4", "--order", "4"])
        _, out2, _ = run_cli(capsys, ["gram", "--dim", "4", "--order", "4"])
        assert out1 == out2


class TestVerify:
    def test_gram_suite(self, capsys):
        rc, out, _ = run_cli(capsys, ["verify", "gram"])
        assert rc == 0
        doc = json.loads(out)
        assert doc["passed"] is True
        assert len(doc["checks"]) == 24

    def test_whitney_suite(self, capsys):
        rc, out, _ = run_cli(capsys, ["verify", "whitney"])
        assert rc == 0
        assert json.loads(out)["passed"] is True

    def test_identities_suite(self, capsys):
        rc, out, _ = run_cli(capsys, ["verify", "identities"])
        assert rc == 0
        doc = json.loads(out)
        assert doc["passed"] is True
        assert all("error" in c and "pass" in c for c in doc["checks"])

    def test_hardy_bad_s_is_config_error(self, capsys):
        rc, out, err = run_cli(capsys, ["verify", "hardy", "--s", "-0.7", "--p", "2"])
        assert rc == 2
        assert out == ""
        assert "s >" in err

    def test_hardy_single_s(self, capsys):
        rc, out, _ = run_cli(capsys, ["verify", "hardy", "--s", "0.5"])
        assert rc == 0
        assert json.loads(out)["passed"] is True


class TestEquiv:
    def test_default_run_writes_file(self, capsys, tmp_path):
        out_path = tmp_path / "report.json"
        rc, out, _ = run_cli(
            capsys, ["equiv", "--dim", "2", "--k", "1", "--out", str(out_path)]
        )
        assert rc == 0
        assert out == ""  # report went to the file, stdout stays clean
        doc = json.loads(out_path.read_text())
        assert {"params", "entries", "ratios", "degenerate"} <= set(doc)

    def test_byte_identical_reruns(self, capsys, tmp_path):
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        args = ["equiv", "--dim", "2", "--k", "1", "--p", "2"]
        assert main(args + ["--out", str(p1)]) == 0
        assert main(args + ["--out", str(p2)]) == 0
        assert p1.read_bytes() == p2.read_bytes()

    def test_csv_format(self, capsys):
        rc, out, _ = run_cli(
            capsys, ["equiv", "--dim", "2", "--k", "0", "--format", "csv"]
        )
        assert rc == 0
        assert out.startswith("label,route,method,value,err")

    def test_p3_exact_angular_rejected(self, capsys):
        rc, out, err = run_cli(capsys, ["equiv", "--p", "3"])
        assert rc == 2
        assert out == ""

    def test_p3_monte_carlo_runs(self, capsys):
        rc, out, _ = run_cli(
            capsys,
            ["equiv", "--dim", "2", "--k", "1", "--p", "3", "--method", "monte-carlo",
             "--samples", "2000"],
        )
        assert rc == 0
        doc = json.loads(out)
        assert any(e["method"] == "monte-carlo" for e in doc["entries"])

    def test_halfline_radius(self, capsys):
        rc, out, _ = run_cli(capsys, ["equiv", "--dim", "3", "--k", "1", "--radius", "inf"])
        assert rc == 0
        doc = json.loads(out)
        assert doc["params"]["r"] == "inf"
        assert doc["degenerate"]  # the non-decaying corpus entries are reported

    def test_custom_corpus_file(self, capsys, tmp_path):
        path = tmp_path / "corpus.json"
        save_corpus(builtin_corpus()[:3], path)
        rc, out, _ = run_cli(capsys, ["equiv", "--dim", "2", "--k", "0", "--corpus", str(path)])
        assert rc == 0
        assert len(json.loads(out)["entries"]) == 9

    def test_missing_corpus_is_config_error(self, capsys):
        rc, out, err = run_cli(capsys, ["equiv", "--corpus", "/nonexistent.json"])
        assert rc == 2


class TestCorot:
    def test_k0_table(self, capsys):
        rc, out, _ = run_cli(capsys, ["corot", "--dim", "2", "--k", "0"])
        assert rc == 0
        doc = json.loads(out)
        pairs = {row["pair"] for row in doc["ratios"]}
        assert "(lhs/rhs)^2" in pairs

    def test_p_not_two_rejected(self, capsys):
        rc, out, err = run_cli(capsys, ["corot", "--p", "3"])
        assert rc == 2


class TestMoments:
    def test_order_two(self, capsys):
        rc, out, _ = run_cli(capsys, ["moments", "--dim", "2", "--order", "2"])
        assert rc == 0
        doc = json.loads(out)
        values = {tuple(m["beta"]): m["value"] for m in doc["moments"]}
        assert values[(1, 1)] == 0.0
        assert values[(2, 0)] == pytest.approx(3.141592653589793, rel=1e-12)

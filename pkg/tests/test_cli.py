import json
import math
import os

import pytest

from lighttails import cli

CONFIGS = os.path.join(os.path.dirname(__file__), "..", "configs")


def config(name):
    return os.path.join(CONFIGS, name)


def write_spec(tmp_path, payload, name="spec.json", raw=None):
    path = tmp_path / name
    path.write_text(json.dumps(raw if raw is not None else
                               {"schema": 1, "spec": payload}))
    return str(path)


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestNorms:
    def test_exponential_psi1(self, capsys):
        code, out, err = run(capsys, "norms", "--spec", config("exp1.json"),
                             "--alpha", "1")
        assert code == 0 and err == ""
        doc = json.loads(out)
        assert doc["schema"] == 1 and doc["command"] == "norms"
        assert len(doc["config_digest"]) == 64
        assert doc["estimate"]["value"] == pytest.approx(1.0, abs=1e-6)

    def test_rademacher_psi2(self, capsys):
        code, out, _ = run(capsys, "norms", "--spec", config("rademacher.json"),
                           "--alpha", "2")
        assert code == 0
        assert json.loads(out)["estimate"]["value"] == pytest.approx(1.0, abs=1e-12)

    def test_csv_format(self, capsys):
        code, out, _ = run(capsys, "norms", "--spec", config("rademacher.json"),
                           "--alpha", "2", "--format", "csv")
        assert code == 0
        assert out.startswith("key,value\n")
        assert any(line.startswith("estimate.value,") for line in out.split("\n"))


class TestSpecLoading:
    def test_unknown_top_level_key(self, tmp_path, capsys):
        path = write_spec(tmp_path, None, raw={
            "schema": 1, "spec": {"kind": "rademacher"}, "extra_field": 3})
        code, out, err = run(capsys, "norms", "--spec", path, "--alpha", "1")
        assert code == 1 and out == ""
        assert '"$.extra_field"' in err

    def test_wrong_schema(self, tmp_path, capsys):
        path = write_spec(tmp_path, None, raw={"schema": 2, "spec": {}})
        code, _, err = run(capsys, "norms", "--spec", path, "--alpha", "1")
        assert code == 1 and '"$.schema"' in err

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "norms", "--spec", "/nonexistent.json",
                           "--alpha", "1")
        assert code == 1 and "cannot read" in err

    def test_bad_dist_kind(self, tmp_path, capsys):
        path = write_spec(tmp_path, {"kind": "no-such-law"})
        code, _, err = run(capsys, "norms", "--spec", path, "--alpha", "1")
        assert code == 1 and "no-such-law" in err

    def test_missing_required_flag(self, capsys):
        code, _, err = run(capsys, "norms", "--spec", config("exp1.json"))
        assert code == 1 and "error:" in err


class TestEntropyCheck:
    def test_rademacher(self, capsys):
        code, out, _ = run(capsys, "entropy-check", "--spec",
                           config("rademacher.json"), "--beta", "1.0")
        assert code == 0
        doc = json.loads(out)
        assert doc["subgaussian"]["holds"] is True
        want = math.tanh(1.0) - math.log(math.cosh(1.0))
        assert doc["subgaussian"]["entropy"] == pytest.approx(want, abs=1e-12)
        assert "skipped" in doc["subexponential"]

    def test_continuous_rejected(self, capsys):
        code, _, err = run(capsys, "entropy-check", "--spec", config("exp1.json"))
        assert code == 1 and "finite-support" in err


class TestBoundAndInvert:
    def test_bound_grid(self, capsys):
        code, out, _ = run(capsys, "bound", "--spec", config("sum_exp10.json"),
                           "--bounds", "thm2,bounded-difference",
                           "--t-grid", "1:10:4")
        assert code == 0
        doc = json.loads(out)
        assert doc["t_grid"] == [1.0, 4.0, 7.0, 10.0]
        probs = [r["prob"] for r in doc["bounds"]["thm2"]]
        assert all(b < a for a, b in zip(probs, probs[1:]))
        assert all(r["prob"] == 1.0 for r in doc["bounds"]["bounded-difference"])

    def test_bad_t_grid(self, capsys):
        for grid in ("1:2", "2:1:5", "0:1:5", "a:b:c"):
            code, _, err = run(capsys, "bound", "--spec", config("exp1.json"),
                               "--bounds", "thm2", "--t-grid", grid)
            assert code == 1 and "t-grid" in err

    def test_unknown_bound_kind(self, capsys):
        code, _, err = run(capsys, "bound", "--spec", config("exp1.json"),
                           "--bounds", "thm9", "--t-grid", "1:2:2")
        assert code == 1 and "thm9" in err

    def test_invert(self, capsys):
        code, out, _ = run(capsys, "invert", "--spec", config("sum_exp10.json"),
                           "--bounds", "thm2", "--delta", "0.01")
        assert code == 0
        inv = json.loads(out)["inversions"]["thm2"]
        assert 0 < inv["exact"] <= inv["additive"]


class TestAppbound:
    def test_vector_ii_value(self, capsys):
        code, out, _ = run(capsys, "appbound", "--app", "vector-ii",
                           "--psi1", "1.0", "--n", "100", "--delta", "0.01")
        assert code == 0
        want = 8 * math.e * math.sqrt(2 * math.log(100) / 100)
        assert json.loads(out)["value"] == pytest.approx(want, rel=1e-12)

    def test_metric(self, capsys):
        code, out, _ = run(capsys, "appbound", "--app", "metric", "--lip", "1.0",
                           "--diameters", "0.5,0.5", "--t", "1.0")
        assert code == 0
        res = json.loads(out)["result"]
        assert res["kind"] == "metric" and 0 < res["prob"] < 1

    def test_precondition_is_usage_error(self, capsys):
        code, _, err = run(capsys, "appbound", "--app", "vector-ii",
                           "--psi1", "1.0", "--n", "100", "--delta", "0.6")
        assert code == 1 and "ln 2" in err

    def test_missing_flag(self, capsys):
        code, _, err = run(capsys, "appbound", "--app", "psa", "--n", "100",
                           "--delta", "0.01")
        assert code == 1 and "--psi2" in err


class TestVerifyCommand:
    def test_sound_run(self, capsys):
        code, out, _ = run(capsys, "verify", "--spec", config("sum_exp10.json"),
                           "--bounds", "thm2", "--t-grid", "2:20:5",
                           "--n", "20000", "--seed", "1")
        assert code == 0
        doc = json.loads(out)
        assert doc["verdict"] == "SOUND"
        assert doc["schema"] == 1 and doc["command"] == "verify"

    def test_negative_control_violation(self, capsys):
        code, out, _ = run(capsys, "verify", "--spec",
                           config("sum_rademacher1.json"),
                           "--bounds", "thm2", "--t-grid", "0.5:0.5:1",
                           "--n", "1000000", "--seed", "1", "--negative-control")
        assert code == 2
        assert json.loads(out)["verdict"] == "VIOLATION"

    def test_csv_deterministic_across_threads(self, tmp_path, capsys):
        outputs = []
        for threads in ("1", "8"):
            path = str(tmp_path / f"report-{threads}.csv")
            code, _, _ = run(capsys, "verify", "--spec", config("sum_exp10.json"),
                             "--bounds", "thm2", "--t-grid", "2:20:5",
                             "--n", "200000", "--seed", "3",
                             "--threads", threads, "--format", "csv",
                             "--output", path)
            assert code == 0
            with open(path, "rb") as fh:
                outputs.append(fh.read())
        assert outputs[0] == outputs[1]
        header = outputs[0].decode().split("\n")[0]
        assert header == "t,empirical,cp_lo,cp_hi,thm2,verdict"

    def test_output_is_atomic_and_clean(self, tmp_path, capsys):
        path = str(tmp_path / "out.json")
        code, out, _ = run(capsys, "norms", "--spec", config("rademacher.json"),
                           "--alpha", "1", "--output", path)
        assert code == 0 and out == ""
        with open(path) as fh:
            assert json.load(fh)["command"] == "norms"
        leftovers = [p for p in os.listdir(tmp_path) if p.startswith(".lighttails-")]
        assert leftovers == []

    def test_compare_has_ratios(self, capsys):
        code, out, _ = run(capsys, "compare", "--spec", config("sum_exp10.json"),
                           "--bounds", "thm2", "--t-grid", "2:20:3",
                           "--n", "20000", "--seed", "1", "--format", "csv")
        assert code == 0
        assert out.split("\n")[0].endswith("ratio_log10_thm2,verdict")


class TestDigestStability:
    def test_same_config_same_digest(self, capsys):
        _, out1, _ = run(capsys, "norms", "--spec", config("exp1.json"),
                         "--alpha", "1")
        _, out2, _ = run(capsys, "norms", "--spec", config("exp1.json"),
                         "--alpha", "1")
        assert out1 == out2
        _, out3, _ = run(capsys, "norms", "--spec", config("exp1.json"),
                         "--alpha", "1", "--p-max", "128")
        assert (json.loads(out3)["config_digest"]
                != json.loads(out1)["config_digest"])

    def test_version_flag(self, capsys):
        code, out, _ = run(capsys, "--version")
        assert code == 0 and out.strip()

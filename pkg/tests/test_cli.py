import json

import pytest

from marcinkiewicz.cli import EXIT_DOMAIN, EXIT_FAIL, EXIT_PASS, EXIT_USAGE, main, read_config_file


def run(tmp_path, *argv):
    return main([*argv, "--out", str(tmp_path)])


def test_verify_pass_writes_reports(tmp_path):
    assert run(tmp_path, "verify", "lemma4") == EXIT_PASS
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["pass"] is True and report["runtime_ms"] is None
    assert (tmp_path / "report.csv").read_text().startswith("# run.command=verify")


def test_verify_failure_exit_code(tmp_path):
    # an impossible tolerance on a real check: the report is written and the exit code flags it
    assert run(tmp_path, "verify", "bridge-mu", "--index", "0", "--x0", "0.3", "--alpha", "1",
               "--L", "32", "--N", "64", "--m", "4") == EXIT_FAIL
    assert json.loads((tmp_path / "report.json").read_text())["pass"] is False


@pytest.mark.parametrize("argv", [["verify", "thm9"], ["verify"], ["compute", "mu", "--n", "x"],
                                  ["verify", "thm2", "--bogus", "1"]])
def test_usage_errors(tmp_path, argv):
    assert run(tmp_path, *argv) == EXIT_USAGE


@pytest.mark.parametrize("argv", [["verify", "thm3", "--alpha", "1.5"], ["verify", "thm2", "--n", "3"],
                                  ["verify", "thm1", "--family", "gauss-deriv"],
                                  ["compute", "mu", "--tmin", "2", "--tmax", "1"]])
def test_domain_errors(tmp_path, argv):
    assert run(tmp_path, *argv) == EXIT_DOMAIN


def test_compute_is_byte_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert main(["compute", "mu", "--alpha", "1", "--family", "random", "--seed", "5",
                     "--m", "8", "--out", str(out)]) == EXIT_PASS
    assert (a / "compute.csv").read_bytes() == (b / "compute.csv").read_bytes()
    lines = [ln for ln in (a / "compute.csv").read_text().splitlines() if not ln.startswith("#")]
    assert lines[0] == "index,x1,value" and len(lines) > 2


def test_timing_flag_adds_runtime(tmp_path):
    assert run(tmp_path, "verify", "lemma1", "--timing") == EXIT_PASS
    assert json.loads((tmp_path / "report.json").read_text())["runtime_ms"] > 0


def test_multiplier_outputs(tmp_path):
    assert run(tmp_path, "multiplier", "Kalpha", "--alpha", "1", "--svg", "--json") == EXIT_PASS
    assert (tmp_path / "multiplier.csv").exists()
    assert (tmp_path / "multiplier.svg").read_text().startswith("<svg")
    assert json.loads((tmp_path / "multiplier.json").read_text())


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nalpha = 0.75\nm = 8\nseed = 3\n")
    assert read_config_file(cfg) == {"alpha": "0.75", "m": "8", "seed": "3"}
    out = tmp_path / "o"
    assert main(["compute", "mu", "--config", str(cfg), "--alpha", "1.0", "--out", str(out)]) == EXIT_PASS
    text = (out / "compute.csv").read_text()
    assert "# alpha=1\n" in text and "# m=8\n" in text
    bad = tmp_path / "bad.cfg"
    bad.write_text("nonsense\n")
    assert main(["compute", "mu", "--config", str(bad), "--out", str(out)]) == EXIT_USAGE

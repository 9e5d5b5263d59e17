import json
import shutil
import subprocess
import sys

import pytest

from h3lab.acceptance import cli_determinism_runs, run_cli
from h3lab.cli import main


@pytest.fixture
def c5(tmp_path):
    path = tmp_path / "c5.h3"
    assert main(["gen", "tight-cycle", "5", "-o", str(path)]) == 0
    return path


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_gen_writes_h3(c5):
    assert c5.read_text().splitlines()[0] == "h3 5 5"


def test_mpair_reports_half(c5, capsys):
    assert main(["mpair", str(c5)]) == 0
    out = _json(capsys)
    assert out["command"] == "mpair"
    assert out["mpair"] == "1/2"
    assert "config_hash" in out and out["certificates"]


def test_inducible_negative_exits_one(c5, capsys):
    assert main(["inducible", str(c5)]) == 1
    assert _json(capsys)["inducible"] is False


def test_avoidable_writes_certificate(c5, tmp_path, capsys):
    out = tmp_path / "av.json"
    assert main(["avoidable", str(c5), "-o", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["avoidable"] is True
    assert list(tmp_path.glob("av.json.*.cert.json"))


def test_missing_file_exits_three(tmp_path, capsys):
    assert main(["mpair", str(tmp_path / "nope.h3")]) == 3


def test_usage_error_exits_three():
    assert main(["frobnicate"]) == 3


def test_malformed_h3_exits_three(tmp_path):
    bad = tmp_path / "bad.h3"
    bad.write_text("h3 3 1\n0 1\n")
    assert main(["mpair", str(bad)]) == 3


def test_verify_finds_blue_clique(tmp_path, c5, capsys):
    col = tmp_path / "col.json"
    assert main(["color", "stepup", "--m", "3", "--graph", "empty", "-o", str(col)]) == 0
    assert main(["verify", str(col), "--red", str(c5), "--blue", "4"]) == 1


def test_ramsey_single_edge(tmp_path, capsys):
    e = tmp_path / "e.h3"
    main(["gen", "edge", "-o", str(e)])
    capsys.readouterr()
    assert main(["ramsey", "--red", str(e), "--blue", "4", "--max-N", "5"]) == 0
    assert _json(capsys)["ramsey_number"] == 4


def test_config_hash_ignores_threads(c5):
    a = json.loads(run_cli(["mpair", str(c5), "--threads", "1"])[1])
    b = json.loads(run_cli(["mpair", str(c5), "--threads", "4"])[1])
    assert a["config_hash"] == b["config_hash"]
    c = json.loads(run_cli(["mpair", str(c5), "--orderings", "identity"])[1])
    assert c["config_hash"] != a["config_hash"]


def test_every_subcommand_is_deterministic(tmp_path):
    for argv in cli_determinism_runs(str(tmp_path)):
        first = run_cli(argv + ["--threads", "1"])
        assert run_cli(argv + ["--threads", "4"]) == first, argv[0]
        assert first[0] in (0, 1), argv


@pytest.mark.skipif(shutil.which("h3lab") is None, reason="console script not installed")
def test_console_script_exit_codes(c5):
    ok = subprocess.run(["h3lab", "mpair", str(c5)], capture_output=True, text=True)
    assert ok.returncode == 0 and '"1/2"' in ok.stdout
    bad = subprocess.run(["h3lab", "mpair"], capture_output=True, text=True)
    assert bad.returncode == 3


def test_module_entry_point(c5):
    res = subprocess.run([sys.executable, "-m", "h3lab", "mpair", str(c5)], capture_output=True, text=True)
    assert res.returncode == 0


def test_selftest_single_criterion(capsys):
    code = main(["selftest", "--only", "4"])
    out = capsys.readouterr()
    assert code == 0
    assert "criterion 4: PASS" in out.out + out.err

import csv
import json
import subprocess
import sys

import pytest

from primesq.cli import DEFAULTS, OUTPUT_DIR_ENV, SUBCOMMANDS, _fmt, load_config, run, to_csv
from primesq.errors import InvalidArgument


def test_exit_codes(tmp_path, capsys):
    assert run([]) == 2
    assert run(["nonsense"]) == 2
    assert run(["sieve", "--limit", "abc"]) == 2
    assert run(["sieve", "--threads", "0"]) == 2
    capsys.readouterr()
    assert run(["singular-converge", "--n", "9", "--cutoff", "1000",
                "--output", str(tmp_path / "x.csv")]) == 1
    err = capsys.readouterr().err
    assert err.startswith("primesq: singular-converge: PreconditionError:")
    assert len(err.strip().splitlines()) == 1


def test_show_config(capsys):
    assert run(["repr", "--nmax", "77", "--show-config"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert "nmax=77" in lines
    assert len(lines) == len(DEFAULTS)


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nnmax = 50\ncutoff=123  # trailing\n")
    assert run(["repr", "--config", str(cfg), "--nmax", "60", "--show-config"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert "nmax=60" in out and "cutoff=123" in out


def test_load_config_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("bogus=1\n")
    with pytest.raises(InvalidArgument):
        load_config(str(bad))
    bad.write_text("nmax\n")
    with pytest.raises(InvalidArgument):
        load_config(str(bad))
    with pytest.raises(InvalidArgument):
        load_config(str(tmp_path / "missing.cfg"))


def test_manifest_subcommand_mismatch(tmp_path):
    out = tmp_path / "s.csv"
    assert run(["sieve", "--limit", "50", "--output", str(out)]) == 0
    assert run(["repr", "--config", str(out) + ".manifest.json"]) == 2


def test_output_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
    assert run(["repr", "--nmax", "20"]) == 0
    path = tmp_path / "repr.csv"
    rows = list(csv.DictReader(path.open()))
    assert [r["n"] for r in rows][:3] == ["1", "2", "3"]
    manifest = json.loads((tmp_path / "repr.csv.manifest.json").read_text())
    assert manifest["subcommand"] == "repr"
    assert manifest["parameters"]["nmax"] == 20
    assert set(manifest["parameters"]) == set(DEFAULTS)
    assert str(path) in manifest["outputs"]


def test_stdout_when_no_output(monkeypatch, capsys):
    monkeypatch.delenv(OUTPUT_DIR_ENV, raising=False)
    assert run(["sieve", "--limit", "10"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0].startswith("n,")


def test_formatting():
    assert _fmt(True) == "true" and _fmt(0.1) == "0.10000000000000001"
    assert to_csv([{"a": 1, "b": 2.5}]) == "a,b\n1,2.5\n"
    assert to_csv([]) == ""


def test_json_format(tmp_path):
    out = tmp_path / "g.json"
    assert run(["gauss-verify", "--qmax", "12", "--output", str(out)]) == 0
    data = json.loads(out.read_text())
    assert "summary" in data and "rows" in data


def test_manifest_round_trip(tmp_path):
    first = tmp_path / "a.csv"
    assert run(["singular", "--nmax", "30", "--cutoff", "200", "--truncation", "20",
                "--output", str(first)]) == 0
    again = tmp_path / "b.csv"
    assert run(["singular", "--config", str(first) + ".manifest.json", "--output", str(again)]) == 0
    assert first.read_bytes() == again.read_bytes()


def test_help_lists_subcommands():
    proc = subprocess.run([sys.executable, "-m", "primesq", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    for name in SUBCOMMANDS:
        assert name in proc.stdout

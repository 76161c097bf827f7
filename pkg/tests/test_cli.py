import csv
import subprocess
import sys

import pytest

from su11lab.cli import build_parser, main


def test_parser_verbs():
    parser = build_parser()
    for argv in (["sweep", "x.cfg"], ["fig2a"], ["fig2b", "--out", "o.csv"], ["tables"], ["verify", "--grid", "extended"]):
        assert parser.parse_args(argv).command == argv[0]
    with pytest.raises(SystemExit):
        parser.parse_args(["verify", "--grid", "huge"])


def test_sweep_to_stdout(tmp_path, capsys):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("g = 0.5, 1.0, 2\nr = 0.2\nalpha_mag = 0.5\n")
    assert main(["sweep", str(cfg), "--set", "phi=0.3"]) == 0
    rows = list(csv.DictReader(capsys.readouterr().out.splitlines()))
    assert [float(r["g"]) for r in rows] == [0.5, 1.0]
    assert all(float(r["phi"]) == 0.3 for r in rows)


def test_sweep_bad_config_exits_2(tmp_path, capsys):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("g = oops\n")
    assert main(["sweep", str(cfg)]) == 2
    assert "s.cfg:1" in capsys.readouterr().err


def test_preset_writes_files(tmp_path):
    out = tmp_path / "fig2a.csv"
    assert main(["fig2a", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 101
    assert (tmp_path / "fig2a.csv.meta.txt").exists()


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "su11lab", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "su11lab" in res.stdout


def test_tables_command(tmp_path, capsys):
    out = tmp_path / "tables.txt"
    code = main(["tables", "--out", str(out)])
    text = out.read_text()
    assert "summary:" in text
    assert code == (1 if "[FAIL" in text else 0)


def test_verify_command(monkeypatch, capsys):
    import su11lab.verify as verify

    tiny = dict(g=(0.3,), r=(0.0, 0.2), alpha_mag=(0.5,), phi=(0.4,))
    monkeypatch.setitem(verify.GRIDS, "default", tiny)
    assert main(["verify"]) == 0
    out = capsys.readouterr().out
    assert "verify: OK" in out and "grid default: 2 points" in out

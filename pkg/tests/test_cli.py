import csv
import io as _io
import math

import pytest

from densemimo.cli import main

FAST = ["--trials", "3", "--snr-db-start", "0", "--snr-db-stop", "6", "--snr-db-step", "3", "--seed", "11"]


def rows(text):
    return list(csv.DictReader(_io.StringIO(text)))


def test_sweep_to_file(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["sweep", *FAST, "--out", str(out)]) == 0
    data = rows(out.read_text())
    assert len(data) == 2 * 3 * 3
    assert {r["scheme"] for r in data} == {"gaussian", "qpsk", "qam16"}


def test_sweep_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["sweep", *FAST, "--format", "json", "--out", str(a)])
    main(["sweep", *FAST, "--format", "json", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_sweep_stdout(capsys):
    assert main(["sweep", *FAST, "--schemes", "gaussian", "--dt", "0.25"]) == 0
    data = rows(capsys.readouterr().out)
    assert {(r["scheme"], r["dt"]) for r in data} == {("gaussian", "0.25")}


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("trials: 2\nlt: 2\ndt_list: [0.5, 0.125]\nschemes: [qpsk]\nbase_seed: 5\n")
    out = tmp_path / "o.csv"
    assert main(["sweep", "--config", str(cfg), "--trials", "4", "--snr-db-start", "0", "--snr-db-stop", "0", "--out", str(out)]) == 0
    data = rows(out.read_text())
    assert {r["trials"] for r in data} == {"4"}
    assert {r["dt"] for r in data} == {"0.5", "0.125"}


def test_error_is_one_line(capsys):
    code = main(["sweep", *FAST, "--covariance", "dense"])
    err = capsys.readouterr().err
    assert code == 1
    assert err.count("\n") == 1
    assert err.startswith("error: ExperimentError: ") and "dt=0.5" in err


def test_bad_config_key(tmp_path, capsys):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("nonsense: 1\n")
    assert main(["sweep", "--config", str(cfg)]) == 1
    assert "nonsense" in capsys.readouterr().err


def test_unwritable_output(tmp_path, capsys):
    assert main(["pattern", "--out", str(tmp_path / "nope" / "p.csv")]) == 1
    assert "nope" in capsys.readouterr().err


def test_seed_env_default(monkeypatch, tmp_path):
    args = ["sweep", "--trials", "2", "--snr-db-start", "0", "--snr-db-stop", "0"]
    monkeypatch.setenv("DENSEMIMO_SEED", "5")
    a = tmp_path / "a.csv"
    main([*args, "--out", str(a)])
    b = tmp_path / "b.csv"
    main([*args, "--seed", "5", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_pattern(capsys):
    assert main(["pattern", "--lt", "4", "--dt", "0.5", "--k", "2", "--points", "6"]) == 0
    data = rows(capsys.readouterr().out)
    assert list(data[0]) == ["phi", "magnitude"]
    assert float(data[1]["phi"]) == pytest.approx(math.pi / 3)
    assert float(data[1]["magnitude"]) == pytest.approx(1.0)


def test_pattern_empty(capsys):
    assert main(["pattern", "--points", "0"]) == 0
    assert capsys.readouterr().out == "phi,magnitude\n"


def test_theorem(tmp_path):
    out = tmp_path / "t.csv"
    assert main(["theorem", "--which", "2", "--sizes", "1,2", "--trials", "3", "--out", str(out)]) == 0
    data = rows(out.read_text())
    assert [r["lt"] for r in data] == ["1.0", "2.0"]
    assert data[0]["diagnostic"] == "closeness_trace"


def test_theorem_study3(capsys):
    assert main(["theorem", "--which", "3", "--dts", "0.5,0.25", "--lt", "2", "--trials", "2"]) == 0
    data = rows(capsys.readouterr().out)
    assert [r["dt"] for r in data] == ["0.5", "0.25"]


def test_theorem_requires_which():
    with pytest.raises(SystemExit):
        main(["theorem"])

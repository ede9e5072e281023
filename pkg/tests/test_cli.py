import csv
import io
import json
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from fewphoton import export
from fewphoton.cli import RunConfig, main, range_grid


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_spectrum_table(capsys):
    code, out, _ = run(["spectrum", "--Omega", "1", "--g", "0.025", "--kappa-range", "0:0.25:0.001",
                        "--n", "1,2,3", "-q"], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["n", "omega", "kappa", "re_E_plus", "im_E_plus", "re_E_minus", "im_E_minus"]
    assert len(rows) == 1 + 3 * 251
    ep = [r for r in rows[1:] if r[0] == "1" and r[2] == "0.1"][0]
    assert float(ep[3]) == pytest.approx(1.0) and float(ep[4]) == pytest.approx(-0.025)


def test_ep_table(capsys):
    code, out, _ = run(["ep", "--g", "0.025", "--format", "json", "-q"], capsys)
    recs = json.loads(out)
    assert code == 0 and [r["n"] for r in recs] == [1, 2, 3]
    for r in recs:
        assert r["gap"] < 1e-10
        assert r["im_E"] == pytest.approx(-(2 * r["n"] - 1) * r["n"] ** 0.5 * 0.025, rel=1e-12)


def test_g2_output_and_metadata(tmp_path, capsys):
    out = tmp_path / "g2.csv"
    code, _, err = run(["g2", "--Omega", "1", "--g", "0.1", "--kappa", "0.4", "--tau-max", "80",
                        "--points", "2048", "--output", str(out)], capsys)
    assert code == 0 and "g2" in err
    lines = out.read_text().splitlines()
    assert lines[0] == "tau,g2" and len(lines) == 2049
    assert float(lines[1].split(",")[1]) == pytest.approx(0.4903945288289147, rel=1e-14)
    meta = json.loads((tmp_path / "g2.csv.meta.json").read_text())
    assert meta["asymptote"] == pytest.approx(1 / 3.141592653589793 ** 2)
    assert meta["approach_rate"] == pytest.approx(0.1, rel=1e-3)


def test_determinism(tmp_path, capsys):
    paths = []
    for i in range(2):
        path = tmp_path / f"b{i}.csv"
        assert main(["boundstate", "--g", "0.1", "--kappa", "0.3", "--omega", "1.05", "--k1", "0.9",
                     "--points", "64", "-o", str(path), "--meta", str(tmp_path / f"m{i}.json"), "-q"]) == 0
        paths.append(path)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert (tmp_path / "m0.json").read_bytes() == (tmp_path / "m1.json").read_bytes()


def test_dump_config_round_trip(tmp_path, capsys):
    code, out, _ = run(["nphoton", "--g", "0.1", "--kappa", "0.3", "--n", "3", "--gap-range", "0:10:5",
                        "--format", "json", "--dump-config"], capsys)
    assert code == 0
    cfg = RunConfig.from_json(out)
    assert cfg.command == "nphoton" and cfg.options["n"] == [3] and cfg.format == "json"
    again = RunConfig.from_json(cfg.to_json())
    assert again == cfg
    path = tmp_path / "c.json"
    path.write_text(out)
    code, out2, _ = run(["--config", str(path), "--dump-config"], capsys)
    assert RunConfig.from_json(out2) == cfg


def test_flags_override_config(tmp_path, capsys):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"schema": 1, "command": "g2", "params": {"g": 0.1, "kappa": 0.4},
                                "options": {"points": 100}}))
    code, out, _ = run(["g2", "--config", str(path), "--points", "64", "--kappa", "0.2", "--dump-config"], capsys)
    cfg = RunConfig.from_json(out)
    assert cfg.options["points"] == 64 and cfg.params.kappa == 0.2 and cfg.params.g == 0.1


def test_config_only_invocation(tmp_path, capsys):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"schema": 1, "command": "ep", "params": {"g": 0.5}}))
    code, out, _ = run(["--config", str(path), "-q"], capsys)
    assert code == 0 and out.startswith("n,kappa_ep")


@pytest.mark.parametrize("argv,name", [
    (["g2", "--omega", "1", "--Omega", "1.2", "--g", "0.1", "--kappa", "0.4"], "domain-error"),
    (["nphoton", "--g", "0.1", "--kappa", "0.3", "--n", "9", "--gap-range", "0:1:1"], "complexity-limit"),
    (["spectrum", "--g", "0.1", "--kappa-range", "1:0:0.1"], "invalid-argument"),
    (["spectrum", "--kappa-range", "0:1:0.1"], "invalid-argument"),
    (["g2", "--g", "0.1"], "invalid-argument"),
    (["g2", "--g", "-0.1", "--kappa", "0.1"], "invalid-argument"),
])
def test_errors_are_machine_readable(argv, name, capsys):
    code, _, err = run(argv + ["-q"], capsys)
    assert code != 0
    payload = json.loads(err.strip().splitlines()[-1])
    assert payload["error"] == name and payload["message"]


def test_schema_is_checked(tmp_path, capsys):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"schema": 2, "command": "ep", "params": {"g": 0.5}}))
    code, _, err = run(["--config", str(path)], capsys)
    assert code == 2 and json.loads(err.strip().splitlines()[-1])["error"] == "invalid-argument"


def test_sweep_tightness_flags_ep(monkeypatch, capsys):
    argv = ["sweep-tightness", "--g", "1", "--kappa-range", "3.5:4.5:0.25", "-q"]
    monkeypatch.setenv("FEWPHOTON_MAX_WORKERS", "1")
    code, serial, _ = run(argv, capsys)
    monkeypatch.setenv("FEWPHOTON_MAX_WORKERS", "3")
    _, parallel, _ = run(argv, capsys)
    assert code == 0 and serial == parallel
    rows = list(csv.DictReader(io.StringIO(serial)))
    flagged = [r for r in rows if r["tail_argmax"] == "1"]
    assert [r["kappa"] for r in flagged] == ["4"]
    assert [r["kappa"] for r in rows if r["approach_argmax"] == "1"] == ["4"]


def test_bad_worker_env(monkeypatch, capsys):
    monkeypatch.setenv("FEWPHOTON_MAX_WORKERS", "zero")
    code, _, err = run(["sweep-tightness", "--g", "1", "--kappa-range", "3:4:1"], capsys)
    assert code == 2 and "FEWPHOTON_MAX_WORKERS" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fewphoton", "ep", "--g", "0.25", "-q"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.splitlines()[1].startswith("1,1,")


def test_range_grid_inclusive():
    assert list(range_grid("2:8:0.1"))[-1] == pytest.approx(8.0)
    assert len(range_grid("2:8:0.1")) == 61
    assert len(range_grid("0:0:1")) == 1


@settings(max_examples=200)
@given(st.floats(allow_nan=False, allow_infinity=False))
def test_number_format_round_trips(x):
    text = export.fmt(x)
    assert float(text) == pytest.approx(x, rel=1e-14, abs=0)
    assert "," not in text and "-0" != text


def test_csv_rows():
    text = export.csv_text(("a", "b"), [(1, -0.0), (True, 1 / 3)])
    assert text == "a,b\n1,0\n1,0.333333333333333\n"

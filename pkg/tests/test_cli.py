import json
import logging

import jsonschema
import numpy as np
import pytest

from geomsa.cli import (
    EXIT_DATA,
    EXIT_OK,
    EXIT_USAGE,
    DataError,
    RunManifest,
    UsageError,
    dumps_report,
    ingest_csv,
    main,
    report_schema,
    run,
    write_csv,
)
from geomsa.models import ModelSpec, generate_model
from geomsa.sensitivity import AnalysisConfig, analyze_dataset


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def test_ingest_header_order(tmp_path):
    p = _write(tmp_path / "d.csv", "b,y,a\n" + "\n".join(f"{i},{2 * i},{i % 3}" for i in range(12)) + "\n")
    x, y, names, dropped = ingest_csv(p, "y")
    assert names == ["b", "a"] and dropped == 0
    assert x.shape == (12, 2)
    assert y.tolist() == [2.0 * i for i in range(12)]


def test_ingest_drops_malformed_rows(tmp_path, caplog):
    rng = np.random.default_rng(0)
    rows = [f"{a},{b}" for a, b in rng.uniform(size=(1000, 2)).tolist()]
    rows[17] = "0.5,abc"
    rows[400] = ",0.25"
    p = _write(tmp_path / "d.csv", "x,y\n" + "\n".join(rows) + "\n")
    with caplog.at_level(logging.WARNING, logger="geomsa"):
        x, y, _, dropped = ingest_csv(p, "y")
    assert len(y) == 998 and dropped == 2
    assert "dropped 2" in caplog.text


def test_ingest_errors(tmp_path):
    with pytest.raises(DataError):
        ingest_csv(tmp_path / "missing.csv", "y")
    p = _write(tmp_path / "d.csv", "x,z\n" + "1,2\n" * 20)
    with pytest.raises(DataError):
        ingest_csv(p, "y")
    p = _write(tmp_path / "e.csv", "x,y\n" + "1,2\n" * 9)
    with pytest.raises(DataError):
        ingest_csv(p, "y")
    with pytest.raises(DataError):
        ingest_csv(_write(tmp_path / "f.csv", ""), "y")


def test_manifest_rules(tmp_path):
    with pytest.raises(UsageError):
        RunManifest()
    with pytest.raises(UsageError):
        RunManifest(input=tmp_path / "a.csv", model="linear")
    with pytest.raises(UsageError):
        RunManifest(model="linear", input_columns=("y",))
    with pytest.raises(UsageError):
        RunManifest(model="linear", input_columns=())
    with pytest.raises(UsageError):
        RunManifest(model="linear", render=frozenset({"bogus"}))
    with pytest.raises(UsageError):
        RunManifest(input=tmp_path / "a.csv", sobol_check=1000)
    with pytest.raises(UsageError):
        RunManifest(model="circle", sobol_check=1000)


def test_epsilon_overrides_quantile():
    cfg = RunManifest(model="linear", epsilon=0.1, quantile=0.3).config()
    assert cfg.epsilon == 0.1 and cfg.quantile is None


def test_csv_round_trip_equals_in_memory(tmp_path):
    data = generate_model(ModelSpec("ishigami", 300, 3))
    p = tmp_path / "ish.csv"
    write_csv(p, data.inputs, data.output, data.names)
    x, y, names, _ = ingest_csv(p, "y")
    assert (x == data.inputs).all() and (y == data.output).all()
    cfg = AnalysisConfig()
    assert analyze_dataset(x, y, cfg, names) == analyze_dataset(data.inputs, data.output, cfg, data.names)


def test_dumps_report_round_trips_floats():
    vals = [0.1, 1 / 3, 2.0**-40, 123456.789]
    back = json.loads(dumps_report({"v": vals}))
    assert back["v"] == vals
    with pytest.raises(ValueError):
        dumps_report({"v": float("nan")})


def test_run_writes_valid_report(tmp_path, capsys):
    out = tmp_path / "out"
    m = RunManifest(model="linear", n=200, seed=1, out_dir=out, render=frozenset({"complex", "symdiff"}))
    assert run(m) == EXIT_OK
    doc = json.loads((out / "report.json").read_text())
    jsonschema.validate(doc, report_schema())
    assert [r["variable"] for r in doc["results"]] == ["X1", "X2", "X3"]
    assert doc["provenance"]["seed"] == 1
    names = sorted(p.name for p in out.iterdir())
    assert names == sorted(["report.json"] + [f"X{k}_{s}.svg" for k in (1, 2, 3) for s in ("complex", "symdiff")])
    table = capsys.readouterr().out
    assert "rho_Geom" in table and "S_Geom" in table


def test_run_is_deterministic(tmp_path):
    kw = dict(model="circle", n=150, seed=4, render=frozenset({"complex", "reflection", "symdiff", "barcode"}))
    assert run(RunManifest(out_dir=tmp_path / "a", **kw)) == EXIT_OK
    assert run(RunManifest(out_dir=tmp_path / "b", **kw)) == EXIT_OK
    files = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert files == sorted(p.name for p in (tmp_path / "b").iterdir())
    for name in files:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_sobol_check_adds_column(tmp_path):
    out = tmp_path / "o"
    assert run(RunManifest(model="linear", n=100, out_dir=out, sobol_check=20_000)) == EXIT_OK
    doc = json.loads((out / "report.json").read_text())
    assert doc["results"][0]["sobol"] == pytest.approx(0.8, abs=0.05)


def test_data_error_leaves_no_output(tmp_path):
    p = _write(tmp_path / "bad.csv", "x,y\n" + "a,b\n" * 30)
    out = tmp_path / "o"
    assert run(RunManifest(input=p, out_dir=out)) == EXIT_DATA
    assert not out.exists() or not any(out.iterdir())


def test_main_exit_codes(tmp_path, capsys):
    assert main(["analyze", "--model", "linear", "--quantile", "2", "--out-dir", str(tmp_path)]) == EXIT_USAGE
    assert main(["analyze", "--input", str(tmp_path / "nope.csv"), "--out-dir", str(tmp_path)]) == EXIT_DATA
    with pytest.raises(SystemExit) as exc:
        main(["analyze"])
    assert exc.value.code == EXIT_USAGE
    capsys.readouterr()


def test_main_generate_then_analyze_with_epsilon(tmp_path):
    csv = tmp_path / "lin.csv"
    assert main(["generate", "--model", "linear", "--n", "120", "--seed", "2", "--out", str(csv)]) == EXIT_OK
    out = tmp_path / "o"
    rc = main(["analyze", "--input", str(csv), "--output-col", "y", "--epsilon", "0.1", "--out-dir", str(out)])
    assert rc == EXIT_OK
    doc = json.loads((out / "report.json").read_text())
    assert doc["provenance"]["epsilon"] == 0.1 and doc["provenance"]["quantile"] is None
    assert all(r["epsilon"] == 0.1 for r in doc["results"])


def test_main_input_cols(tmp_path):
    csv = tmp_path / "lin.csv"
    main(["generate", "--model", "linear", "--n", "80", "--out", str(csv)])
    out = tmp_path / "o"
    assert main(["analyze", "--input", str(csv), "--input-cols", "X2", "--out-dir", str(out)]) == EXIT_OK
    doc = json.loads((out / "report.json").read_text())
    assert [r["variable"] for r in doc["results"]] == ["X2"]


def test_barcode_command(tmp_path, capsys):
    out = tmp_path / "bc"
    rc = main(["barcode", "--model", "circle", "--n", "1000", "--seed", "1", "--max-points", "150", "--out-dir", str(out)])
    assert rc == EXIT_OK
    doc = json.loads((out / "barcode.json").read_text())
    x1 = doc["variables"][0]
    assert x1["variable"] == "X1" and x1["n_points"] == 150
    eps = x1["epsilon_max"]
    bars = sorted(
        ((iv["death"] if iv["death"] is not None else eps) - iv["birth"], iv["death"])
        for iv in x1["intervals"]
        if iv["dim"] == 1
    )
    # the annulus hole outlives the default cutoff and dwarfs every other loop
    assert bars[-1][1] is None and bars[-1][0] > 3 * bars[-2][0]
    assert all(d is not None for _, d in bars[:-1])
    assert (out / "X1_barcode.svg").exists() and (out / "X2_barcode.svg").exists()
    capsys.readouterr()

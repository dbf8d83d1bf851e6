import csv
import json
import subprocess
import sys

import pytest

from uncertain_conformance import _kernel
from uncertain_conformance.cli import (
    EXIT_EXPLOSION,
    EXIT_INCONSISTENT,
    EXIT_OK,
    EXIT_PARSE,
    main,
    read_log,
)
from uncertain_conformance.pnml import load_pnml
from uncertain_conformance.synth import generate_model
from uncertain_conformance.uncertain_log import realizations
from uncertain_conformance.xes_io import export_xes


@pytest.fixture
def generated(tmp_path):
    out = tmp_path / "gen"
    assert main(["gen", "--n", "5", "--traces", "6", "--p", "0.3", "--seed", "2", "--out", str(out)]) == EXIT_OK
    return out


def test_gen_writes_consistent_files(generated):
    assert load_pnml(generated / "model.pnml").labels == generate_model(5, 2).labels
    assert read_log(generated / "log.xes") == read_log(generated / "log.jsonl")
    assert len(read_log(generated / "log.xes")) == 6


def test_bounds_report(generated, tmp_path):
    rep = tmp_path / "rep.json"
    rc = main(["bounds", "--log", str(generated / "log.jsonl"), "--model", str(generated / "model.pnml"),
               "--out", str(rep)])
    assert rc == EXIT_OK
    data = json.loads(rep.read_text())
    assert data["totals"]["completed"] == 6
    assert data["totals"]["lower_total"] == sum(r["lower"] for r in data["traces"])
    log = read_log(generated / "log.jsonl")
    for row, trace in zip(data["traces"], log):
        assert row["lower"] <= row["upper"]
        assert tuple(row["lower_witness"]) in realizations(trace)
    with open(rep.with_suffix(".csv")) as fh:
        rows = list(csv.DictReader(fh))
    assert [r["case_id"] for r in rows] == [t.case_id for t in log]


def test_bounds_stdout(generated, capsys):
    rc = main(["bounds", "--log", str(generated / "log.xes"), "--model", str(generated / "model.pnml")])
    assert rc == EXIT_OK
    assert json.loads(capsys.readouterr().out)["totals"]["traces"] == 6


def test_bounds_explosion_isolated(tmp_path, example_trace):
    from uncertain_conformance.pnml import save_pnml
    from uncertain_conformance.uncertain_log import certain_trace

    (tmp_path / "l.xes").write_text(export_xes([example_trace, certain_trace("AB", "ok")]))
    save_pnml(generate_model(4, 0), tmp_path / "m.pnml")
    rc = main(["bounds", "--log", str(tmp_path / "l.xes"), "--model", str(tmp_path / "m.pnml"),
               "--cap", "5", "--out", str(tmp_path / "r.json")])
    assert rc == EXIT_EXPLOSION
    rows = json.loads((tmp_path / "r.json").read_text())["traces"]
    assert rows[0]["error"].startswith("explosion") and rows[0]["lower"] is not None
    assert rows[1]["error"] is None and rows[1]["upper"] is not None


def test_parse_errors(tmp_path, generated, capsys):
    bad = tmp_path / "bad.xes"
    bad.write_text("<log><trace>")
    assert main(["bounds", "--log", str(bad), "--model", str(generated / "model.pnml")]) == EXIT_PARSE
    assert main(["bounds", "--log", str(tmp_path / "missing.xes"), "--model", str(generated / "model.pnml")]) == EXIT_PARSE
    bad_net = tmp_path / "bad.pnml"
    bad_net.write_text("<pnml>")
    assert main(["bounds", "--log", str(generated / "log.xes"), "--model", str(bad_net)]) == EXIT_PARSE
    assert "error:" in capsys.readouterr().err


def test_inconsistency_exit_code(monkeypatch, tmp_path):
    import uncertain_conformance.experiments as ex

    real = ex.lower_bound
    monkeypatch.setattr(ex, "lower_bound", lambda *a, **k: real(*a, **k)._replace(cost=-1))
    rc = main(["sweep", "--n", "4", "--traces", "3", "--p", "0.2", "--out", str(tmp_path / "s.csv")])
    assert rc == EXIT_INCONSISTENT


def test_sweep_and_perf_csv(tmp_path):
    s = tmp_path / "s.csv"
    assert main(["sweep", "--n", "5", "--traces", "8", "--p", "0,0.3", "--seed", "1", "--out", str(s)]) == EXIT_OK
    rows = list(csv.DictReader(open(s)))
    assert [r["p"] for r in rows] == ["0", "0.3"]
    assert rows[0]["lower_total"] == rows[0]["upper_total"]
    first = s.read_text()
    main(["sweep", "--n", "5", "--traces", "8", "--p", "0,0.3", "--seed", "1", "--out", str(s)])
    assert s.read_text() == first
    pf = tmp_path / "p.csv"
    assert main(["perf", "--n", "3,4", "--traces", "5", "--out", str(pf)]) == EXIT_OK
    assert [r["n"] for r in csv.DictReader(open(pf))] == ["3", "4"]


def test_convert_round_trip(generated, tmp_path):
    j = tmp_path / "c.jsonl"
    x = tmp_path / "c.xes"
    assert main(["convert", "--log", str(generated / "log.xes"), "--out", str(j)]) == EXIT_OK
    assert main(["convert", "--log", str(j), "--out", str(x)]) == EXIT_OK
    assert x.read_text() == (generated / "log.xes").read_text()


def test_convert_weak(tmp_path):
    from test_xes_io import WEAK

    src = tmp_path / "w.xes"
    src.write_text(WEAK)
    out = tmp_path / "w.jsonl"
    assert main(["convert", "--weak", "--log", str(src), "--out", str(out)]) == EXIT_OK
    (trace,) = read_log(out)
    assert [e.event_id for e in trace] == ["e1", "e2", "e5"]


def test_kernel_flag_and_entry_point(generated, monkeypatch):
    monkeypatch.setattr(_kernel, "DEFAULT", _kernel.DEFAULT)
    assert main(["--kernel", "python", "bounds", "--log", str(generated / "log.xes"),
                 "--model", str(generated / "model.pnml")]) == EXIT_OK
    assert _kernel.DEFAULT == "python"
    proc = subprocess.run([sys.executable, "-m", "uncertain_conformance.cli", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "bounds" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "uncertain_conformance.cli", "bogus"], capture_output=True, text=True)
    assert proc.returncode == 2

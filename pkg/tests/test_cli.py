import csv
import json

import pytest

from sgmine.cli import main
from sgmine.serialize import load_model

from helpers import DATA, EXAMPLE_TEXT

LOG = str(DATA / "example.log")


@pytest.fixture(autouse=True)
def _serial(monkeypatch):
    monkeypatch.setenv("SGMINE_THREADS", "1")


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_discover_writes_running_sdfa(tmp_path, capsys):
    out = tmp_path / "m.json"
    code, stdout, _ = _run(capsys, "discover", "--log", LOG, "--omega", "11", "--t", "1", "--f", "0.89", "--out", str(out))
    assert code == 0
    summary = json.loads(stdout)
    assert summary["size"] == 16 and summary["states"] == 5
    assert summary["relevance"] == pytest.approx(3.275, abs=0.01)
    assert len(load_model(out)) == 5


@pytest.mark.parametrize("fmt, head", [("sdag-json", "{"), ("dot", "digraph")])
def test_discover_formats(tmp_path, capsys, fmt, head):
    out = tmp_path / "m.out"
    code, _, _ = _run(capsys, "discover", "--log", LOG, "--omega", "11", "--f", "0.89", "--out", str(out), "--format", fmt)
    assert code == 0
    assert out.read_text().lstrip().startswith(head)


def test_discover_xes(tmp_path, capsys):
    from sgmine.eventlog import parse_log, serialize_xes

    xes = tmp_path / "log.xes"
    xes.write_text(serialize_xes(parse_log(EXAMPLE_TEXT)))
    code, stdout, _ = _run(capsys, "discover", "--log", str(xes), "--omega", "11", "--f", "0.89", "--out", str(tmp_path / "m.json"))
    assert code == 0 and json.loads(stdout)["size"] == 16


def test_score_count_dfg(capsys):
    code, stdout, _ = _run(capsys, "score", "--log", LOG, "--model", str(DATA / "count_dfg.json"))
    assert code == 0
    report = json.loads(stdout.splitlines()[0])
    assert report["bits_per_trace"] == pytest.approx(4.168, abs=0.01)
    assert "bits per trace" in stdout.splitlines()[1]


def test_convert_chain(tmp_path, capsys):
    sdag, dfg, sfa = tmp_path / "g.json", tmp_path / "d.json", tmp_path / "s.json"
    example_sdfa = str(DATA / "example_sdfa.json")
    assert main(["convert", "--in", example_sdfa, "--to", "sdag", "--out", str(sdag)]) == 0
    assert main(["convert", "--in", str(sdag), "--to", "dfg", "--out", str(dfg)]) == 0
    assert main(["convert", "--in", str(dfg), "--to", "sfa", "--out", str(sfa)]) == 0
    assert len(load_model(sdag).labels) == 5
    assert sorted(load_model(dfg).labels.values()) == ["a", "b", "c", "e"]
    assert len(load_model(sfa)) == 5


def test_annotate_and_export(tmp_path, capsys):
    example_sdfa = str(DATA / "example_sdfa_exact.json")
    dfg = tmp_path / "d.json"
    ann = tmp_path / "a.json"
    main(["convert", "--in", example_sdfa, "--to", "dfg", "--out", str(dfg)])
    assert main(["annotate", "--in", str(dfg), "--cases", "1493", "--out", str(ann)]) == 0
    data = json.loads(ann.read_text())
    assert data["cases"] == 1493
    assert sorted(round(a["freq"], 1) for a in data["arcs"])[0] == 51.9
    # frequencies read back give the same probabilities
    back = load_model(ann)
    orig = load_model(dfg)
    for k, p in orig.arcs.items():
        assert back.arcs[k] == pytest.approx(p, abs=1e-9)
    dot = tmp_path / "a.dot"
    assert main(["export", "--in", str(dfg), "--out", str(dot), "--cases", "1493"]) == 0
    assert "1239.3" in dot.read_text()


def test_search_outputs(tmp_path, capsys):
    args = ["search", "--log", LOG, "--pop", "20", "--gens", "10", "--parents", "4", "--seed", "7"]
    code, stdout, _ = _run(capsys, *args, "--out-dir", str(tmp_path / "a"), "--lineage-experiment")
    assert code == 0
    summary = json.loads(stdout)
    assert any(s == 16 and r <= 3.28 for s, r in summary["frontier"])
    with open(tmp_path / "a" / "frontier.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert {r["ever_good"] for r in rows} == {"1"}
    assert (tmp_path / "a" / "lineage.csv").exists()
    assert list((tmp_path / "a").glob("model_size16_rel3.2*.json"))
    _run(capsys, *args, "--out-dir", str(tmp_path / "b"), "--lineage-experiment")
    for name in ("frontier.csv", "history.csv", "lineage.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["discover", "--log", LOG],
        ["search", "--log", LOG, "--out-dir", "x"],
        ["search", "--log", LOG, "--out-dir", "x", "--parents", "1"],
        ["convert", "--in", "x", "--to", "nope", "--out", "y"],
        ["frobnicate"],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["discover", "--log", "/nonexistent.log", "--omega", "1", "--out", "/tmp/x.json"],
        ["discover", "--log", LOG, "--omega", "-1", "--out", "/tmp/x.json"],
        ["score", "--log", LOG, "--model", "/nonexistent.json"],
    ],
)
def test_data_errors(argv, capsys):
    assert main(argv) == 2


def test_bad_log_is_data_error(tmp_path, capsys):
    bad = tmp_path / "bad.log"
    bad.write_text("x;a\n")
    code, _, err = _run(capsys, "score", "--log", str(bad), "--model", str(DATA / "count_dfg.json"))
    assert code == 2 and "line 1" in err


def test_sfa_of_nondeterministic_is_data_error(tmp_path, capsys):
    g = tmp_path / "nd.json"
    g.write_text(json.dumps({
        "nodes": [{"id": 1, "label": "a"}, {"id": 2, "label": "a"}],
        "arcs": [
            {"from": "i", "to": 1, "prob": 0.5}, {"from": "i", "to": 2, "prob": 0.5},
            {"from": 1, "to": "o", "prob": 1.0}, {"from": 2, "to": "o", "prob": 1.0},
        ],
    }))
    assert main(["convert", "--in", str(g), "--to", "sfa", "--out", str(tmp_path / "o.json")]) == 2

import hashlib
import json

import pytest

from svcdisco.cli import main
from svcdisco.registry import Registry
from svcdisco.taxonomy import category_universe

ALL = ",".join(category_universe())


def _digest(directory):
    h = hashlib.sha256()
    for p in sorted(directory.iterdir()):
        h.update(p.name.encode() + p.read_bytes())
    return h.hexdigest()


@pytest.fixture
def corpus_registry(tmp_path, capsys):
    assert main(["generate", "--size", "60", "--seed", "3", "--out", str(tmp_path / "c")]) == 0
    reg = tmp_path / "reg.jsonl"
    assert main(["register", "--registry", str(reg), "--corpus", str(tmp_path / "c")]) == 0
    capsys.readouterr()
    return reg


def test_model_tsp_limit(capsys):
    assert main(["model", "tsp", "--x", "0", "--y", "100"]) == 0
    assert capsys.readouterr().out.strip() == "1.0"


def test_model_tsp_ratio_json(capsys):
    assert main(["model", "tsp", "--x", "8", "--y", "92", "--ratio", "9", "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["tsp_exact"] == "207/227"
    assert out["saving"] == 92 * 9


def test_model_curve(tmp_path):
    assert main(["model", "curve", "--points", "5", "--out", str(tmp_path / "c.csv")]) == 0
    assert (tmp_path / "c.csv").read_text().splitlines()[0] == "coverage,tsp"


def test_model_errors(capsys):
    assert main(["model", "tsp", "--x", "0", "--y", "0"]) == 1
    assert "costmodel" in capsys.readouterr().err


def test_usage_errors(capsys):
    assert main(["frobnicate"]) == 2
    assert main(["search", "--registry", "r"]) == 2
    assert main(["model", "tsp", "--x", "1", "--y", "1", "--bogus"]) == 2
    assert "usage" in capsys.readouterr().err


def test_generate_is_deterministic(tmp_path, capsys):
    for d in ("a", "b"):
        assert main(["generate", "--size", "100", "--seed", "7", "--out", str(tmp_path / d)]) == 0
    assert _digest(tmp_path / "a") == _digest(tmp_path / "b")


def test_register_single_wsdl(tmp_path, fixtures_dir, capsys):
    reg = tmp_path / "r.jsonl"
    args = ["register", "--registry", str(reg), "--wsdl", str(fixtures_dir / "weather_notify.wsdl")]
    assert main(args + ["--class", "Notifying,Free,Unlimited"]) == 0
    assert "020101" in capsys.readouterr().out
    assert main(args + ["--class", "Notifying,Free,Unlimited"]) == 1
    assert "registry" in capsys.readouterr().err
    assert main(args + ["--class", "Notifying,Free,Subscription"]) == 1
    assert main(args) == 1
    assert len(Registry.load(reg)) == 1


def test_register_bad_wsdl(tmp_path, capsys):
    bad = tmp_path / "bad.wsdl"
    bad.write_text("<definitions")
    assert main(["register", "--registry", str(tmp_path / "r"), "--wsdl", str(bad), "--class", "Collective,Free,Limited"]) == 1
    assert "wsdl" in capsys.readouterr().err


def test_search_all_categories(corpus_registry, capsys):
    assert main(["search", "--registry", str(corpus_registry), "--q", "weather", "--select", ALL]) == 0
    out = capsys.readouterr().out
    assert "x=60 y=0" in out
    assert "nf_ops=60" in out


def test_search_scan_vs_indexed(corpus_registry, capsys):
    base = ["search", "--registry", str(corpus_registry), "--q", "weather forecast", "--select", "Notifying", "--json"]
    main(base + ["--scan"])
    scan = json.loads(capsys.readouterr().out)
    main(base + ["--indexed"])
    idx = json.loads(capsys.readouterr().out)
    assert [h["record_id"] for h in scan["hits"]] == [h["record_id"] for h in idx["hits"]]
    assert scan["x"] == idx["x"] and scan["disc_ops"] == idx["disc_ops"]
    assert idx["nf_ops"] <= 4


def test_search_bad_selection(corpus_registry, capsys):
    assert main(["search", "--registry", str(corpus_registry), "--q", "weather", "--select", "Cheap"]) == 1
    assert "discovery" in capsys.readouterr().err


def test_bench_command(tmp_path, capsys):
    cfg = {"sizes": [50], "repetitions": 1, "padding_unit_ns": 0, "seed": 2}
    (tmp_path / "cfg.json").write_text(json.dumps(cfg))
    args = ["bench", "--config", str(tmp_path / "cfg.json"), "--out", str(tmp_path / "r.csv")]
    assert main(args + ["--corpus-root", str(tmp_path / "corp"), "--dat", str(tmp_path / "r.dat")]) == 0
    assert len((tmp_path / "r.csv").read_text().splitlines()) == 5
    assert (tmp_path / "r.dat").exists()

"""Integration with the retrieval engine through its external interfaces
only: the sidecar serves vectors over TCP while the engine's CLI runs the
synthetic-bundle pipeline end to end with --encoder remote. No quality
threshold - the check is that the seam works and the report is valid."""

import json
import subprocess
import sys

import pytest

from embedsvc import ServiceConfig, serve_background


def run_cli(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "entityhop.cli", *args],
        capture_output=True,
        text=True,
        timeout=300,
    )
    assert proc.returncode == 0, f"entityhop {' '.join(args)}\n{proc.stderr}"
    return proc


@pytest.fixture(scope="module")
def service():
    srv = serve_background(ServiceConfig(port=0, dim=32))
    yield srv.endpoint
    srv.shutdown()
    srv.server_close()


def test_remote_entity_hop_end_to_end(service, tmp_path):
    pytest.importorskip("entityhop")
    bundle = tmp_path / "bundle"
    run_cli("synth", "--out-dir", str(bundle), "--entities", "80", "--distractors", "40",
            "--questions", "16", "--vocab-size", "220", "--seed", "21")
    corpus = str(bundle / "corpus.jsonl")
    questions = str(bundle / "questions.jsonl")
    index = str(tmp_path / "index.bin")
    alias = str(tmp_path / "alias.json")
    model = str(tmp_path / "model.json")
    rankings = str(tmp_path / "hop.jsonl")

    run_cli("index", "--corpus", corpus, "--out", index)
    run_cli("alias", "--corpus", corpus, "--links", str(bundle / "links.jsonl"),
            "--out", alias)
    run_cli("train", "--index", index, "--corpus", corpus, "--questions", questions,
            "--alias", alias, "--out", model, "--log", str(tmp_path / "log.csv"),
            "--epochs", "30", "--seed", "5",
            "--encoder", "remote", "--endpoint", service)
    meta = json.loads(open(model).read())
    assert meta["encoder"] == "remote/32"
    assert meta["in_dim"] == 64  # chain head concatenates two remote vectors

    run_cli("retrieve", "--mode", "entity-hop", "--index", index, "--corpus", corpus,
            "--questions", questions, "--alias", alias, "--model", model,
            "--out", rankings, "--k", "20",
            "--encoder", "remote", "--endpoint", service)
    rows = [json.loads(l) for l in open(rankings)]
    assert len(rows) == 16
    for row in rows:
        assert row["ranking"], "empty ranking"
        scores = [r["score"] for r in row["ranking"]]
        assert scores == sorted(scores, reverse=True)

    run_cli("eval", "--questions", questions, "--run", f"remote-hop={rankings}",
            "--out-prefix", str(tmp_path / "report"))
    report = json.loads((tmp_path / "report.json").read_text())
    row = report[0]
    assert row["system"] == "remote-hop"
    for key in ("acc@2", "acc@5", "acc@10", "acc@20", "map"):
        assert 0.0 <= row[key] <= 1.0


def test_remote_rejects_without_endpoint(tmp_path):
    pytest.importorskip("entityhop")
    bundle = tmp_path / "bundle"
    run_cli("synth", "--out-dir", str(bundle), "--entities", "30", "--distractors", "10",
            "--questions", "4", "--vocab-size", "150", "--seed", "3")
    index = str(tmp_path / "index.bin")
    run_cli("index", "--corpus", str(bundle / "corpus.jsonl"), "--out", index)
    proc = subprocess.run(
        [sys.executable, "-m", "entityhop.cli", "train", "--index", index,
         "--corpus", str(bundle / "corpus.jsonl"),
         "--questions", str(bundle / "questions.jsonl"),
         "--alias", str(tmp_path / "missing.json"),
         "--out", str(tmp_path / "m.json"), "--encoder", "remote"],
        capture_output=True, text=True, timeout=60,
        env={"PATH": "/usr/bin:/bin", "PYTHONPATH": ""},
    )
    assert proc.returncode == 2
    assert "endpoint" in proc.stderr.lower()


def test_remote_encoder_error_exit_code(service, tmp_path):
    # Point the CLI at a port with no listener: exit code 3, never silent.
    pytest.importorskip("entityhop")
    bundle = tmp_path / "bundle"
    run_cli("synth", "--out-dir", str(bundle), "--entities", "30", "--distractors", "10",
            "--questions", "4", "--vocab-size", "150", "--seed", "3")
    index = str(tmp_path / "index.bin")
    alias = str(tmp_path / "alias.json")
    corpus = str(bundle / "corpus.jsonl")
    run_cli("index", "--corpus", corpus, "--out", index)
    run_cli("alias", "--corpus", corpus, "--links", str(bundle / "links.jsonl"), "--out", alias)
    proc = subprocess.run(
        [sys.executable, "-m", "entityhop.cli", "train", "--index", index,
         "--corpus", corpus, "--questions", str(bundle / "questions.jsonl"),
         "--alias", alias, "--out", str(tmp_path / "m.json"),
         "--encoder", "remote", "--endpoint", "127.0.0.1:9"],
        capture_output=True, text=True, timeout=60,
    )
    assert proc.returncode == 3
    assert "remote encoder error" in proc.stderr

"""Command-line surface: every subcommand, defaults, and the serve
ready line over a real subprocess."""

import json
import socket
import subprocess
import sys

import pytest

from phishmon.cli import main


def test_classify_defaults(capsys):
    assert main(["classify"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert len(rows) == 12
    assert [r["label"] for r in rows].count("yes") == 8
    assert rows[0]["keyword"] == "favorit food"
    assert all("rule_id" in r for r in rows)


def test_mine_defaults(capsys):
    assert main(["mine"]) == 0
    rules = json.loads(capsys.readouterr().out)
    assert len(rules) == 149
    assert all(r["origin"] == "mined" for r in rules)


def test_train_exports_full_rule_list(capsys):
    assert main(["train"]) == 0
    rules = json.loads(capsys.readouterr().out)
    assert len(rules) == 157
    assert rules[0]["origin"] == "seeded"


def test_train_custom_thresholds(capsys, data_dir):
    # at min-conf 1.0 the 3/4-confidence harmless rule disappears
    assert (
        main(
            [
                "train",
                "--prdb",
                str(data_dir / "prdb.csv"),
                "--rules",
                str(data_dir / "prdb_rules.json"),
                "--min-conf",
                "1.0",
            ]
        )
        == 0
    )
    rules = json.loads(capsys.readouterr().out)
    assert all(r["confidence"] == 1.0 for r in rules if r["origin"] == "mined")
    assert len(rules) < 157


def test_replay_defaults(capsys):
    assert main(["replay"]) == 0
    out = capsys.readouterr().out
    assert "true positives     10" in out
    payload = json.loads(out[out.index("{") :])
    assert payload["tp"] == 10
    assert payload["precision_pct"] == "100.00"
    assert len(payload["alerts"]) == 11


def test_replay_synthetic(capsys, data_dir):
    assert (
        main(
            [
                "replay",
                "--transcript",
                str(data_dir / "synthetic_transcripts.jsonl"),
                "--truth",
                str(data_dir / "synthetic_ground_truth.json"),
            ]
        )
        == 0
    )
    out = capsys.readouterr().out
    payload = json.loads(out[out.index("{") :])
    assert (payload["tp"], payload["fp"], payload["fn"]) == (5, 1, 3)
    assert payload["recall_pct"] == "62.50"


def test_unknown_subcommand_exits_nonzero():
    with pytest.raises(SystemExit):
        main(["frobnicate"])


def test_serve_ready_line_and_join(tmp_path):
    proc = subprocess.Popen(
        [
            sys.executable,
            "-m",
            "phishmon.cli",
            "serve",
            "--port",
            "0",
            "--stores-dir",
            str(tmp_path),
        ],
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
        text=True,
    )
    try:
        line = proc.stdout.readline()
        info = json.loads(line)
        assert info["event"] == "ready"
        assert info["tcp_port"] > 0 and info["ws_port"] > 0

        with socket.create_connection(("127.0.0.1", info["tcp_port"]), timeout=5) as s:
            s.sendall(b'{"type":"join","session":"x","who":"a"}\n')
            reply = json.loads(s.makefile().readline())
            assert reply == {"type": "joined", "session": "x", "who": "a"}
    finally:
        proc.terminate()
        proc.wait(timeout=10)

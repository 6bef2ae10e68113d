"""Store-layer behavior: append-only journals with one shared sequence,
durability across reopen, and capped per-pair occurrence counters."""

import json

import pytest

from phishmon.stores import FWDB, MDB, PWDB, THRESHOLD_CAP, Stores


def mdb_payload(seq=1, text="hello"):
    return {
        "session_id": "s",
        "seq": seq,
        "sender": "a",
        "text": text,
        "ts": 0,
    }


def fwdb_payload(stem="password", threshold=1):
    return {
        "session_id": "s",
        "seq": 1,
        "scope": "a|b",
        "stem": stem,
        "threshold": threshold,
    }


def test_seeds_fresh_directory(tmp_path):
    with Stores(tmp_path) as stores:
        assert stores.prdb_csv.exists()
        assert stores.prdb_rules.exists()
        lexicon = stores.lexicon()
        assert "password" in lexicon.terms("fame and notoriety")
    assert (tmp_path / "odb" / "financial_gain.txt").exists()


def test_append_assigns_global_monotonic_seq(tmp_path):
    with Stores(tmp_path) as stores:
        first = stores.append(MDB, mdb_payload())
        second = stores.append(FWDB, fwdb_payload())
        third = stores.append(PWDB, {"stem": "password", "domain": "fame and notoriety"})
        assert [first, second, third] == sorted([first, second, third])
        assert len({first, second, third}) == 3


def test_append_validates(tmp_path):
    with Stores(tmp_path) as stores:
        with pytest.raises(ValueError):
            stores.append("nope", {"x": 1})
        with pytest.raises(ValueError):
            stores.append(MDB, {"session_id": "s"})


def test_scan_filters_and_orders(tmp_path):
    with Stores(tmp_path) as stores:
        stores.append(MDB, mdb_payload(seq=1, text="one"))
        stores.append(MDB, mdb_payload(seq=2, text="two"))
        stores.append(FWDB, fwdb_payload())
        rows = stores.scan(MDB)
        assert [r["text"] for r in rows] == ["one", "two"]
        assert stores.scan(MDB, seq=2)[0]["text"] == "two"
        assert stores.scan(FWDB, stem="password")
        assert stores.scan(FWDB, stem="nothere") == []
        with pytest.raises(ValueError):
            stores.scan("nope")


def test_durability_across_reopen(tmp_path):
    with Stores(tmp_path) as stores:
        stores.append(MDB, mdb_payload(seq=1))
        last = stores.append(MDB, mdb_payload(seq=2))
    with Stores(tmp_path) as stores:
        rows = stores.scan(MDB)
        assert len(rows) == 2
        # the shared counter resumes past what was journaled
        assert stores.append(MDB, mdb_payload(seq=3)) > last
        assert len(stores.scan(MDB)) == 3


def test_journal_is_json_lines(tmp_path):
    with Stores(tmp_path) as stores:
        stores.append(MDB, mdb_payload())
    lines = (tmp_path / "mdb.jsonl").read_text().splitlines()
    assert len(lines) == 1
    row = json.loads(lines[0])
    assert row["text"] == "hello"
    assert "_seq" in row


def test_bump_threshold_counts_and_caps(tmp_path):
    with Stores(tmp_path) as stores:
        got = [stores.bump_threshold("a|b", "dob") for _ in range(8)]
        assert got == [1, 2, 3, 4, 5, 5, 5, 5]
        assert stores.threshold("a|b", "dob") == THRESHOLD_CAP
        # scoping is per pair and per stem
        assert stores.threshold("a|c", "dob") == 0
        assert stores.bump_threshold("a|b", "cap") == 1


def test_threshold_rebuilt_from_fwdb(tmp_path):
    with Stores(tmp_path) as stores:
        stores.bump_threshold("a|b", "dob")
        stores.bump_threshold("a|b", "dob")
        stores.append(FWDB, fwdb_payload(stem="dob", threshold=2))
    with Stores(tmp_path) as stores:
        # counter state comes back from the journaled findings
        assert stores.threshold("a|b", "dob") == 2
        assert stores.bump_threshold("a|b", "dob") == 3


def test_odb_append_persists_and_canonicalizes(tmp_path):
    with Stores(tmp_path) as stores:
        stores.odb_append("eatables", "chocolates")
        assert "chocol" in stores.lexicon().terms("eatables")
    with Stores(tmp_path) as stores:
        assert "chocol" in stores.lexicon().terms("eatables")
    text = (tmp_path / "odb" / "eatables.txt").read_text()
    assert "chocol" in text.split()


def test_odb_append_new_domain_file(tmp_path):
    with Stores(tmp_path) as stores:
        stores.odb_append("board games", "chess")
        assert (tmp_path / "odb" / "board_games.txt").exists()
        assert "chess" in stores.lexicon().terms("board games")


def test_odb_append_validates(tmp_path):
    with Stores(tmp_path) as stores:
        with pytest.raises(ValueError):
            stores.odb_append("eatables", "  ")
        with pytest.raises(ValueError):
            stores.odb_append("", "chess")


def test_existing_data_not_reseeded(tmp_path):
    with Stores(tmp_path) as stores:
        stores.odb_append("eatables", "chocolates")
    # reopening must not clobber learned vocabulary with packaged data
    with Stores(tmp_path) as stores:
        assert "chocol" in stores.lexicon().terms("eatables")

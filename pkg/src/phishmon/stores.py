"""Append-only persistent stores.

One directory holds everything: ``mdb.jsonl`` (messages), ``fwdb.jsonl``
(filtered keywords with attributes), ``pwdb.jsonl`` (detected phish
words), ``odb/`` (one lexicon file per domain), and the training pair
``prdb.csv`` + ``prdb_rules.json``. A fresh directory is seeded from the
packaged copies. Records are JSON objects, one per line, carrying a
``_seq`` drawn from a single counter shared by the three JSONL stores,
so cross-store write order is observable. Threshold counters are not a
separate file: they are rebuilt from FWDB records on open.
"""

from __future__ import annotations

import json
import os
from importlib import resources
from pathlib import Path

from .extraction import OntologyLexicon
from .textprep import canonical

MDB = "mdb"
FWDB = "fwdb"
PWDB = "pwdb"

THRESHOLD_CAP = 5

_REQUIRED = {
    MDB: ("session_id", "seq", "sender", "text", "ts"),
    FWDB: ("session_id", "seq", "scope", "stem", "threshold"),
    PWDB: ("stem", "domain"),
}


def _seed_tree(root: Path) -> None:
    data = resources.files("phishmon").joinpath("data")
    for name in ("prdb.csv", "prdb_rules.json"):
        target = root / name
        if not target.exists():
            target.write_bytes(data.joinpath(name).read_bytes())
    odb = root / "odb"
    odb.mkdir(exist_ok=True)
    for entry in data.joinpath("odb").iterdir():
        if entry.name.endswith(".txt"):
            target = odb / entry.name
            if not target.exists():
                target.write_bytes(entry.read_bytes())


class Stores:
    """Single-writer store set rooted at one directory."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        _seed_tree(self.root)
        self._files = {}
        self._next_seq = 1
        self._thresholds: dict[tuple[str, str], int] = {}
        for store in (MDB, FWDB, PWDB):
            path = self.root / f"{store}.jsonl"
            if path.exists():
                for record in self._read(path):
                    self._next_seq = max(self._next_seq, record["_seq"] + 1)
                    if store == FWDB:
                        key = (record["scope"], record["stem"])
                        count = record["threshold"]
                        if count > self._thresholds.get(key, 0):
                            self._thresholds[key] = count
            self._files[store] = open(path, "a", encoding="utf-8")

    @staticmethod
    def _read(path: Path) -> list[dict]:
        records = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    records.append(json.loads(line))
        return records

    def append(self, store: str, payload: dict) -> int:
        if store not in _REQUIRED:
            raise ValueError(f"unknown store {store!r}")
        missing = [f for f in _REQUIRED[store] if f not in payload]
        if missing:
            raise ValueError(f"{store} record missing fields: {missing}")
        seq = self._next_seq
        record = {"_seq": seq, **payload}
        fh = self._files[store]
        fh.write(json.dumps(record, ensure_ascii=False) + "\n")
        fh.flush()
        os.fsync(fh.fileno())
        self._next_seq = seq + 1
        return seq

    def scan(self, store: str, **filters) -> list[dict]:
        if store not in _REQUIRED:
            raise ValueError(f"unknown store {store!r}")
        self._files[store].flush()
        records = self._read(self.root / f"{store}.jsonl")
        out = []
        for record in records:
            if all(record.get(k) == v for k, v in filters.items()):
                out.append(record)
        out.sort(key=lambda r: r["_seq"])
        return out

    def bump_threshold(self, scope: str, stem: str) -> int:
        key = (scope, stem)
        count = min(self._thresholds.get(key, 0) + 1, THRESHOLD_CAP)
        self._thresholds[key] = count
        return count

    def threshold(self, scope: str, stem: str) -> int:
        return self._thresholds.get((scope, stem), 0)

    # --- ODB -------------------------------------------------------------

    @property
    def odb_dir(self) -> Path:
        return self.root / "odb"

    def lexicon(self) -> OntologyLexicon:
        return OntologyLexicon.load(self.odb_dir)

    def odb_append(self, domain: str, term: str) -> None:
        term = canonical(term)
        if not term:
            raise ValueError("cannot store an empty lexicon term")
        name = domain.strip().lower().replace(" ", "_")
        if not name:
            raise ValueError("cannot store a term under an unnamed domain")
        path = self.odb_dir / f"{name}.txt"
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(term + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    # --- PRDB ------------------------------------------------------------

    @property
    def prdb_csv(self) -> Path:
        return self.root / "prdb.csv"

    @property
    def prdb_rules(self) -> Path:
        return self.root / "prdb_rules.json"

    def close(self) -> None:
        for fh in self._files.values():
            fh.close()
        self._files = {}

    def __enter__(self) -> "Stores":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

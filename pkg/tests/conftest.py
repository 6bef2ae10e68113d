import pathlib

import pytest

from phishmon import cba

DATA = pathlib.Path(__file__).resolve().parents[1] / "src" / "phishmon" / "data"


@pytest.fixture(scope="session")
def data_dir() -> pathlib.Path:
    return DATA


@pytest.fixture(scope="session")
def records():
    return cba.load_training(DATA / "prdb.csv")


@pytest.fixture(scope="session")
def classifier():
    return cba.train(DATA / "prdb.csv", DATA / "prdb_rules.json")


@pytest.fixture(scope="session")
def instances():
    return cba.load_instances(DATA / "test_instances.csv")

import json

import pytest

from catalog_store import CatalogStore
from errors import UsageError

PAIRS = [((0, 0, 0, 1, 1, 3), (1, 0, 3, 0, 2, 0)), ((0, 0, 1, 2, 0, 1), (0, 0, 0, 2, 0, 0))]


@pytest.fixture
def store(tmp_path):
    return CatalogStore(str(tmp_path))


@pytest.mark.parametrize("fmt", ["json", "csv"])
def test_pairs_roundtrip(store, fmt):
    path = store.write_pairs("K", PAIRS, fmt)
    assert path.suffix == (".csv" if fmt == "csv" else ".jsonl")
    assert store.read_pairs(str(path)) == PAIRS


def test_tuples_csv_has_header(store):
    path = store.write_tuples("snec", [(0, 0, 0, 1, 1, 3)], "csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "x1,x2,x3,x4,x5,x6"
    assert lines[1] == "0,0,0,1,1,3"


def test_catalog_csv_roundtrip(store):
    records = [
        {"eta": [0, 0, 0, 1, 1, 3], "zeta": [1, 0, 3, 0, 2, 0], "status": "found",
         "r": "0.5", "s": "0.2", "digits": 40, "margin": "0.01"},
        {"eta": [0, 0, 1, 2, 0, 1], "zeta": [0, 0, 0, 2, 0, 0], "status": "none",
         "r": None, "s": None, "digits": 40, "margin": None},
    ]
    path = store.write_catalog("L", records, "csv")
    back = store.read_catalog(str(path))
    assert back[0]["eta"] == [0, 0, 0, 1, 1, 3]
    assert back[0]["r"] == "0.5"
    assert back[1]["r"] is None
    assert back[1]["digits"] == 40


def test_catalog_jsonl_is_deterministic(store):
    records = [{"eta": [0] * 6, "zeta": [0] * 6, "status": "none"}]
    first = store.write_catalog("L", records).read_bytes()
    second = store.write_catalog("L", records).read_bytes()
    assert first == second


def test_ledger_filters_by_action(store):
    store.append_ledger("merged", *PAIRS[0], {"other": [1, 2]})
    store.append_ledger("dispute", *PAIRS[1], {"reason": "no exact form"})
    assert len(store.read_ledger()) == 2
    disputes = store.read_ledger("dispute")
    assert len(disputes) == 1
    assert disputes[0]["zeta"] == [0, 0, 0, 2, 0, 0]
    assert disputes[0]["reason"] == "no exact form"


def test_read_record_missing_file(store, tmp_path):
    with pytest.raises(UsageError):
        store.read_record(str(tmp_path / "absent.json"))


def test_certificate_file_name(store):
    path = store.write_certificate((0, 0, 0, 1, 1, 3), (1, 0, 3, 0, 2, 0), {"complete": True})
    assert path.name == "cert_0-0-0-1-1-3_1-0-3-0-2-0.json"
    assert json.loads(path.read_text())["complete"] is True


def test_run_manifest_lifecycle(store, tmp_path):
    store.init_run("abc", "enumerate-s", {"digits": 50})
    store.finish_run("abc", [tmp_path / "datasets" / "snec.jsonl"], {"count": 55})
    data = json.loads((tmp_path / "runs" / "abc.json").read_text())
    assert data["command"] == "enumerate-s"
    assert data["result"] == {"count": 55}
    assert data["artifacts"][0].endswith("snec.jsonl")
    assert "finished" in data

    store.write_error("abc", "enumerate-s", UsageError("bad"), 2)
    error = json.loads((tmp_path / "runs" / "abc.error.json").read_text())
    assert error == {"error": "UsageError", "message": "bad", "exit_code": 2, "command": "enumerate-s"}
    assert "ledger entries" in store.summary()

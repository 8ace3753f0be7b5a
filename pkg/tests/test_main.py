import json

import pytest

import main


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ("COMPACT3_DIGITS", "COMPACT3_JOBS", "COMPACT3_OUT", "COMPACT3_FORMAT"):
        monkeypatch.delenv(name, raising=False)


def _run(tmp_path, *argv):
    return main.main([*argv, "--out", str(tmp_path)])


def _error_records(tmp_path):
    return [json.loads(p.read_text()) for p in (tmp_path / "runs").glob("*.error.json")]


def test_enumerate_s_writes_dataset(tmp_path, capsys):
    assert _run(tmp_path, "enumerate-s") == 0
    lines = (tmp_path / "datasets" / "snec.jsonl").read_text().splitlines()
    assert len(lines) == 55
    assert json.loads(capsys.readouterr().out) == {"count": 55}
    manifest = next(p for p in (tmp_path / "runs").glob("*.json") if ".error" not in p.name)
    data = json.loads(manifest.read_text())
    assert data["command"] == "enumerate-s"
    assert data["artifacts"][0].endswith("snec.jsonl")


def test_enumerate_s_as_csv(tmp_path):
    assert _run(tmp_path, "enumerate-s", "--format", "csv") == 0
    assert len((tmp_path / "datasets" / "snec.csv").read_text().splitlines()) == 56


def test_profile_and_detrig(tmp_path):
    assert _run(tmp_path, "profile", "alpha", "0,0,0,1,1,3", "--samples", "3", "--digits", "30") == 0
    record = json.loads((tmp_path / "catalogs" / "profile_alpha_0-0-0-1-1-3.json").read_text())
    assert record["complete"]
    assert len(record["trace"]) == 3

    assert _run(tmp_path, "detrig", "alpha", "0,0,0,1,1,3") == 0
    record = json.loads((tmp_path / "certificates" / "detrig_alpha_0-0-0-1-1-3.json").read_text())
    assert record["poly"]["vars"] == ["r", "s"]


def test_bad_tuple_is_a_usage_error(tmp_path, capsys):
    assert _run(tmp_path, "profile", "alpha", "0,0,1") == 2
    assert "[Error]" in capsys.readouterr().out
    errors = _error_records(tmp_path)
    assert errors[0]["error"] == "UsageError"
    assert errors[0]["exit_code"] == 2


def test_confirm_needs_a_certificate(tmp_path):
    assert _run(tmp_path, "gamma-search", "--r", "0.5", "--s", "0.3", "--confirm") == 2
    assert "--confirm" in _error_records(tmp_path)[0]["message"]


def test_radii_outside_domain(tmp_path):
    assert _run(tmp_path, "corona", "large", "6,0,0,0,0,0", "--r", "0.2", "--s", "0.6") == 2
    assert _error_records(tmp_path)[0]["error"] == "DomainError"


def test_config_errors_exit_before_running(tmp_path):
    assert _run(tmp_path, "enumerate-s", "--digits", "10") == 2
    assert not (tmp_path / "datasets" / "snec.jsonl").exists()


def test_unknown_command_is_rejected_by_the_parser(tmp_path):
    with pytest.raises(SystemExit) as info:
        _run(tmp_path, "pack-everything")
    assert info.value.code == 2


def test_corona_then_render_and_verify(tmp_path):
    assert _run(tmp_path, "corona", "large", "6,0,0,0,0,0", "--r", "0.6", "--s", "0.2") == 0
    packing = tmp_path / "packings" / "corona_large_6-0-0-0-0-0.json"
    assert json.loads(packing.read_text())["circles"][0]["label"] == "large"
    assert (tmp_path / "figures" / "corona_large_6-0-0-0-0-0.svg").exists()
    assert _run(tmp_path, "render", str(packing), "--tangency") == 0
    # no circle of a lone corona is interior, so only overlaps are checked
    assert _run(tmp_path, "verify", str(packing)) == 0


def test_overlapping_packing_fails_verification(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "digits": 30,
        "radii": {"s": "0.2", "r": "0.6"},
        "circles": [{"x": "0", "y": "0", "label": "large"},
                    {"x": "1.5", "y": "0", "label": "large"}],
    }))
    assert _run(tmp_path, "verify", str(bad)) == 4
    report = json.loads((tmp_path / "packings" / "bad.verify.json").read_text())
    assert len(report["overlaps"]) == 1


def test_intercepts_over_worked_examples(tmp_path, capsys):
    assert _run(tmp_path, "intercepts", "--digits", "30") == 0
    summary = json.loads((tmp_path / "catalogs" / "L_examples.summary.json").read_text())
    assert summary["found_pairs"] == 5
    assert summary["ledger"]["dispute"] == 0
    rows = (tmp_path / "catalogs" / "L_examples.jsonl").read_text().splitlines()
    assert len(rows) == 5


def test_examples9_names_the_worked_examples(tmp_path):
    assert _run(tmp_path, "intercepts", "--pairs", "examples9", "--no-resolve", "--digits", "30") == 0
    rows = (tmp_path / "catalogs" / "L_examples.jsonl").read_text().splitlines()
    assert len(rows) == 5

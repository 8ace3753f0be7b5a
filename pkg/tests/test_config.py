import pytest

from config import RunConfig
from errors import UsageError


def test_defaults_validate():
    cfg = RunConfig.from_env({}).validate()
    assert cfg.digits == 50
    assert cfg.jobs == 1
    assert cfg.fmt == "json"
    assert cfg.tolerance == "1e-20"


def test_environment_overrides_defaults():
    cfg = RunConfig.from_env({
        "COMPACT3_DIGITS": "80",
        "COMPACT3_OUT": "/tmp/elsewhere",
        "COMPACT3_FORMAT": "csv",
        "UNRELATED": "1",
    })
    assert cfg.digits == 80
    assert cfg.out_dir == "/tmp/elsewhere"
    assert cfg.fmt == "csv"


def test_seed_comes_from_the_environment():
    assert RunConfig.from_env({}).seed == 0
    assert RunConfig.from_env({"COMPACT3_SEED": "7"}).seed == 7


def test_flags_beat_environment_and_none_is_skipped():
    cfg = RunConfig.from_env({"COMPACT3_DIGITS": "80", "COMPACT3_JOBS": "4"})
    cfg.override(digits=60, jobs=None, no_such_field=3)
    assert cfg.digits == 60
    assert cfg.jobs == 4


def test_bad_integer_in_environment():
    with pytest.raises(UsageError, match="COMPACT3_JOBS"):
        RunConfig.from_env({"COMPACT3_JOBS": "many"})


@pytest.mark.parametrize("flags", [
    {"digits": 20},
    {"jobs": 0},
    {"budget_nodes": 0},
    {"term_cap": 0},
    {"fmt": "xml"},
    {"tolerance": "tiny"},
])
def test_validate_rejects(flags):
    with pytest.raises(UsageError):
        RunConfig.from_env({}).override(**flags).validate()


def test_record_lists_every_setting():
    record = RunConfig.from_env({}).to_record()
    assert record["digits"] == 50
    assert set(record) >= {"jobs", "budget_nodes", "term_cap", "out_dir", "fmt", "seed", "log_level"}

from pathlib import Path

import pytest
from pydantic import ValidationError

from app.config import ETA_MAX, RunConfig, load_config

pytestmark = pytest.mark.unit

FIXTURES = Path(__file__).parent / "fixtures"


def test_defaults():
    cfg = RunConfig()
    assert cfg.eta == 0.0
    assert cfg.eta_max == ETA_MAX
    assert (cfg.n_z, cfg.n_t) == (201, 201)
    assert cfg.signature == "space_positive"
    assert cfg.out is None


def test_file_values_and_flag_precedence():
    cfg = load_config(FIXTURES / "run_config.json", eta=1.25, n_z=None)
    assert cfg.eta == 1.25
    assert cfg.n_z == 41
    assert cfg.z_min == -6.0
    assert cfg.log_level == "WARNING"


def test_unknown_key_rejected(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text('{"eta": 1.0, "rapidity": 2.0}')
    with pytest.raises(ValidationError):
        load_config(path)


def test_non_object_file_rejected(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text("[1, 2]")
    with pytest.raises(ValueError):
        load_config(path)


def test_missing_file_is_os_error(tmp_path):
    with pytest.raises(OSError):
        load_config(tmp_path / "absent.json")


def test_environment_ignored(monkeypatch):
    monkeypatch.setenv("ETA", "3.0")
    monkeypatch.setenv("N_Z", "7")
    cfg = RunConfig()
    assert cfg.eta == 0.0
    assert cfg.n_z == 201


@pytest.mark.parametrize(
    "field,value",
    [
        ("fd_step", 0.5),
        ("n_z", 1),
        ("eta", float("nan")),
        ("format", "xml"),
        ("log_level", "LOUD"),
        ("points", [(float("inf"), 0.0)]),
        ("z_min", 9.0),
    ],
)
def test_invalid_values(field, value):
    with pytest.raises(ValidationError):
        RunConfig(**{field: value})


def test_effective_is_json_ready():
    cfg = RunConfig(out=Path("grid.csv"), points=[(1.0, 2.0)])
    eff = cfg.effective()
    assert eff["out"] == "grid.csv"
    assert eff["points"] == [[1.0, 2.0]]

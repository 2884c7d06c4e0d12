import json
import logging

import numpy as np
import pytest

from app.logging import JsonFormatter, RunContext, configure_logging

pytestmark = pytest.mark.unit


def _record(**extra):
    record = logging.LogRecord(
        "app.wavefn", logging.INFO, __file__, 1, "normalization", None, None
    )
    for k, v in extra.items():
        setattr(record, k, v)
    return record


def test_formatter_merges_extra_and_numpy_values():
    record = _record(extra={"eta": np.float64(1.5), "c": np.array([1.0, 0.5])})
    out = json.loads(JsonFormatter().format(record))
    assert out["level"] == "INFO"
    assert out["logger"] == "app.wavefn"
    assert out["msg"] == "normalization"
    assert out["eta"] == 1.5
    assert out["c"] == [1.0, 0.5]


def test_run_context_stamps_records():
    record = _record()
    assert RunContext(command="density").filter(record)
    out = json.loads(JsonFormatter().format(record))
    assert out["command"] == "density"


def test_cli_errors_logged_to_stderr(capsys, tmp_path):
    from svc.cli import main

    assert main(["density", "--eta", "12", "--out", str(tmp_path / "g.csv")]) == 4
    out, err = capsys.readouterr()
    assert out == ""
    line = next(ln for ln in err.splitlines() if ln.startswith("{"))
    payload = json.loads(line)
    assert payload["level"] == "ERROR"
    assert payload["command"] == "density"
    assert payload["error"] == "RapidityOutOfRange"
    assert payload["eta"] == 12.0


def test_configure_logging_replaces_handlers():
    configure_logging("DEBUG")
    configure_logging("WARNING", command="modes")
    root = logging.getLogger()
    assert len(root.handlers) == 1
    assert root.level == logging.WARNING

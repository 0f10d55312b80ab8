import json

import numpy as np
import pandas as pd

from spinorgp.data.results import FLOAT_FORMAT, SCHEMA_VERSION, ExperimentResult, build_id, to_plain, write_json


def make_result():
    data = pd.DataFrame({"t": [0.0, 0.5, 1.0], "E": [1.0, 1.0 + 1e-13, 1.0 - 2e-13]})
    summary = {"max_drift": np.float64(2e-13), "passed": True, "counts": np.arange(3)}
    return ExperimentResult("demo", summary, data, {"seed": 3})


def test_to_plain_converts_numpy_values():
    plain = to_plain({"a": np.float32(1.5), "b": np.array([[1, 2]]), 3: (1j,)})
    assert plain == {"a": 1.5, "b": [[1, 2]], "3": [{"re": 0.0, "im": 1.0}]}


def test_json_is_deterministic(tmp_path):
    first = make_result().to_json(tmp_path / "a.json")
    second = make_result().to_json(tmp_path / "b.json")
    assert first.read_bytes() == second.read_bytes()

    payload = json.loads(first.read_text())
    assert payload["schema_version"] == SCHEMA_VERSION
    assert payload["build_id"] == build_id()
    assert list(payload) == sorted(payload)
    assert payload["summary"]["counts"] == [0, 1, 2]


def test_csv_uses_fixed_float_format(tmp_path):
    paths = make_result().write(tmp_path)
    assert set(paths) == {"json", "csv"}
    lines = paths["csv"].read_text().splitlines()
    assert lines[0] == "t,E"
    assert lines[1] == f"{FLOAT_FORMAT % 0.0},{FLOAT_FORMAT % 1.0}"


def test_empty_table_skips_csv(tmp_path):
    result = ExperimentResult("empty", {"passed": True}, pd.DataFrame())
    assert set(result.write(tmp_path)) == {"json"}


def test_write_json_creates_parents(tmp_path):
    path = write_json({"b": 1, "a": 2}, tmp_path / "nested" / "x.json")
    assert path.read_text().startswith('{\n  "a": 2')

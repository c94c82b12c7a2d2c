import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

import liouqsl as lq
from liouqsl.exceptions import ValidationError

from conftest import philox, rand_spec


def test_matrix_round_trip():
    rng = philox(30)
    m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    doc = lq.matrix_to_json(m)
    assert doc["dim"] == 3
    assert_allclose(lq.matrix_from_json(doc), m)


def test_matrix_from_json_rejects_malformed():
    with pytest.raises(ValidationError):
        lq.matrix_from_json({"dim": 2, "re": [[0.0]]})
    with pytest.raises(ValidationError):
        lq.matrix_from_json({"dim": 2, "re": [[0.0]], "im": [[0.0]]})
    with pytest.raises(ValidationError):
        lq.matrix_to_json(np.zeros((2, 3)))


def test_spec_round_trip():
    rng = philox(31)
    spec = rand_spec(rng, 3)
    back = lq.spec_from_json(lq.spec_to_json(spec))
    assert back.dim == spec.dim
    L0 = lq.build_liouvillian(spec).full
    L1 = lq.build_liouvillian(back).full
    assert np.abs(L0 - L1).max() == 0.0


def test_spec_from_json_dim_mismatch():
    rng = philox(32)
    doc = lq.spec_to_json(rand_spec(rng, 2))
    doc["dim"] = 3
    with pytest.raises(ValidationError):
        lq.spec_from_json(doc)


def test_load_spec(tmp_path):
    rng = philox(33)
    spec = rand_spec(rng, 2)
    path = tmp_path / "spec.json"
    lq.dump_json(lq.spec_to_json(spec), path)
    back = lq.load_spec(path)
    assert np.abs(back.hamiltonian - spec.hamiltonian).max() == 0.0


def test_load_spec_invalid_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ValidationError):
        lq.load_spec(path)


def test_dump_json_layout(tmp_path):
    path = tmp_path / "doc.json"
    lq.dump_json({"b": 1, "a": [1.5, 2.5]}, path)
    text = path.read_text()
    assert text.endswith("\n")
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {"a": [1.5, 2.5], "b": 1}


def test_format_float_round_trips():
    rng = philox(34)
    for x in rng.normal(scale=1e3, size=50):
        assert float(lq.format_float(x)) == x
    assert float(lq.format_float(np.pi)) == np.pi


def test_write_csv(tmp_path):
    path = tmp_path / "rows.csv"
    lq.write_csv(path, ["t", "x"], [[0.0, np.pi], [1.0, -1.0 / 3.0]])
    lines = path.read_text().splitlines()
    assert lines[0] == "t,x"
    assert len(lines) == 3
    cells = lines[1].split(",")
    assert float(cells[1]) == np.pi

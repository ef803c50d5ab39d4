import json
import math

import numpy as np
import pytest

import prnls as P
from prnls.snapshot import params_from_header


def test_roundtrip_bitexact(tmp_path, grid, params_inf):
    rng = np.random.default_rng(11)
    f = P.RealField(grid, rng.standard_normal(grid.shape))
    path = P.save_field(tmp_path / "f.f64", f, params_inf, extra={"note": "test"})
    back, head = P.load_field(path)
    assert np.array_equal(back.values, f.values)
    assert head["n"] == 2 and head["N"] == 256 and head["L"] == 32.0
    assert head["note"] == "test"
    restored = params_from_header(head)
    assert restored == params_inf


def test_header_is_one_json_line(tmp_path, grid):
    path = P.save_field(tmp_path / "g.f64", P.gaussian_field(grid, 1.0))
    with open(path, "rb") as fh:
        first = fh.readline()
    head = json.loads(first)
    assert head["params"] is None
    assert math.isfinite(head["L"])


def test_truncated_payload_rejected(tmp_path, grid):
    path = P.save_field(tmp_path / "h.f64", P.gaussian_field(grid, 1.0))
    raw = path.read_bytes()
    path.write_bytes(raw[:-8])
    with pytest.raises(ValueError, match="payload"):
        P.load_field(path)


def test_no_tmp_left_behind(tmp_path, grid):
    P.save_field(tmp_path / "k.f64", P.gaussian_field(grid, 1.0))
    assert [p.name for p in tmp_path.iterdir()] == ["k.f64"]

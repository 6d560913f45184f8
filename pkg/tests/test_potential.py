import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slinverse import Potential, witness
from slinverse.potential import is_symmetric, symmetry_defect


def test_mean_is_trapezoid():
    q = witness("abs", M=512)
    assert q.mean == pytest.approx(np.trapezoid(q.values, q.grid) / math.pi, rel=1e-12)
    assert q.mean == pytest.approx(math.pi / 4, abs=1e-5)


def test_symmetry_certification():
    assert witness("mathieu").symmetric
    assert not witness("x").symmetric
    with pytest.raises(ValueError):
        Potential(np.linspace(0, 1, 33), symmetric=True)


@pytest.mark.parametrize("values", [[1.0] * 5, [[1.0] * 20] * 2, [0.0] * 10 + [float("nan")]])
def test_rejects_bad_values(values):
    with pytest.raises(ValueError):
        Potential(values)


def test_immutable():
    q = witness("zero", M=16)
    with pytest.raises(AttributeError):
        q.M = 3
    with pytest.raises(ValueError):
        q.values[0] = 1.0


def test_json_roundtrip(tmp_path):
    q = witness("xsin", M=64)
    path = tmp_path / "q.json"
    q.save(path)
    r = Potential.load(path)
    assert np.array_equal(r.values, q.values)
    assert r.symmetric == q.symmetric
    with pytest.raises(ValueError):
        Potential.from_dict({"M": 10, "values": [0.0] * 5})
    with pytest.raises(ValueError):
        Potential.from_dict({"values": [0.0] * 5})


def test_witness_names():
    assert witness("const:64").M == 64
    with pytest.raises(ValueError):
        witness("nope")


def test_spline_reproduces_smooth_function():
    q = witness("mathieu", M=256)
    x = np.linspace(0, math.pi, 1001)
    assert np.max(np.abs(q(x) - 2 * np.cos(2 * x))) < 1e-7


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-50, 50), min_size=9, max_size=40))
def test_symmetrized_is_symmetric(vals):
    q = Potential(vals)
    s = q.symmetrized()
    assert s.symmetric
    assert symmetry_defect(s.values) <= 1e-12 * (1 + max(map(abs, vals)))
    assert is_symmetric(s.values)
    assert s.mean == pytest.approx(q.mean, abs=1e-9 * (1 + max(map(abs, vals))))

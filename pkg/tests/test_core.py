import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from specbounds.core import (CommutatorConstants, Spectrum, load_spectrum, normalize_to_positive,
                             save_spectrum, shift_spectrum)
from specbounds.errors import ParameterRangeError, PositivityError

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)


def test_constants_reject_nonpositive_beta_gamma():
    with pytest.raises(ValueError):
        CommutatorConstants(0.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        CommutatorConstants(0.0, 1.0, -1.0)


def test_dirichlet_constants_and_weyl_exponent():
    c = CommutatorConstants.dirichlet(2)
    assert (c.alpha, c.beta, c.gamma) == (0.0, 2.0, 1.0)
    assert c.weyl_exponent == 1.0


def test_spectrum_validation():
    with pytest.raises(ValueError, match="nondecreasing"):
        Spectrum([1.0, 0.5])
    with pytest.raises(ValueError):
        Spectrum([])
    with pytest.raises(ValueError):
        Spectrum([1.0, math.nan])
    s = Spectrum([1.0, 2.0])
    with pytest.raises(ValueError):
        s.values[0] = 3.0


def test_require_positive():
    s = Spectrum([-1.0, 2.0])
    with pytest.raises(PositivityError):
        s.require_positive()
    with pytest.raises(ParameterRangeError):
        s.prefix(3)


def test_json_round_trip(tmp_path):
    s = Spectrum([1.0, 2.0, 2.0], dimension=2, volume=1.5, label="box",
                 constants=CommutatorConstants(0.5, 2.0, 1.0))
    path = tmp_path / "s.json"
    save_spectrum(s, path)
    payload = json.loads(path.read_text())
    assert set(payload) == {"label", "dimension", "volume", "constants", "eigenvalues"}
    back = load_spectrum(path)
    assert back == s
    assert back.label == "box" and back.volume == 1.5


def test_loader_rejects_unordered(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"label": "x", "dimension": None, "volume": None,
                                "constants": None, "eigenvalues": [2, 1]}))
    with pytest.raises(ValueError):
        load_spectrum(path)


def test_shift_examples():
    c = CommutatorConstants(0.0, 4.0, 1.0)
    s = Spectrum([1.0, 2.0, 3.0])
    same, c0 = shift_spectrum(s, c, 0.0)
    assert np.array_equal(same.values, s.values) and c0 == c
    moved, c1 = shift_spectrum(s, c, 1.0)
    assert moved.values.tolist() == [2.0, 3.0, 4.0]
    assert (c1.alpha, c1.beta, c1.gamma) == (-4.0, 4.0, 1.0)


def test_normalize_to_positive_example():
    c = CommutatorConstants(0.0, 2.0, 1.0)
    s, c2, eta = normalize_to_positive(Spectrum([-1.0, 0.0, 2.0]), c)
    assert eta == 1.5
    assert s.values.tolist() == [0.5, 1.5, 3.5]
    assert c2.alpha == -3.0
    back, c3 = shift_spectrum(s, c2, -eta)
    assert back.values.tolist() == [-1.0, 0.0, 2.0]
    assert c3 == c


@given(st.lists(finite, min_size=1, max_size=30), finite, finite)
def test_shift_round_trip_within_one_ulp(values, alpha, eta):
    s = Spectrum(sorted(values))
    c = CommutatorConstants(alpha, 2.0, 1.0)
    fwd, c1 = shift_spectrum(s, c, eta)
    back, c2 = shift_spectrum(fwd, c1, -eta)
    x = s.values
    bound = np.spacing(np.maximum(np.abs(x), np.abs(x + eta)))
    assert np.all(np.abs(back.values - x) <= bound)
    assert c2.beta == c.beta and c2.gamma == c.gamma
    assert abs(c2.alpha - c.alpha) <= np.spacing(max(abs(c.alpha), abs(c.alpha - 2.0 * eta))) * 2

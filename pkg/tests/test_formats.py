import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gzsys.formats import (
    FormatError,
    decode_complex,
    decode_matrix,
    decode_spectra,
    dumps,
    encode_complex,
    encode_matrix,
    load_json,
    read_matrix,
)
from gzsys.gzmap import Coords, KWPoint, RitzData

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(st.tuples(finite, finite), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_matrix_round_trip(rows):
    m = np.array([[complex(a, b) for a, b in row] for row in rows])
    back = decode_matrix(json.loads(dumps(encode_matrix(m))))
    assert np.array_equal(back, m)


def test_negative_zero_normalised():
    assert dumps(encode_complex(complex(-0.0, -0.0))) == "[0.0, 0.0]"


def test_decode_complex_forms():
    assert decode_complex([1, 2]) == 1 + 2j
    assert decode_complex(3) == 3
    for bad in ([1], [1, "a"], True, "1", [True, 0]):
        with pytest.raises(FormatError):
            decode_complex(bad)


def test_decode_matrix_errors():
    with pytest.raises(FormatError):
        decode_matrix([])
    with pytest.raises(FormatError):
        decode_matrix([[[1, 0], [2, 0]]])
    with pytest.raises(FormatError):
        decode_matrix({"n": 3, "entries": [[[1, 0]]]})
    with pytest.raises(FormatError):
        decode_matrix([[[1e308 * 10, 0]]])


def test_bare_list_accepted():
    assert np.array_equal(decode_matrix([[[1, 2]]]), [[1 + 2j]])


def test_decode_spectra():
    assert isinstance(decode_spectra({"ritz": [[[1, 0]]]}), RitzData)
    c = decode_spectra({"coeffs": [[[1, 0]]], "ritz": [[[5, 0]]]})
    assert isinstance(c, KWPoint) and c.coords is Coords.CHAR_COEFFS
    assert decode_spectra({"traces": [[[1, 0]]]}).coords is Coords.TRACES
    with pytest.raises(FormatError):
        decode_spectra({"other": 1})
    with pytest.raises(FormatError):
        decode_spectra([1])


def test_file_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(FormatError):
        load_json(bad)
    with pytest.raises(FormatError):
        read_matrix(tmp_path / "missing.json")

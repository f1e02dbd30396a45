"""JSON file formats.

Matrix files hold ``{"n": n, "entries": [[[re, im], ...], ...]}``; a bare
nested list of ``[re, im]`` pairs is accepted as well.  Spectra files hold
any of ``"coeffs"``, ``"ritz"`` or ``"traces"``: a list of levels, each a list
of ``[re, im]`` pairs.
"""

import json

import numpy as np

from .errors import PreconditionError
from .gzmap import Coords, KWPoint, RitzData


class FormatError(PreconditionError):
    """Input file does not follow the expected layout."""


def encode_complex(z):
    z = complex(z)
    # normalise -0.0 so that output bytes do not depend on sign of zero
    return [float(z.real) + 0.0, float(z.imag) + 0.0]


def decode_complex(pair):
    if isinstance(pair, (int, float)) and not isinstance(pair, bool):
        return complex(pair)
    if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
        raise FormatError(f"expected a [re, im] pair, got {pair!r}")
    re, im = pair
    if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in (re, im)):
        raise FormatError(f"non-numeric entry {pair!r}")
    return complex(re, im)


def encode_vector(v):
    return [encode_complex(z) for z in v]


def encode_matrix(m):
    m = np.asarray(m)
    return {"n": int(m.shape[0]), "entries": [encode_vector(row) for row in m]}


def decode_matrix(obj):
    entries = obj.get("entries") if isinstance(obj, dict) else obj
    if not isinstance(entries, list) or not entries:
        raise FormatError("matrix must be a non-empty nested list")
    n = len(entries)
    if isinstance(obj, dict) and "n" in obj and obj["n"] != n:
        raise FormatError(f"declared n={obj['n']} but found {n} rows")
    rows = []
    for row in entries:
        if not isinstance(row, list) or len(row) != n:
            raise FormatError("matrix must be square")
        rows.append([decode_complex(p) for p in row])
    m = np.array(rows, dtype=complex)
    if not np.all(np.isfinite(m)):
        raise FormatError("matrix has non-finite entries")
    return m


def _decode_levels(levels):
    if not isinstance(levels, list):
        raise FormatError("levels must be a list")
    return tuple(np.array([decode_complex(p) for p in lvl], dtype=complex) for lvl in levels)


def decode_spectra(obj):
    """Return a ``KWPoint`` or ``RitzData`` from a spectra document."""
    if not isinstance(obj, dict):
        raise FormatError("spectra file must be a JSON object")
    if "coeffs" in obj:
        return KWPoint(_decode_levels(obj["coeffs"]), Coords.CHAR_COEFFS)
    if "ritz" in obj:
        return RitzData(_decode_levels(obj["ritz"]))
    if "traces" in obj:
        return KWPoint(_decode_levels(obj["traces"]), Coords.TRACES)
    raise FormatError("spectra file needs one of 'coeffs', 'ritz', 'traces'")


def encode_levels(levels):
    return [encode_vector(v) for v in levels]


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise FormatError(f"{path}: {exc.strerror}") from exc


def read_matrix(path):
    return decode_matrix(load_json(path))


def dumps(obj):
    return json.dumps(obj, sort_keys=True)

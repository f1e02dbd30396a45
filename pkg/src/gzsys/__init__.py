"""Gelfand-Zeitlin integrable system on gl(n, C): Kostant-Wallach map,
Hessenberg section, strong regularity, flows, nilfiber and K-orbits."""

from ._backend import BACKEND
from .errors import ConsistencyError, ConvergenceError, GZError, NumericalError, PreconditionError
from .gzmap import Coords, KWPoint, RitzData, kw_map, ritz_values
from .hessenberg import hessenberg_from_coeffs, hessenberg_from_ritz
from .numlin import DEFAULT_TOL, Tolerance
from .sreg import SregReport, is_sreg, sreg_report

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConsistencyError",
    "ConvergenceError",
    "Coords",
    "DEFAULT_TOL",
    "GZError",
    "KWPoint",
    "NumericalError",
    "PreconditionError",
    "RitzData",
    "SregReport",
    "Tolerance",
    "hessenberg_from_coeffs",
    "hessenberg_from_ritz",
    "is_sreg",
    "kw_map",
    "ritz_values",
    "sreg_report",
    "__version__",
]

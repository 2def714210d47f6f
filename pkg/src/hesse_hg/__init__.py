"""Two-variable hypergeometric series ``F(a; B; x)`` with its rank-9 system and monodromy."""

from .errors import DomainError, HesseError, ParameterError
from .parameters import DEFAULT_PARAMS, HGParams, parse_params
from .series import Truncation, hgf_eval

__all__ = [
    "DEFAULT_PARAMS",
    "DomainError",
    "HGParams",
    "HesseError",
    "ParameterError",
    "Truncation",
    "hgf_eval",
    "parse_params",
]

__version__ = "0.1.0"

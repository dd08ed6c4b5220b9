"""Constructive Lusin approximation and Heisenberg graph tools."""

from ._lusin import (
    Function,
    HPoint,
    InfeasibleError,
    Modulus,
    ValidationError,
    cc_dist_bounds,
    certify,
    characteristic_fraction,
    construct,
    counterexample,
    holder_transfer,
    koranyi_dist,
    koranyi_norm,
    load_function,
    replay,
)

__all__ = [
    "Function",
    "HPoint",
    "InfeasibleError",
    "Modulus",
    "ValidationError",
    "cc_dist_bounds",
    "certify",
    "characteristic_fraction",
    "construct",
    "counterexample",
    "holder_transfer",
    "koranyi_dist",
    "koranyi_norm",
    "load_function",
    "replay",
]

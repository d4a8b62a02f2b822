"""Certified evaluation of the incomplete elliptic integral of the second kind
E(lambda, k) = int_0^lambda sqrt(1 - k^2 t^2) / sqrt(1 - t^2) dt."""
from .core import (
    Enclosure,
    EvalPoint,
    Method,
    RegionFlags,
    beta_of,
    classify,
    evaluate,
    theta,
)
from .errors import ConvergenceError, DomainError, OrderTooHighError, RegionError
from .special import bridge_E, complete_E, oracle_E

__all__ = [
    "ConvergenceError",
    "DomainError",
    "Enclosure",
    "EvalPoint",
    "Method",
    "OrderTooHighError",
    "RegionError",
    "RegionFlags",
    "beta_of",
    "bridge_E",
    "classify",
    "complete_E",
    "evaluate",
    "oracle_E",
    "theta",
]

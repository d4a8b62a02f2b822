"""Logarithmic approximation of E(lambda, k) near (1, 1) with two published
bound families for its remainder r1 = E - value.

The approximation follows from the leading terms of R_F and R_D as two of
their arguments tend to zero.  The first bound pair is the simpler one; the
second is tighter but degrades as lambda, k -> 0 through the factor
1 / (1 - sqrt((1-lambda^2)(1-k^2 lambda^2))).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .core import Enclosure, EvalPoint, Method, _require_interior, rounding_margin


@dataclass(frozen=True)
class BaselineResult:
    value: float
    lopez_lower: float
    lopez_upper: float
    cg_lower: float
    cg_upper: float

    def __post_init__(self):
        if not (self.lopez_lower <= self.lopez_upper and self.cg_lower <= self.cg_upper):
            raise ValueError("baseline remainder bounds out of order")


def cg_lopez_approx(p: EvalPoint) -> BaselineResult:
    _require_interior(p)
    lam, k = p.lam, p.k
    k2 = k * k
    lam2 = lam * lam
    a = (1.0 - lam) * (1.0 + lam)  # 1 - lambda^2
    b = (1.0 - k * lam) * (1.0 + k * lam)  # 1 - k^2 lambda^2
    ra, rb = math.sqrt(a), math.sqrt(b)
    log4 = math.log(4.0 / (ra + rb))
    log2 = math.log(2.0 / (ra + rb))
    value = lam * b * log4 + k2 * lam**3

    s = 2.0 - lam2 - k2 * lam2
    bracket = math.log((4.0 - lam2 - k2 * lam2) / s) + 2.0
    lopez_lower = -3.0 * k2 * lam**3 * s / 8.0 * bracket
    lopez_upper = lam * s / 8.0 * bracket

    g = math.sqrt(a * b)
    q = g / (1.0 - g)
    m = lam2 * (1.0 + k2)
    cg_lower = (lam * q / 2.0 - 3.0 * k2 * lam**3 * (2.0 - m) / (2.0 * m)) * log2
    cg_upper = lam * (2.0 - m) / (2.0 + m) * log4 - k2 * lam**3 * q * log2
    return BaselineResult(value, lopez_lower, lopez_upper, cg_lower, cg_upper)


def delta_star(p: EvalPoint, oracleE: float) -> tuple[float, float]:
    """Widths of the two remainder-bound intervals relative to E."""
    if not oracleE > 0:
        raise ValueError("E must be positive")
    r = cg_lopez_approx(p)
    return (r.lopez_upper - r.lopez_lower) / oracleE, (r.cg_upper - r.cg_lower) / oracleE


def enclose_baseline(p: EvalPoint) -> Enclosure:
    """value + [max of lower bounds, min of upper bounds]."""
    r = cg_lopez_approx(p)
    lo = max(r.lopez_lower, r.cg_lower)
    hi = min(r.lopez_upper, r.cg_upper)
    pad = rounding_margin(abs(r.value) + abs(lo) + abs(hi))
    return Enclosure(r.value, r.value + lo - pad, r.value + hi + pad, Method.BASELINE)

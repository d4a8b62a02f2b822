"""Domain types, parameter algebra and the public evaluation entry point."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError, OrderTooHighError

EPS = 2.220446049250313e-16


class Method(str, enum.Enum):
    FIRST_EXPANSION = "first"
    SECOND_EXPANSION = "second"
    AUX_BYRD_FRIEDMAN = "aux-bf"
    AUX_CARLSON = "aux-carlson"
    BASELINE = "baseline"
    ORACLE = "oracle"


@dataclass(frozen=True)
class EvalPoint:
    """A point (lambda, k) of the closed unit square."""

    lam: float
    k: float

    def __post_init__(self):
        for name, v in (("lambda", self.lam), ("k", self.k)):
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise DomainError(f"{name} must be a finite real, got {v!r}")
            if not 0.0 <= v <= 1.0:
                raise DomainError(f"{name} must lie in [0, 1], got {v!r}")
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "k", float(self.k))

    def interior(self) -> bool:
        return 0.0 < self.lam < 1.0 and 0.0 < self.k < 1.0


@dataclass(frozen=True)
class Enclosure:
    """Certified bounds lower <= E(lambda, k) <= upper plus a point estimate.

    The estimate is whatever approximant the method produces.  A raw partial
    sum of either expansion overestimates E and lies above the certified
    interval up to the rounding pad; refined approximants sit inside it.
    """

    estimate: float
    lower: float
    upper: float
    method: Method
    order: int | None = None

    def __post_init__(self):
        if not self.lower <= self.upper:
            raise ValueError(f"inconsistent enclosure: [{self.lower!r}, {self.upper!r}]")

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def __contains__(self, value: float) -> bool:
        return self.lower <= value <= self.upper


@dataclass(frozen=True)
class RegionFlags:
    cond1: bool  # beta > lambda^2, where the Byrd-Friedman form converges
    cond2: bool  # beta * k^2 < 1, where the Carlson form converges


def rounding_margin(scale: float) -> float:
    """Outward padding for a double-precision sum whose terms total ``scale``
    in absolute value."""
    return 64.0 * EPS * scale


def check_order(n, cap: int | None = None) -> int:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError(f"expansion order must be an integer >= 1, got {n!r}")
    if cap is not None and n > cap:
        raise OrderTooHighError(f"order {n} exceeds the supported maximum {cap}")
    return n


def _require_interior(p: EvalPoint) -> None:
    if not p.interior():
        raise DomainError(f"point ({p.lam}, {p.k}) is not in the open unit square")


def beta_of(p: EvalPoint) -> float:
    """beta = (1 - lambda^2) / (1 - k^2)."""
    if p.k == 1.0:
        raise DomainError("beta is undefined at k = 1")
    if p.lam == 1.0:
        raise DomainError("beta vanishes at lambda = 1; the point is not interior")
    return (1.0 - p.lam) * (1.0 + p.lam) / ((1.0 - p.k) * (1.0 + p.k))


def theta(n: float) -> float:
    """N(N+1) / ((N-1/2)(N+1/2)); decreases from 8/3 at N=1 towards 1.

    Real N is accepted so that the shifted orders N + eps of the refined
    approximant can be evaluated by the same rational formula.
    """
    if not n >= 1:
        raise DomainError(f"theta needs N >= 1, got {n!r}")
    return n * (n + 1.0) / ((n - 0.5) * (n + 0.5))


def classify(p: EvalPoint) -> RegionFlags:
    _require_interior(p)
    lk = p.lam * p.k
    om_lam = (1.0 - p.lam) * (1.0 + p.lam)
    om_k = (1.0 - p.k) * (1.0 + p.k)
    # cross-multiplied so neither flag divides by 1 - k^2
    cond1 = (1.0 - lk) * (1.0 + lk) < 2.0 * om_lam
    cond2 = om_lam * p.k * p.k < om_k
    return RegionFlags(cond1, cond2)


def evaluate(p: EvalPoint, order: int = 2, policy: str = "auto") -> Enclosure:
    """Certified enclosure of E(lambda, k).

    Boundary points are answered exactly: E(0, k) = 0, E(lambda, 1) = lambda,
    E(lambda, 0) = arcsin(lambda) and E(1, k) is the complete integral.  In
    the interior ``policy`` picks the expansion; ``"auto"`` takes the second
    expansion when (1 - lambda) <= (1 - k) and the first otherwise.
    """
    from . import first_expansion, second_expansion, special

    check_order(order)
    lam, k = p.lam, p.k
    if lam == 0.0:
        return Enclosure(0.0, 0.0, 0.0, Method.ORACLE)
    if k == 1.0:
        return Enclosure(lam, lam, lam, Method.ORACLE)
    if lam == 1.0:
        e = special.complete_E(k)
        m = special.COMPLETE_E_ABS_ERR
        return Enclosure(e, e - m, e + m, Method.ORACLE)
    if k == 0.0:
        e = math.asin(lam)
        m = rounding_margin(e)
        return Enclosure(e, e - m, e + m, Method.ORACLE)

    if policy == "auto":
        policy = "second" if 1.0 - lam <= 1.0 - k else "first"
    if policy == "first":
        return first_expansion.enclose_first(p, order)
    if policy == "second":
        return second_expansion.enclose_second(p, order)
    raise DomainError(f"unknown policy {policy!r}; expected 'auto', 'first' or 'second'")

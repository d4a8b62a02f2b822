"""Two auxiliary expansions of E(lambda, k) and the regions where they converge.

The first expands sqrt(1 + (1-k^2) t^2/(1-t^2)) binomially and converges
when beta > lambda^2 (cond1).  The second starts from Carlson's series
around lambda = k = 0 combined with the reflection

    E(lambda, k) = E(k) - sqrt(1-k^2) E(sqrt(1-lambda^2), i k/sqrt(1-k^2))

and converges when beta k^2 < 1 (cond2).  Every interior point satisfies
at least one of the two conditions.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterator

from . import special
from ._quadrature import integrate
from .core import (
    Enclosure,
    EvalPoint,
    Method,
    RegionFlags,
    _require_interior,
    beta_of,
    check_order,
    classify,
    rounding_margin,
)
from .errors import DomainError, RegionError
from .second_expansion import F_n_poly

_CANCEL_LIMIT = 100.0  # max (sum of |terms|) / |result| accepted from the closed form


@dataclass(frozen=True)
class AuxResult:
    value: float
    remainder_bound: float
    terms_used: int
    condition_ok: bool
    pad: float = 0.0  # rounding allowance on value

    def __post_init__(self):
        if not self.remainder_bound >= 0:
            raise ValueError("remainder bound must be non-negative")


# ---- the integral of t^{2j} / (1-t^2)^j ------------------------------------

def _lemma1_series(j: int, lam: float) -> float:
    """lam^{2j+1}/(2j+1) 2F1(j, j+1/2; j+3/2; lam^2)."""
    x = lam * lam
    term = lam ** (2 * j + 1) / (2 * j + 1)
    parts = [term]
    for m in range(10000):
        term *= (j + m) * (j + m + 0.5) / ((j + m + 1.5) * (m + 1)) * x
        parts.append(term)
        if term < 1e-18 * parts[0]:
            break
    return math.fsum(parts)


def lemma1_integral(j: int, lam: float) -> float:
    """The integral of t^{2j}/(1-t^2)^j over [0, lam].

    The closed form subtracts terms of size lam from a result of size
    lam^{2j+1}; when that cancellation costs more than two digits the
    equivalent 2F1 series is summed instead.
    """
    if isinstance(j, bool) or not isinstance(j, int) or j < 1:
        raise DomainError(f"j must be an integer >= 1, got {j!r}")
    if not 0.0 <= lam < 1.0:
        raise DomainError(f"lambda must lie in [0, 1), got {lam!r}")
    if lam == 0.0:
        return 0.0
    parts = _lemma1_parts(j, lam)
    value = math.fsum(parts)
    if value > 0 and sum(abs(t) for t in parts) <= _CANCEL_LIMIT * value:
        return value
    return _lemma1_series(j, lam)


def lemma1_closed(j: int, lam: float) -> float:
    """The closed form alone, as printed, for 0 < lam < 1."""
    if not 0.0 < lam < 1.0:
        raise DomainError(f"lambda must lie in (0, 1), got {lam!r}")
    return math.fsum(_lemma1_parts(j, lam))


def _lemma1_parts(j: int, lam: float) -> list[float]:
    om = (1.0 - lam) * (1.0 + lam)
    y = lam * lam / om
    poch_half = 1.0  # (1/2)_j
    for i in range(j):
        poch_half *= 0.5 + i
    parts = [
        lam ** (2 * j + 1) / om**j,
        (-1) ** j * poch_half / math.factorial(j - 1) * -2.0 * math.atanh(lam),
    ]
    ratio = 1.0  # (1/2 - j)_n / (1 - j)_n
    for n in range(j):
        if n > 0:
            ratio *= (0.5 - j + n - 1) / (1 - j + n - 1)
        parts.append((-1) ** (n - 1) * ratio * y ** (j - n) / lam)
    return parts


def power_integral(num_exp: float, den_exp: float, upper: float) -> float:
    """Integral of t^{2 num_exp} / (1-t^2)^{den_exp} over [0, upper], by quadrature."""
    if not 0.0 <= upper < 1.0:
        raise DomainError("upper limit must lie in [0, 1)")
    value, _ = integrate(
        lambda t: t ** (2 * num_exp) / (1.0 - t * t) ** den_exp, 0.0, upper,
        abs_tol=1e-300, rel_tol=1e-14,
    )
    return value


def power_integral_bound_equal(b: float, lam: float) -> float:
    """Upper bound lam^{2b+1} / (2 (b-1) (1-lam^2)^{b-1}) for power_integral(b, b, lam), b > 1."""
    if not b > 1:
        raise DomainError("the bound needs b > 1")
    return lam ** (2 * b + 1) / (2 * (b - 1) * ((1 - lam) * (1 + lam)) ** (b - 1))


def power_integral_bound_shifted(a: float, x: float) -> float:
    """Upper bound x^{2a+1} / (2a (1-x^2)^a) for power_integral(a, a+1, x), a > 0."""
    if not a > 0:
        raise DomainError("the bound needs a > 0")
    return x ** (2 * a + 1) / (2 * a * ((1 - x) * (1 + x)) ** a)


# ---- expansion under cond1 -------------------------------------------------

def _require(flag: bool, name: str, p: EvalPoint) -> None:
    if not flag:
        raise RegionError(f"({p.lam}, {p.k}) violates {name}; the expansion is not proven there")


def expansion_bf(p: EvalPoint, N: int) -> AuxResult:
    """Truncated binomial expansion in (1-k^2) t^2/(1-t^2), requires beta > lambda^2."""
    check_order(N)
    _require_interior(p)
    flags = classify(p)
    _require(flags.cond1, "beta > lambda^2", p)
    lam, k = p.lam, p.k
    beta = beta_of(p)
    x = lam * lam / beta
    om = (1.0 - lam) * (1.0 + lam)
    k2c = (1.0 - k) * (1.0 + k)
    y = om / (lam * lam)

    parts = []
    b = 1.0  # (-1)^j (-1/2)_j / j!
    for j in range(N + 1):
        if j > 0:
            b *= (j - 1.5) / j * -1.0
        parts.append(lam * b * x**j)

    lnratio = -2.0 * math.atanh(lam)
    c = 0.0
    for j in range(1, N + 1):
        c = -0.25 * k2c if j == 1 else c * (j - 1.5) * (j - 0.5) / (j * (j - 1)) * k2c
        parts.append(lnratio * c)

    poch = 1.0  # (-1/2)_j / j!
    for j in range(1, N + 1):
        poch *= (j - 1.5) / j
        ratio = 1.0  # (1/2 - j)_n / (1 - j)_n
        for n in range(j):
            if n > 0:
                ratio *= (0.5 - j + n - 1) / (1 - j + n - 1)
            sign = -1.0 if (j + n - 1) % 2 else 1.0
            parts.append(sign * poch * ratio * y**n * x**j / lam)

    dfact = 1.0  # (2N-1)!!
    for i in range(1, 2 * N, 2):
        dfact *= i
    bound = lam * om * dfact / (N * 2.0 ** (N + 2) * math.factorial(N + 1)) * x ** (N + 1)
    value = math.fsum(parts)
    return AuxResult(value, bound, N, True, rounding_margin(sum(abs(t) for t in parts)))


# ---- expansion under cond2 -------------------------------------------------

def expansion_carlson(p: EvalPoint, N: int) -> AuxResult:
    """E(k) minus a power series in (1-lambda^2), requires beta k^2 < 1."""
    check_order(N)
    _require_interior(p)
    flags = classify(p)
    _require(flags.cond2, "beta k^2 < 1", p)
    lam, k = p.lam, p.k
    beta = beta_of(p)
    bk2 = beta * k * k
    om = (1.0 - lam) * (1.0 + lam)
    k2c = (1.0 - k) * (1.0 + k)
    root = math.sqrt(om * k2c)
    arg = 1.0 / k2c
    ek = special.complete_E(k)
    terms = [
        (1.0 / (2 * m + 1) + bk2 / (2 * m + 3)) * om**m * F_n_poly(m, arg)
        for m in range(N)
    ]
    value = ek - root * math.fsum(terms)
    common = (N + 1) * root / ((N + 0.5) * (N + 1.5))
    if k * k >= 0.5:
        bound = common * bk2**N / (1.0 - bk2)
    else:
        bound = common * om**N / (lam * lam)
    pad = special.COMPLETE_E_ABS_ERR + rounding_margin(ek + root * sum(abs(t) for t in terms))
    return AuxResult(value, bound, N, True, pad)


def _aux_enclosure(res: AuxResult, method: Method, N: int) -> Enclosure:
    r = res.remainder_bound + res.pad
    return Enclosure(res.value, res.value - r, res.value + r, method, N)


def enclose_bf(p: EvalPoint, N: int) -> Enclosure:
    return _aux_enclosure(expansion_bf(p, N), Method.AUX_BYRD_FRIEDMAN, N)


def enclose_carlson(p: EvalPoint, N: int) -> Enclosure:
    return _aux_enclosure(expansion_carlson(p, N), Method.AUX_CARLSON, N)


def reflection_rhs(p: EvalPoint) -> float:
    """E(k) - sqrt(1-k^2) E(sqrt(1-lambda^2), i k / sqrt(1-k^2)).

    The imaginary-modulus integral is the real integral of
    sqrt(1 + k^2 v^2/(1-k^2)) / sqrt(1 - v^2) over [0, sqrt(1-lambda^2)].
    """
    lam, k = p.lam, p.k
    if k == 1.0:
        raise DomainError("the reflection needs k < 1")
    k2c = (1.0 - k) * (1.0 + k)
    return (special.complete_E(k)
            - math.sqrt(k2c) * special.incomplete_E_angle(math.acos(lam), -k * k / k2c))


# ---- Figure-1 region grid --------------------------------------------------

@dataclass(frozen=True)
class RegionRow:
    lam: float
    k: float
    flags: RegionFlags


def region_grid(resolution: int) -> Iterator[RegionRow]:
    """Rows over the lattice (i/resolution, j/resolution), 0 < i, j < resolution."""
    if isinstance(resolution, bool) or not isinstance(resolution, int) or resolution < 2:
        raise DomainError(f"resolution must be an integer >= 2, got {resolution!r}")
    for i in range(1, resolution):
        lam = i / resolution
        for j in range(1, resolution):
            k = j / resolution
            yield RegionRow(lam, k, classify(EvalPoint(lam, k)))


CSV_HEADER = ("lambda", "k", "cond1", "cond2")


def write_region_csv(rows, stream) -> dict[str, int]:
    """Write rows as CSV; returns counts of cond1-only, cond2-only, both, neither."""
    counts = {"cond1_only": 0, "cond2_only": 0, "both": 0, "neither": 0}
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        c1, c2 = row.flags.cond1, row.flags.cond2
        key = "both" if c1 and c2 else "cond1_only" if c1 else "cond2_only" if c2 else "neither"
        counts[key] += 1
        w.writerow([f"{row.lam:.17g}", f"{row.k:.17g}", str(c1).lower(), str(c2).lower()])
    return counts


def read_region_csv(stream) -> list[RegionRow]:
    r = csv.reader(stream)
    header = next(r)
    if tuple(header) != CSV_HEADER:
        raise DomainError(f"unexpected header {header!r}")
    return [
        RegionRow(float(a), float(b), RegionFlags(c == "true", d == "true"))
        for a, b, c, d in r
    ]

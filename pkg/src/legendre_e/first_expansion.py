"""Expansion of E(lambda, k) in powers of (1 - k^2), asymptotic as k -> 1.

The partial sum is

    E_N = lam sqrt(1 + x) + ln((1-lam)/(1+lam)) sum_{j=1}^N c_j (1-k^2)^j
          - (1/lam) sum_{n<N} ((1-lam^2)/(-lam^2))^n s_n(x),      x = lam^2/beta,

and E_N - P_N f_N < E < E_N - P_N f_{N+1} with an explicit positive f_N.

The tail sums s_n(x) are taken from the power series when x < 0.75 and from
elementary closed forms for n <= 2 followed by a three-term recurrence
otherwise.  In double precision the recurrence loses roughly a factor 1/x
per step for small x, and its inhomogeneous term cancels to about eps * x
for large x.  Between 0.75 and 1e3 it runs in doubles (relative error below
2e-13 through n = 11); outside that band it runs in extended precision.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from .core import (
    EPS,
    Enclosure,
    EvalPoint,
    Method,
    _require_interior,
    beta_of,
    check_order,
    rounding_margin,
    theta,
)
from .errors import ConvergenceError, DomainError

MAX_ORDER = 12
SERIES_BELOW = 0.75  # s_n by power series for x below this, recurrence above
DOUBLE_REC_ABOVE = 1e3  # beyond this the recurrence needs extra digits
# relative accuracy assumed for recurrence values when padding enclosures
_S_REL_ERR = 1e-12


class SnSource(str, enum.Enum):
    CLOSED_FORM = "closed"
    RECURRENCE = "recurrence"
    SERIES = "series"


@dataclass(frozen=True)
class SnValue:
    n: int
    x: float
    value: float
    source: SnSource


@dataclass(frozen=True)
class FirstEnclosureParts:
    partial_sum: float
    fN: float
    fN1: float
    prefactor: float
    pad: float = 0.0  # outward rounding allowance for the bounds

    @property
    def lower(self) -> float:
        return self.partial_sum - self.prefactor * self.fN

    @property
    def upper(self) -> float:
        return self.partial_sum - self.prefactor * self.fN1


# ---- exact rational coefficients -----------------------------------------

def _poch(a: Fraction, n: int) -> Fraction:
    out = Fraction(1)
    for i in range(n):
        out *= a + i
    return out


@lru_cache(maxsize=None)
def _g_coef(n: int, j: int) -> Fraction:
    """(-1/2)_j (1/2 - j)_n / (j! (1 - j)_n); requires j >= n + 1."""
    if j < n + 1:
        raise DomainError("series coefficient needs j >= n + 1")
    half = Fraction(1, 2)
    return (_poch(-half, j) * _poch(half - j, n)
            / (math.factorial(j) * _poch(Fraction(1 - j), n)))


@lru_cache(maxsize=None)
def _h_coef(n: int) -> Fraction:
    half = Fraction(1, 2)
    return (Fraction(-7, 4) * _poch(-half, n + 4) * _poch(Fraction(-7, 2) - n, n)
            / (math.factorial(n + 2) * _poch(Fraction(-3 - n), n)))


def _as(c: Fraction, num):
    """Convert a rational to the number type of ``num`` (float or mpf)."""
    if isinstance(num, mpmath.mpf):
        return mpmath.mpf(c.numerator) / c.denominator
    return c.numerator / c.denominator


# ---- s_n -------------------------------------------------------------------

def _check_x(x) -> None:
    if not x > 0 or not math.isfinite(float(x)):
        raise DomainError(f"s_n needs a finite x > 0, got {x!r}")


def _closed(n: int, x, fn):
    """s_0, s_1, s_2 with the math routines ``fn`` (math or mpmath)."""
    r = fn.sqrt(1 + x)
    rm1 = x / (1 + r)  # sqrt(1+x) - 1 without cancellation
    if n == 0:
        return rm1
    ln2 = fn.log(2)
    if n == 1:
        return (2 * rm1 + x * (2 * ln2 - 1 - 2 * fn.log(1 + r))) / 4
    if n == 2:
        lnx = fn.log(x)
        rp1 = 1 + r
        c43 = (3 * x - 4) / 3  # x - 4/3, kept exact for mpf arguments
        bracket = (
            -(3 * x - 8) / 6 * rp1 * fn.log(rp1)
            + x / 2 * rp1 * fn.log(rm1)
            + (c43 * ln2 - x / 2 * lnx - 13 * x / 12 + 1) * r
            + c43 * ln2 - x / 2 * lnx - x / 12 - 1
        )
        return -3 * x * x / (16 * rp1 * rp1 * rm1) * bracket
    raise DomainError(f"closed forms exist for n <= 2 only, got n = {n}")


def s_closed(n: int, x: float) -> float:
    """s_n(x) for n in {0, 1, 2} from the elementary closed forms."""
    _check_x(x)
    return _closed(n, float(x), math)


def s_series(n: int, x: float, tol: float = 1e-16) -> float:
    """s_n(x) by direct summation, for 0 < x < 1.

    Terms are generated by their ratio and summation stops once a term drops
    below ``tol`` times the running sum.
    """
    if n < 0:
        raise DomainError("n must be >= 0")
    if not 0.0 < x < 1.0:
        raise DomainError(f"the series needs 0 < x < 1, got {x!r}")
    if not tol > 0:
        raise DomainError("tol must be positive")
    j = n + 1
    term = _as(_g_coef(n, j), 0.0) * (-x) ** j
    parts = [term]
    total = term
    for _ in range(200000):
        term *= (j - 0.5) / (j + 1) * (j + 0.5) / (j + 0.5 - n) * (j - n) / j * (-x)
        j += 1
        parts.append(term)
        total += term
        if abs(term) < tol * abs(total):
            return math.fsum(parts)
    raise ConvergenceError(f"s_{n} series did not converge at x = {x!r}")


def _recurrence_coeffs(m: int, x):
    a = -(2 * m + 3) * (2 * m * x + 5 * x - 4 * m - 8)
    b = (2 * m + 3) * (4 * m * x + 4 * x - 2 * m - 1)
    c = -4 * m * (1 + m) * x
    g = lambda nn, j: _as(_g_coef(nn, j), x) * (-x) ** j  # noqa: E731
    h = _as(_h_coef(m), x) * (-x) ** (m + 4)
    d = (-a * g(m + 2, m + 3) - b * (g(m + 1, m + 2) + g(m + 1, m + 3))
         - c * (g(m, m + 1) + g(m, m + 2) + g(m, m + 3)) - h)
    return a, b, c, d


def _run_recurrence(s: list, upto: int, x) -> list:
    """Extend s = [s_0, s_1, s_2, ...] in place through index ``upto``."""
    while len(s) <= upto:
        m = len(s) - 3
        a, b, c, d = _recurrence_coeffs(m, x)
        s.append((a * s[m + 2] + b * s[m + 1] + c * s[m] + d) / (4 * (m + 2) * (m + 3)))
    return s


def s_rec(n: int, x: float) -> float:
    """s_n(x), n >= 3, by the recurrence seeded with the closed forms.

    Outside 0.75 <= x <= 1e3 the double-precision recurrence loses accuracy,
    so there it is carried out with extra digits sized to the expected loss.
    """
    if n < 3:
        raise DomainError(f"s_rec needs n >= 3, got {n}")
    _check_x(x)
    return _rec_list(n, float(x))[n]


def _rec_list(upto: int, x: float) -> list[float]:
    if SERIES_BELOW <= x <= DOUBLE_REC_ABOVE:
        s = [_closed(i, x, math) for i in range(3)]
        return _run_recurrence(s, upto, x)
    loss = upto * math.log10(1.0 / x) if x < 1.0 else math.log10(x)
    with mpmath.workdps(30 + int(loss + 1)):
        xm = mpmath.mpf(x)
        s = [_closed(i, xm, mpmath) for i in range(3)]
        return [float(v) for v in _run_recurrence(s, upto, xm)]


def s_values(count: int, x: float) -> list[SnValue]:
    """s_0 .. s_{count-1} at one x, choosing the evaluation route."""
    _check_x(x)
    x = float(x)
    if x < SERIES_BELOW:
        return [SnValue(n, x, s_series(n, x, 1e-17), SnSource.SERIES) for n in range(count)]
    if count > 3:
        s = _rec_list(count - 1, x)
    else:
        s = [_closed(i, x, math) for i in range(count)]
    return [
        SnValue(n, x, v, SnSource.CLOSED_FORM if n < 3 else SnSource.RECURRENCE)
        for n, v in enumerate(s)
    ]


# ---- bounds ----------------------------------------------------------------

def _f_and_scale(lam: float, k: float, order: float) -> tuple[float, float]:
    """f at real order together with the magnitude of its bracket terms."""
    k2c = (1.0 - k) * (1.0 + k)
    beta = (1.0 - lam) * (1.0 + lam) / k2c
    th = theta(order)
    r = math.sqrt(lam * lam + beta * th)
    t1 = th / r * 2.0 * math.atanh(lam / r)
    t2 = -k2c * 2.0 * math.atanh(lam)
    pre = 1.0 / (1.0 - k2c / th)
    return pre * (t1 + t2), pre * (abs(t1) + abs(t2))


def f_N(p: EvalPoint, N: float) -> float:
    """The positive bound function f at (possibly non-integer) order N >= 1."""
    _require_interior(p)
    return _f_and_scale(p.lam, p.k, N)[0]


def prefactor(N: int, k: float) -> float:
    """(1/2)_N (1/2)_{N+1} (1-k^2)^N / (2 N! (N+1)!) by running products."""
    check_order(N)
    k2c = (1.0 - k) * (1.0 + k)
    v = 3.0 / 32.0 * k2c  # N = 1
    for n in range(1, N):
        # going from n to n + 1 multiplies by (n+1/2)(n+3/2)/((n+1)(n+2)) (1-k^2)
        v *= (n + 0.5) * (n + 1.5) / ((n + 1) * (n + 2)) * k2c
    return v


def first_parts_upto(p: EvalPoint, nmax: int) -> list[FirstEnclosureParts]:
    """Bound ingredients for every order N = 1 .. nmax at one point.

    The tail sums are shared between orders, so this is the cheap way to get
    several truncations of the same point.
    """
    check_order(nmax, MAX_ORDER)
    _require_interior(p)
    lam, k = p.lam, p.k
    beta = beta_of(p)
    k2c = (1.0 - k) * (1.0 + k)
    x = lam * lam / beta
    lnratio = -2.0 * math.atanh(lam)
    s = s_values(nmax, x)
    om = (1.0 - lam) * (1.0 + lam)
    q = -om / (lam * lam)

    # lam sqrt(1+x) - s_0/lam = lam - s_0 (1-lam^2)/lam exactly; folding the
    # n = 0 tail term into the head leaves lam plus small corrections
    head = lam
    coef = 0.0  # (-1/2)_j (1/2)_j / (j! (j-1)!) (1-k^2)^j, built up in j
    csum = 0.0
    tail = 0.0
    tail_abs = 0.0
    tail_err = 0.0
    qn = 1.0
    f = [_f_and_scale(lam, k, n) for n in range(1, nmax + 2)]
    out = []
    for N in range(1, nmax + 1):
        if N == 1:
            coef = -0.25 * k2c
        else:
            coef *= (N - 1.5) * (N - 0.5) / (N * (N - 1)) * k2c
        csum += coef
        t = -s[0].value * om / lam if N == 1 else -qn * s[N - 1].value / lam
        tail += t
        tail_abs += abs(t)
        if s[N - 1].source is SnSource.RECURRENCE:
            tail_err += _S_REL_ERR * abs(t)
        qn *= q
        partial = head + (lnratio * csum + tail)
        P = prefactor(N, k)
        scale = abs(head) + abs(lnratio * csum) + tail_abs + P * (f[N - 1][1] + f[N][1])
        pad = rounding_margin(scale) + tail_err
        out.append(FirstEnclosureParts(partial, f[N - 1][0], f[N][0], P, pad))
    return out


def first_parts(p: EvalPoint, N: int) -> FirstEnclosureParts:
    return first_parts_upto(p, N)[-1]


def partial_sum_E_N(p: EvalPoint, N: int) -> float:
    """The N-term partial sum E_N; it always overestimates E."""
    if p.lam == 0.0:
        raise DomainError("the first expansion needs lambda > 0")
    return first_parts(p, N).partial_sum


def _enclosure(parts: FirstEnclosureParts, N: int, estimate: float | None = None) -> Enclosure:
    est = parts.partial_sum if estimate is None else estimate
    return Enclosure(est, parts.lower - parts.pad, parts.upper + parts.pad,
                     Method.FIRST_EXPANSION, N)


def enclose_first(p: EvalPoint, N: int) -> Enclosure:
    """Certified enclosure from the first expansion; estimate is E_N."""
    return _enclosure(first_parts(p, N), N)


def enclose_first_upto(p: EvalPoint, nmax: int) -> list[Enclosure]:
    return [_enclosure(parts, N) for N, parts in enumerate(first_parts_upto(p, nmax), 1)]


def refined_E_hat(p: EvalPoint, N: int, eps: float = 0.5) -> Enclosure:
    """E_N - P f_{N+eps}, which lies strictly inside the certified interval."""
    if not 0.0 < eps < 1.0:
        raise DomainError(f"eps must lie in (0, 1), got {eps!r}")
    parts = first_parts(p, N)
    est = parts.partial_sum - parts.prefactor * f_N(p, N + eps)
    return _enclosure(parts, N, est)


def relative_range(parts: FirstEnclosureParts, exact: float) -> float:
    """Width of the bound interval relative to E, without rounding pads."""
    return parts.prefactor * (parts.fN - parts.fN1) / exact

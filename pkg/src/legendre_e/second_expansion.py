"""Expansion of E(lambda, k) in powers of (1 - lambda^2), asymptotic as lambda -> 1.

    E~_N = E(k) - sqrt((1-lam^2)(1-k^2)) sum_{n<N} (1-lam^2)^n C_n(beta),
    C_n(x) = A_n(x) + beta k^2 B_n(x),

and L_N <= E~_N - E <= U_N with explicit L_N, U_N.

A_n and B_n have power series in x (radius 1), elementary closed forms for
n <= 1 and integral representations for every n.  The integrals are taken
after the substitution t = sinh^2(phi), which removes the endpoint
singularity and leaves an integrand analytic in the strip |Im phi| < pi/2:

    A_n(x) = x^{-1/2} int_0^{asinh sqrt x} (sinh^2 phi / x)^n F_n(tanh^2 phi) dphi,

and B_n is the same with exponent n + 1.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import mpmath

from . import special
from ._quadrature import integrate
from .core import (
    Enclosure,
    EvalPoint,
    Method,
    _require_interior,
    beta_of,
    check_order,
    rounding_margin,
)
from .errors import DomainError

DEFAULT_DELTA = 67.0 / 187.0
SERIES_BELOW = 0.25  # A_n, B_n by power series for x below this
AB_TOL = 1e-14  # relative tolerance for the quadrature route


class CnSource(str, enum.Enum):
    CLOSED_FORM = "closed"
    INTEGRAL = "integral"
    SERIES = "series"


@dataclass(frozen=True)
class CnValue:
    n: int
    x: float
    a: float
    b: float
    c: float
    source: CnSource
    err: float = 0.0  # absolute error allowance for c


@dataclass(frozen=True)
class SecondEnclosureParts:
    partial_sum: float
    lower_rem: float  # L_N <= -remainder
    upper_rem: float  # -remainder <= U_N
    pad: float = 0.0

    @property
    def lower(self) -> float:
        return self.partial_sum - self.upper_rem

    @property
    def upper(self) -> float:
        return self.partial_sum - self.lower_rem


# ---- F_n -------------------------------------------------------------------

def F_n_poly(n: int, x: float) -> float:
    """The terminating 2F1(-n, 1/2; 1; x), for any real x.

    For x < 1 this is (1-x)^{n/2} P_n(z) with z = (2-x)/(2 sqrt(1-x)) >= 1,
    where the Legendre recurrence is stable.  For x > 1, with w = sqrt(x-1)
    and y = (2-x)/(2w), it equals w^n Q_n(y) where Q_n(y) = i^{-n} P_n(iy)
    obeys a recurrence with positive coefficients, so no cancellation occurs
    on either side of x = 1.
    """
    if n < 0:
        raise DomainError("n must be >= 0")
    if n == 0:
        return 1.0
    if x == 1.0:
        v = 1.0
        for m in range(n):
            v *= (m + 0.5) / (m + 1)
        return v
    if x < 1.0:
        v = math.sqrt(1.0 - x)
        return _legendre(n, (2.0 - x) / (2.0 * v)) * v**n
    w = math.sqrt(x - 1.0)
    return _legendre_imag(n, (2.0 - x) / (2.0 * w)) * w**n


def _legendre(n: int, z: float) -> float:
    p0, p1 = 1.0, z
    for m in range(1, n):
        p0, p1 = p1, ((2 * m + 1) * z * p1 - m * p0) / (m + 1)
    return p1 if n >= 1 else p0


def _legendre_imag(n: int, y: float) -> float:
    q0, q1 = 1.0, y
    for m in range(1, n):
        q0, q1 = q1, ((2 * m + 1) * y * q1 + m * q0) / (m + 1)
    return q1 if n >= 1 else q0


# ---- A_n, B_n --------------------------------------------------------------

def _check_x(x: float) -> None:
    if not x > 0 or not math.isfinite(x):
        raise DomainError(f"coefficient argument must be finite and > 0, got {x!r}")


def AB_series(n: int, x: float, tol: float = 1e-17) -> tuple[float, float]:
    """A_n(x), B_n(x) from their power series, |x| < 1.

    The alternating terms can exceed the sum by many orders of magnitude as
    x -> 1; when more than one digit cancels the sum is redone in mpmath
    with that many extra digits.
    """
    if n < 0:
        raise DomainError("n must be >= 0")
    if not abs(x) < 1.0:
        raise DomainError(f"the A_n, B_n series needs |x| < 1, got {x!r}")
    a, b, peak = _ab_series_sum(n, x, tol, 1.0)
    lost = math.log10(peak / min(abs(a), abs(b))) if a and b else 0.0
    if lost > 1.0:
        with mpmath.workdps(20 + int(lost + 1)):
            a, b, _ = _ab_series_sum(n, mpmath.mpf(x), tol, mpmath.mpf(1))
            a, b = float(a), float(b)
    return a, b


def _ab_series_sum(n: int, x, tol: float, one):
    t = one  # binom(n+j, j) (-1)^j (1/2)_j / j! x^j
    a_parts, b_parts = [], []
    peak = 0.0
    for j in range(100000):
        if j > 0:
            t *= -(n + j) * (j - one / 2) / (j * j) * x
        ta = t / (2 * (n + j) + 1)
        tb = t / (2 * (n + j) + 3)
        a_parts.append(ta)
        b_parts.append(tb)
        peak = max(peak, abs(float(ta)))
        if abs(ta) < tol * abs(a_parts[0]) and j > 2:
            break
    fsum = math.fsum if isinstance(t, float) else mpmath.fsum
    return fsum(a_parts), fsum(b_parts), peak


def _integrand(n: int, x: float, wa: float, wb: float):
    """phi -> (sinh^2 phi / x)^n (wa + wb sinh^2 phi / x) F_n(tanh^2 phi)."""

    def f(phi):
        c = math.cosh(phi)
        sh = math.sinh(phi)
        u = sh * sh / x
        fn = _legendre(n, (c * c + 1.0) / (2.0 * c)) / c**n if n else 1.0
        return u**n * (wa + wb * u) * fn

    return f


def _quad_combo(n: int, x: float, wa: float, wb: float, rel_tol: float) -> tuple[float, float]:
    """wa A_n(x) + wb B_n(x) and its absolute error estimate."""
    root = math.sqrt(x)
    # the integrand is positive, so a relative tolerance is meaningful
    v, e = integrate(_integrand(n, x, wa, wb), 0.0, math.asinh(root),
                     abs_tol=1e-300, rel_tol=rel_tol)
    return v / root, e / root


def _ab_quad(n: int, x: float, rel_tol: float) -> tuple[float, float, float, float]:
    """A_n, B_n with their absolute error estimates."""
    a, ea = _quad_combo(n, x, 1.0, 0.0, rel_tol)
    b, eb = _quad_combo(n, x, 0.0, 1.0, rel_tol)
    return a, b, ea, eb


def AB_integral(n: int, x: float, tol: float = 1e-13) -> tuple[float, float]:
    """A_n(x), B_n(x) by quadrature of the integral representation.

    ``tol`` bounds the estimated absolute error of each value.
    """
    if n < 0:
        raise DomainError("n must be >= 0")
    _check_x(x)
    if not tol > 0:
        raise DomainError("tol must be positive")
    # A_n <= 1/(2n+1) and B_n <= 1/(2n+3), so this relative target meets tol
    a, b, _, _ = _ab_quad(n, x, min(tol, 1e-3))
    return a, b


def _asinh_sqrt_over_sqrt(x: float) -> float:
    r = math.sqrt(x)
    return math.asinh(r) / r


def C0_closed(x: float, beta_k2: float) -> float:
    """C_0(x) = A_0(x) + beta k^2 B_0(x) from the elementary closed form.

    Below x = 0.25 the B_0 part cancels badly and the series is used.
    """
    _check_x(x)
    if beta_k2 < 0:
        raise DomainError("beta k^2 must be >= 0")
    a, b = _ab0_closed(x) if x >= SERIES_BELOW else AB_series(0, x)
    return a + beta_k2 * b


def C1_closed(x: float, beta_k2: float) -> float:
    """C_1(x) from the elementary closed form (series below x = 0.25)."""
    _check_x(x)
    if beta_k2 < 0:
        raise DomainError("beta k^2 must be >= 0")
    a, b = _ab1_closed(x) if x >= SERIES_BELOW else AB_series(1, x)
    return a + beta_k2 * b


def _ab1_closed(x: float) -> tuple[float, float]:
    q = _asinh_sqrt_over_sqrt(x)
    s = math.sqrt(1.0 + x)
    a = (q - (1.0 - x) / s) / (4.0 * x)
    b = (-9.0 * q + (9.0 + 3.0 * x + 2.0 * x * x) / s) / (16.0 * x * x)
    return a, b


def _ab0_closed(x: float) -> tuple[float, float]:
    ln = math.asinh(math.sqrt(x))  # ln(sqrt(1+x) + sqrt(x))
    return ln / math.sqrt(x), (math.sqrt(x * (1.0 + x)) - ln) / (2.0 * x**1.5)


def c_value(n: int, x: float, beta_k2: float, parts: bool = True) -> CnValue:
    """C_n(x) by the most accurate available route.

    With ``parts=False`` the quadrature route integrates C_n directly and
    leaves the ``a`` and ``b`` fields as NaN, which halves its cost.
    """
    _check_x(x)
    if not parts and x >= SERIES_BELOW and n > 1:
        c, err = _quad_combo(n, x, 1.0, beta_k2, AB_TOL)
        err += rounding_margin(c)
        return CnValue(n, x, math.nan, math.nan, c, CnSource.INTEGRAL, err)
    if x < SERIES_BELOW:
        a, b = AB_series(n, x)
        src, err = CnSource.SERIES, 0.0
    elif n <= 1:
        a, b = _ab0_closed(x) if n == 0 else _ab1_closed(x)
        src, err = CnSource.CLOSED_FORM, 0.0
    else:
        a, b, ea, eb = _ab_quad(n, x, AB_TOL)
        src, err = CnSource.INTEGRAL, ea + beta_k2 * eb
    c = a + beta_k2 * b
    # cancellation allowance: each route is good to a few ulps of its terms
    err += rounding_margin(abs(a) + beta_k2 * abs(b)) * (1.0 if src is not CnSource.CLOSED_FORM
                                                          else 1.0 + 1.0 / (x * x))
    return CnValue(n, x, a, b, c, src, err)


# ---- bounds ----------------------------------------------------------------

def _sqrt_gap(beta: float) -> float:
    """sqrt(beta (1 + beta)) - asinh(sqrt(beta)) = 2 int_0^s t^2/sqrt(1+t^2) dt."""
    if beta >= 0.25:
        return math.sqrt(beta * (1.0 + beta)) - math.asinh(math.sqrt(beta))
    s = math.sqrt(beta)
    term = 2.0 * s**3  # 2 (-1)^j (1/2)_j / j! s^{2j+3}, before the 1/(2j+3)
    parts = []
    for j in range(200):
        parts.append(term / (2 * j + 3))
        term *= -(j + 0.5) / (j + 1) * beta
        if abs(term) < 1e-18 * abs(parts[0]):
            break
    return math.fsum(parts)


def remainder_bounds(p: EvalPoint, N: int) -> tuple[float, float]:
    """(L_N, U_N) with L_N <= E~_N - E <= U_N."""
    check_order(N)
    _require_interior(p)
    lam = p.lam
    beta = beta_of(p)
    om = (1.0 - lam) * (1.0 + lam)
    common = om ** (N + 1) * (lam * lam + beta + 1.0 / N)
    poch = 1.0  # (1/2)_N / (N+1)!
    for m in range(N):
        poch *= (m + 0.5) / (m + 1)
    poch /= N + 1
    lower = common * poch / (2.0 * beta * beta) * _sqrt_gap(beta)
    upper = common / (2.0 * (N + 1) * lam * lam * math.sqrt(beta * (1.0 + beta)))
    if not 0.0 <= lower <= upper:
        raise ArithmeticError(f"remainder bounds out of order at {p}: {lower!r} > {upper!r}")
    return lower, upper


def second_parts_upto(p: EvalPoint, nmax: int) -> list[SecondEnclosureParts]:
    """Bound ingredients for orders N = 1 .. nmax, sharing the C_n values."""
    check_order(nmax)
    _require_interior(p)
    lam, k = p.lam, p.k
    beta = beta_of(p)
    bk2 = beta * k * k
    om = (1.0 - lam) * (1.0 + lam)
    scale = math.sqrt(om * (1.0 - k) * (1.0 + k))
    ek = special.complete_E(k)
    acc = 0.0
    acc_abs = 0.0
    acc_err = 0.0
    w = scale
    out = []
    for N in range(1, nmax + 1):
        c = c_value(N - 1, beta, bk2, parts=False)
        acc += w * c.c
        acc_abs += w * abs(c.c)
        acc_err += w * c.err
        w *= om
        lower, upper = remainder_bounds(p, N)
        pad = (special.COMPLETE_E_ABS_ERR + acc_err
               + rounding_margin(ek + acc_abs + upper))
        out.append(SecondEnclosureParts(ek - acc, lower, upper, pad))
    return out


def second_parts(p: EvalPoint, N: int) -> SecondEnclosureParts:
    return second_parts_upto(p, N)[-1]


def partial_sum_E_tilde(p: EvalPoint, N: int) -> float:
    """The N-term partial sum E~_N; it always overestimates E."""
    return second_parts(p, N).partial_sum


def _enclosure(parts: SecondEnclosureParts, N: int, estimate: float | None = None) -> Enclosure:
    est = parts.partial_sum if estimate is None else estimate
    return Enclosure(est, parts.lower - parts.pad, parts.upper + parts.pad,
                     Method.SECOND_EXPANSION, N)


def enclose_second(p: EvalPoint, N: int) -> Enclosure:
    """Certified enclosure from the second expansion; estimate is E~_N."""
    if p.lam == 0.0:
        raise DomainError("the second expansion bounds need lambda > 0")
    return _enclosure(second_parts(p, N), N)


def enclose_second_upto(p: EvalPoint, nmax: int) -> list[Enclosure]:
    return [_enclosure(parts, N) for N, parts in enumerate(second_parts_upto(p, nmax), 1)]


def refined_estimate(parts: SecondEnclosureParts, delta: float = DEFAULT_DELTA) -> float:
    return parts.partial_sum - (delta * parts.upper_rem + (1.0 - delta) * parts.lower_rem)


def refined_E_bar(p: EvalPoint, N: int, delta: float = DEFAULT_DELTA) -> Enclosure:
    """E~_N minus the delta-weighted mix of the two remainder bounds.

    The certified interval is unchanged: with W = U_N - L_N the estimate sits
    (1 - delta) W above its lower end and delta W below its upper end.
    """
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must lie in (0, 1), got {delta!r}")
    parts = second_parts(p, N)
    return _enclosure(parts, N, refined_estimate(parts, delta))


def relative_range(parts: SecondEnclosureParts, exact: float) -> float:
    """(U_N - L_N) / E, the relative length of the certified interval."""
    return (parts.upper_rem - parts.lower_rem) / exact

"""Reference values and classical kernels.

Three independent routes to E(lambda, k) live here: direct quadrature of the
defining integral, Carlson's symmetric integrals via the duplication theorem,
and the Appell F1 double series.  They share no code beyond ``math``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from ._quadrature import integrate
from .core import EvalPoint
from .errors import ConvergenceError, DomainError

COMPLETE_E_ABS_ERR = 1e-15


@dataclass(frozen=True)
class OracleConfig:
    abs_tol: float = 1e-14
    max_depth: int = 60

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError("abs_tol must be positive")


DEFAULT_ORACLE = OracleConfig()


def incomplete_E_m(lam: float, m: float, cfg: OracleConfig = DEFAULT_ORACLE) -> float:
    """Integral of sqrt(1 - m t^2) / sqrt(1 - t^2) over [0, lam], for m <= 1.

    Negative ``m`` corresponds to an imaginary modulus.  After t = sin(theta)
    the integrand sqrt(1 - m sin^2 theta) is smooth on [0, arcsin(lam)].
    """
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda must lie in [0, 1], got {lam!r}")
    if not m <= 1.0:
        raise DomainError(f"parameter m = k^2 must be <= 1, got {m!r}")
    return incomplete_E_angle(math.asin(lam), m, cfg)


def incomplete_E_angle(phi: float, m: float, cfg: OracleConfig = DEFAULT_ORACLE) -> float:
    """Integral of sqrt(1 - m sin^2 theta) over [0, phi], 0 <= phi <= pi/2.

    Passing the angle rather than lambda = sin(phi) avoids the ill-conditioned
    arcsin when lambda is close to 1.
    """
    if not 0.0 <= phi <= 0.5 * math.pi + 1e-15:
        raise DomainError(f"phi must lie in [0, pi/2], got {phi!r}")
    if not m <= 1.0:
        raise DomainError(f"parameter m = k^2 must be <= 1, got {m!r}")
    if phi == 0.0:
        return 0.0
    if m == 0.0:
        return phi

    def integrand(th):
        s = math.sin(th)
        return math.sqrt(1.0 - m * s * s)

    value, _ = integrate(
        integrand, 0.0, phi, abs_tol=cfg.abs_tol, rel_tol=4e-16, max_depth=cfg.max_depth,
    )
    return value


def oracle_E(p: EvalPoint, cfg: OracleConfig = DEFAULT_ORACLE) -> float:
    """E(lambda, k) by adaptive quadrature of the defining integral."""
    if p.k == 1.0:
        return p.lam
    return incomplete_E_m(p.lam, p.k * p.k, cfg)


def complete_E(k: float) -> float:
    """Complete integral E(k) by the arithmetic-geometric mean."""
    if not 0.0 <= k <= 1.0:
        raise DomainError(f"k must lie in [0, 1], got {k!r}")
    if k == 1.0:
        return 1.0
    a = 1.0
    b = math.sqrt((1.0 - k) * (1.0 + k))
    c = k
    power = 0.5
    tail = [power * c * c]
    for _ in range(64):
        if abs(a - b) <= 1e-15 * a:
            a = 0.5 * (a + b)  # remaining error is O((a - b)^2)
            break
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        power *= 2.0
        tail.append(power * c * c)
    else:
        raise ConvergenceError("AGM failed to converge")
    return math.pi / (2.0 * a) * (1.0 - math.fsum(tail))


def _check_carlson_args(x, y, z):
    if min(x, y, z) < 0:
        raise DomainError("Carlson integrals need non-negative arguments")
    if (x == 0) + (y == 0) + (z == 0) > 1:
        raise DomainError("at most one Carlson argument may vanish")


def carlson_RF(x: float, y: float, z: float) -> float:
    """R_F(x, y, z), duplication followed by a fifth-order Taylor tail."""
    _check_carlson_args(x, y, z)
    a0 = (x + y + z) / 3.0
    q = (3.0 * 2.0**-53) ** (-1.0 / 6.0) * max(abs(a0 - x), abs(a0 - y), abs(a0 - z))
    a = a0
    x0, y0 = x, y
    scale = 1.0
    while scale * q >= abs(a):
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * sy + sx * sz + sy * sz
        x, y, z, a = (x + lam) / 4, (y + lam) / 4, (z + lam) / 4, (a + lam) / 4
        scale /= 4.0
    xx = (a0 - x0) * scale / a
    yy = (a0 - y0) * scale / a
    zz = -(xx + yy)
    e2 = xx * yy - zz * zz
    e3 = xx * yy * zz
    return (1 - e2 / 10 + e3 / 14 + e2 * e2 / 24 - 3 * e2 * e3 / 44) / math.sqrt(a)


def carlson_RD(x: float, y: float, z: float) -> float:
    """R_D(x, y, z); z must be positive."""
    _check_carlson_args(x, y, z)
    if z == 0:
        raise DomainError("R_D needs z > 0")
    a0 = (x + y + 3.0 * z) / 5.0
    q = (2.0**-53 / 4.0) ** (-1.0 / 6.0) * max(abs(a0 - x), abs(a0 - y), abs(a0 - z))
    a = a0
    x0, y0 = x, y
    scale = 1.0
    acc = []
    while scale * q >= abs(a):
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * sy + sx * sz + sy * sz
        acc.append(scale / (sz * (z + lam)))
        x, y, z, a = (x + lam) / 4, (y + lam) / 4, (z + lam) / 4, (a + lam) / 4
        scale /= 4.0
    xx = (a0 - x0) * scale / a
    yy = (a0 - y0) * scale / a
    zz = -(xx + yy) / 3.0
    xy = xx * yy
    e2 = xy - 6 * zz * zz
    e3 = (3 * xy - 8 * zz * zz) * zz
    e4 = 3 * (xy - zz * zz) * zz * zz
    e5 = xy * zz**3
    series = (
        1 - 3 * e2 / 14 + e3 / 6 + 9 * e2 * e2 / 88 - 3 * e4 / 22
        - 9 * e2 * e3 / 52 + 3 * e5 / 26
    )
    return scale * series / (a * math.sqrt(a)) + 3.0 * math.fsum(acc)


def bridge_E(p: EvalPoint) -> float:
    """E(lambda, k) through R_F and R_D."""
    lam, k = p.lam, p.k
    if lam == 1.0 and k == 1.0:
        raise DomainError("the symmetric-integral form diverges at (1, 1)")
    if lam == 0.0:
        return 0.0
    x = (1.0 - lam) * (1.0 + lam)
    y = (1.0 - k * lam) * (1.0 + k * lam)
    return lam * carlson_RF(x, y, 1.0) - k * k * lam**3 * carlson_RD(x, y, 1.0) / 3.0


def appell_F1_partial(alpha, beta1, beta2, gamma, x, y, terms: int) -> float:
    """Partial sum of Appell's F1 over all (m, n) with m + n <= terms."""
    if not (abs(x) < 1 and abs(y) < 1):
        raise DomainError("the F1 double series needs |x| < 1 and |y| < 1")
    parts = []
    head = 1.0  # term (m, 0)
    for m in range(terms + 1):
        if m > 0:
            head *= (alpha + m - 1) * (beta1 + m - 1) / ((gamma + m - 1) * m) * x
        t = head
        parts.append(t)
        for n in range(1, terms - m + 1):
            t *= (alpha + m + n - 1) * (beta2 + n - 1) / ((gamma + m + n - 1) * n) * y
            parts.append(t)
            if t == 0.0:
                break
    return math.fsum(parts)


def appell_E(p: EvalPoint, terms: int = 60) -> float:
    """E(lambda, k) = lambda F1(1/2; 1/2, -1/2; 3/2; lambda^2, k^2 lambda^2)."""
    lam2 = p.lam * p.lam
    return p.lam * appell_F1_partial(0.5, 0.5, -0.5, 1.5, lam2, p.k * p.k * lam2, terms)

"""Globally adaptive Gauss-Kronrod (7, 15) quadrature.

The interval with the largest local error estimate is bisected until the
summed estimate falls below ``max(abs_tol, rel_tol * |I|)``.  The local
estimate is ``|K15 - G7|``, which is pessimistic for smooth integrands.
"""
from __future__ import annotations

import heapq
import math
from typing import Callable

from .errors import ConvergenceError, DomainError

# QUADPACK constants: Kronrod abscissae (positive half, descending),
# Kronrod weights, and the Gauss weights for the odd-indexed abscissae.
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_ROUNDING = 50 * 2.220446049250313e-16

_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


def gk15(f: Callable[[float], float], a: float, b: float) -> tuple[float, float, float]:
    """One Gauss-Kronrod panel on [a, b].

    Returns (kronrod estimate, |kronrod - gauss|, kronrod estimate of the
    integral of |f|).
    """
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fc = f(c)
    kron = _WGK[7] * fc
    gauss = _WG[3] * fc
    resabs = _WGK[7] * abs(fc)
    for i in range(7):
        dx = h * _XGK[i]
        f1 = f(c - dx)
        f2 = f(c + dx)
        kron += _WGK[i] * (f1 + f2)
        resabs += _WGK[i] * (abs(f1) + abs(f2))
        if i % 2 == 1:
            gauss += _WG[i // 2] * (f1 + f2)
    h = abs(h)
    return kron * math.copysign(h, b - a), abs(kron - gauss) * h, resabs * h


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    abs_tol: float = 1e-14,
    rel_tol: float = 0.0,
    max_depth: int = 60,
) -> tuple[float, float]:
    """Integrate ``f`` over [a, b]; returns (value, error estimate).

    The requested tolerance is silently raised to the rounding floor
    ``50 * eps * integral(|f|)``.  Raises ConvergenceError if an interval
    would have to be split more than ``max_depth`` times.
    """
    if not abs_tol > 0 and not rel_tol > 0:
        raise DomainError("quadrature tolerance must be positive")
    if a == b:
        return 0.0, 0.0
    value, err, total_abs = gk15(f, a, b)
    heap = [(-err, 0, a, b, value, total_abs)]
    total_err = err
    while total_err > max(abs_tol, rel_tol * abs(value), _ROUNDING * total_abs):
        neg_err, depth, lo, hi, v, vabs = heapq.heappop(heap)
        if depth >= max_depth:
            raise ConvergenceError(
                f"quadrature did not reach tolerance {abs_tol:g} "
                f"(estimate {total_err:.3g}) within depth {max_depth}"
            )
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            raise ConvergenceError("quadrature interval collapsed below machine spacing")
        v1, e1, a1 = gk15(f, lo, mid)
        v2, e2, a2 = gk15(f, mid, hi)
        heapq.heappush(heap, (-e1, depth + 1, lo, mid, v1, a1))
        heapq.heappush(heap, (-e2, depth + 1, mid, hi, v2, a2))
        value += v1 + v2 - v
        total_err += e1 + e2 + neg_err
        total_abs += a1 + a2 - vabs
    if len(heap) > 1:
        value = math.fsum(item[4] for item in heap)
        total_err = math.fsum(-item[0] for item in heap)
    return value, total_err

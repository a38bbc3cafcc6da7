"""Entropy and alpha-norm along the two extremal families, plus curve geometry.

The peaked family ``p -> (H, ||.||_alpha)`` traces one boundary of the
feasible (entropy, norm) region, the stepped family the other. This module
provides the closed-form entropies, their inverses (bisection on strictly
monotone curves), the derivative of the norm with respect to entropy along
the peaked curve, the curvature sign function whose unique zero locates the
curve's inflection, and the tangent point where the straight segment of the
upper envelope touches the peaked curve.

All solvers use plain bisection: every equation solved here is either
strictly monotone or has a single sign change in its bracket, so bisection
converges unconditionally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .simplex import DomainError, NumericalError

_MAX_ITER = 200
_EXP_MAX = 709.0  # exp overflows float64 just above this


def _exp(x: float) -> float:
    return math.exp(x) if x < _EXP_MAX else math.inf


def _expm1(x: float) -> float:
    return math.expm1(x) if x < _EXP_MAX else math.inf


def _check_n(n: int, least: int = 2) -> None:
    if n < least:
        raise DomainError(f"n={n} must be >= {least}")


def _check_order(alpha: float) -> None:
    """Orders for which the norm derivative is defined: (0,1) or (1,inf), finite."""
    if not (alpha > 0.0 and alpha != 1.0 and math.isfinite(alpha)):
        raise DomainError(f"alpha={alpha!r} must be finite, positive and != 1")


def _check_upper_order(n: int, alpha: float) -> None:
    """Orders for which the upper envelope construction is proven to work."""
    if n == 2:
        if not (alpha > 0.0 and alpha != 1.0 and math.isfinite(alpha)):
            raise DomainError(f"unsupported order alpha={alpha!r} for n=2")
        return
    if not (0.5 <= alpha and alpha != 1.0 and math.isfinite(alpha)):
        raise DomainError(
            f"unsupported order alpha={alpha!r}: upper envelope needs alpha in [1/2,1) or (1,inf) for n>=3"
        )


def entropy_peaked(n: int, p: float) -> float:
    """Entropy of the peaked vector, -(1-(n-1)p)ln(1-(n-1)p) - (n-1)p ln p.

    Evaluated directly rather than through a constructed vector so that
    tail masses as small as ~1e-300 stay accurate. Strictly increasing
    from 0 at p=0 to ln n at p=1/n.
    """
    _check_n(n)
    if not (-1e-12 <= p <= 1.0 / n + 1e-12):
        raise DomainError(f"p={p!r} outside [0, 1/{n}]")
    p = min(max(p, 0.0), 1.0 / n)
    q = 1.0 - (n - 1) * p
    out = 0.0
    if q > 0.0:
        out -= q * math.log(q)
    if p > 0.0:
        out -= (n - 1) * p * math.log(p)
    return out


def entropy_stepped(n: int, p: float) -> float:
    """Entropy of the stepped vector; strictly decreasing, ln m at p = 1/m."""
    _check_n(n)
    if not (1.0 / n - 1e-12 <= p <= 1.0 + 1e-12):
        raise DomainError(f"p={p!r} outside [1/{n}, 1]")
    p = min(max(p, 1.0 / n), 1.0)
    k = int(math.floor(1.0 / p + 1e-9))
    if 1.0 - k * p < -1e-12:
        k -= 1
    k = min(k, n)
    r = max(1.0 - k * p, 0.0)
    out = -k * p * math.log(p) if p > 0.0 else 0.0
    if r > 1e-300:
        out -= r * math.log(r)
    return out


def norm_peaked(n: int, p: float, alpha: float) -> float:
    """alpha-norm of the peaked vector, ((n-1)p^alpha + (1-(n-1)p)^alpha)^(1/alpha)."""
    _check_n(n)
    p = min(max(p, 0.0), 1.0 / n)
    q = 1.0 - (n - 1) * p
    if alpha == math.inf:
        return q
    if not alpha > 0.0:
        raise DomainError(f"alpha={alpha!r} must be positive")
    s = q**alpha
    if p > 0.0:
        s += (n - 1) * p**alpha
    return s ** (1.0 / alpha)


def norm_stepped(n: int, p: float, alpha: float) -> float:
    """alpha-norm of the stepped vector."""
    _check_n(n)
    p = min(max(p, 1.0 / n), 1.0)
    k = int(math.floor(1.0 / p + 1e-9))
    if 1.0 - k * p < -1e-12:
        k -= 1
    k = min(k, n)
    r = max(1.0 - k * p, 0.0)
    if alpha == math.inf:
        return max(p, r)
    if not alpha > 0.0:
        raise DomainError(f"alpha={alpha!r} must be positive")
    s = k * p**alpha
    if r > 0.0:
        s += r**alpha
    return s ** (1.0 / alpha)


def _invert_monotone(fn, lo: float, hi: float, target: float, increasing: bool) -> float:
    """Bisect fn on [lo, hi] for fn(x) = target; fn strictly monotone."""
    a, b = lo, hi
    for _ in range(_MAX_ITER):
        if b - a <= 1e-16 * max(1.0, abs(b)):
            break
        mid = 0.5 * (a + b)
        if (fn(mid) < target) == increasing:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def inv_entropy_peaked(n: int, h: float) -> float:
    """The p in [0, 1/n] with entropy_peaked(n, p) = h."""
    _check_n(n)
    lnn = math.log(n)
    if not (-1e-9 <= h <= lnn + 1e-9):
        raise DomainError(f"h={h!r} outside [0, ln {n}]")
    h = min(max(h, 0.0), lnn)
    if h == 0.0:
        return 0.0
    # the curve is quadratically flat at its top, so inversion there is
    # ill-conditioned in h; snap when h matches the top to float precision
    if abs(entropy_peaked(n, 1.0 / n) - h) <= 4e-16 * lnn:
        return 1.0 / n
    return _invert_monotone(lambda p: entropy_peaked(n, p), 0.0, 1.0 / n, h, increasing=True)


def inv_entropy_stepped(n: int, h: float) -> float:
    """The p in [1/n, 1] with entropy_stepped(n, p) = h."""
    _check_n(n)
    lnn = math.log(n)
    if not (-1e-9 <= h <= lnn + 1e-9):
        raise DomainError(f"h={h!r} outside [0, ln {n}]")
    h = min(max(h, 0.0), lnn)
    if h == 0.0:
        return 1.0
    # segment corners p = 1/m are quadratically flat from the upper-p side;
    # snap when h matches a corner value to float precision
    m = int(round(math.exp(h)))
    if 2 <= m <= n and abs(entropy_stepped(n, 1.0 / m) - h) <= 4e-16 * max(1.0, h):
        return 1.0 / m
    return _invert_monotone(lambda p: entropy_stepped(n, p), 1.0 / n, 1.0, h, increasing=False)


def dnorm_dh_peaked(n: int, p: float, alpha: float) -> float:
    """Derivative of the peaked-curve norm with respect to its entropy.

    ((n-1)p^a + q^a)^(1/a-1) * (p^(a-1) - q^(a-1)) / (ln q - ln p), q = 1-(n-1)p.
    Only defined strictly inside the curve: the limits at the endpoints are
    0 or +inf depending on alpha and are the caller's business.
    """
    _check_n(n)
    _check_order(alpha)
    if not (0.0 < p < 1.0 / n):
        raise DomainError(f"p={p!r} outside the open interval (0, 1/{n})")
    q = 1.0 - (n - 1) * p
    s = (n - 1) * p**alpha + q**alpha
    return s ** (1.0 / alpha - 1.0) * (p ** (alpha - 1.0) - q ** (alpha - 1.0)) / (math.log(q) - math.log(p))


def curvature_sign(n: int, p: float, alpha: float) -> float:
    """Sign surrogate for the second derivative of norm vs entropy (peaked curve).

    Evaluated in the ratio variable z = (1-(n-1)p)/p as
    (alpha-1) + ((n-1)+z^alpha)(z^(1-alpha)-1) / (((n-1)+z) ln z),
    which is stable near p = 1/n (via expm1) and immune to the p^(1-alpha)
    overflow the direct parametrization suffers at small p.
    """
    _check_n(n)
    if not (0.0 < p < 1.0 / (n - 1)):
        raise DomainError(f"p={p!r} outside (0, 1/{n - 1})")
    z = (1.0 - (n - 1) * p) / p
    logz = math.log(z)
    if logz == 0.0:
        raise DomainError(f"p={p!r} sits at the pole p = 1/n of the curvature function")
    num = ((n - 1) + _exp(alpha * logz)) * _expm1((1.0 - alpha) * logz)
    den = ((n - 1) + z) * logz
    return (alpha - 1.0) + num / den


@dataclass(frozen=True)
class InflectionPoint:
    """Where the peaked curve switches concave -> convex (in entropy coordinates)."""

    n: int
    alpha: float
    h: float  # entropy coordinate, in (ln n - (1-2/n)ln(n-1), ln n)
    p: float  # parameter coordinate, in (1/(n(n-1)), 1/n)


@dataclass(frozen=True)
class TangentPoint:
    """Touch point of the tangent from the uniform endpoint onto the peaked curve."""

    n: int
    alpha: float
    p: float
    h: float
    norm: float


def inflection_point(n: int, alpha: float) -> InflectionPoint:
    """Locate the unique zero of curvature_sign on (1/(n(n-1)), 1/n).

    Needs n >= 3 (the binary curve is concave throughout) and
    alpha in [1/2, 1) or (1, inf).
    """
    _check_n(n, least=3)
    _check_upper_order(n, alpha)
    lo = 1.0 / (n * (n - 1))
    f_lo = curvature_sign(n, lo, alpha)
    hi = f_hi = None
    # The curvature vanishes smoothly at p = 1/n itself, so probe just inside;
    # for very large alpha the zero crowds the endpoint and the probe moves in.
    delta = 1e-9
    while delta > 1e-16:
        cand = (1.0 / n) * (1.0 - delta)
        val = curvature_sign(n, cand, alpha)
        if val > 0.0:
            hi, f_hi = cand, val
            break
        delta *= 1e-2
    if hi is None or f_lo >= 0.0:
        raise NumericalError(
            f"no sign change bracketing the inflection for n={n}, alpha={alpha}: "
            f"g({lo})={f_lo}, g(~1/n)={f_hi}"
        )
    a, b = lo, hi
    for _ in range(_MAX_ITER):
        if b - a <= 1e-16 * b:
            break
        mid = 0.5 * (a + b)
        if curvature_sign(n, mid, alpha) < 0.0:
            a = mid
        else:
            b = mid
    p = 0.5 * (a + b)
    return InflectionPoint(n=n, alpha=alpha, h=entropy_peaked(n, p), p=p)


def tangent_residual(n: int, p: float, alpha: float) -> float:
    """Residual of the tangency condition at parameter p.

    Zero exactly when the tangent line of the peaked curve at p passes
    through the uniform endpoint (ln n, n^(1/alpha-1)).
    """
    gap = math.log(n) - entropy_peaked(n, p)
    return gap * dnorm_dh_peaked(n, p, alpha) - (n ** (1.0 / alpha - 1.0) - norm_peaked(n, p, alpha))


def solve_tangent_generic(n: int, alpha: float) -> float:
    """Find the tangency parameter by bisection, with no closed-form shortcuts.

    Brackets the unique root of tangent_residual between ~0 and the
    inflection parameter. Needs n >= 3.
    """
    _check_n(n, least=3)
    _check_upper_order(n, alpha)
    hi = inflection_point(n, alpha).p
    f_hi = tangent_residual(n, hi, alpha)
    lo = 1e-14
    f_lo = tangent_residual(n, lo, alpha)
    while f_lo * f_hi > 0.0 and lo > 1e-30:
        lo *= 1e-4
        f_lo = tangent_residual(n, lo, alpha)
    if f_lo * f_hi > 0.0:
        raise NumericalError(
            f"tangent bracket failed for n={n}, alpha={alpha}: "
            f"F({lo})={f_lo}, F({hi})={f_hi}"
        )
    a, b, f_a = lo, hi, f_lo
    for _ in range(_MAX_ITER):
        if b - a <= 1e-16 * max(b, 1e-10):
            break
        mid = 0.5 * (a + b)
        f_mid = tangent_residual(n, mid, alpha)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0.0) == (f_a > 0.0):
            a, f_a = mid, f_mid
        else:
            b = mid
    return 0.5 * (a + b)


@lru_cache(maxsize=None)
def _tangent_cached(n: int, alpha: float) -> TangentPoint:
    if n == 2:
        p = 0.5
    elif alpha == 0.5:
        p = 1.0 / (n * (n - 1))  # exact tangency parameter at order 1/2
    else:
        p = solve_tangent_generic(n, alpha)
    return TangentPoint(n=n, alpha=alpha, p=p, h=entropy_peaked(n, p), norm=norm_peaked(n, p, alpha))


def tangent_point(n: int, alpha: float) -> TangentPoint:
    """Tangency point of the upper envelope, memoized per (n, alpha).

    For n=2 the curve is concave throughout and the tangency degenerates
    to p = 1/2 (the uniform endpoint itself), for any order.
    """
    _check_n(n)
    _check_upper_order(n, alpha)
    return _tangent_cached(int(n), float(alpha))

"""Special functions, quadrature, root finding and scalar maximization.

Everything here is written against plain floats so that the analytic layers
stay free of heavy dependencies.  The incomplete gamma routines also accept
``x`` as a numpy array, which is what the KS checks over 10^5 samples need.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from statistics import NormalDist
from typing import Callable

import numpy as np

from ._temme_coeffs import STIRLING, TEMME

__all__ = [
    "DomainError",
    "ConvergenceError",
    "NoSignChangeError",
    "Interval",
    "Tolerance",
    "log_gamma",
    "reg_lower_gamma",
    "reg_upper_gamma",
    "inv_reg_lower_gamma",
    "integrate",
    "find_root",
    "maximize_scalar",
]

_EPS = np.finfo(float).eps
_SQRT_2PI = math.sqrt(2.0 * math.pi)
_MAX_SERIES_ITERS = 100_000


class DomainError(ValueError):
    """Argument outside the domain of a numerical routine."""


class ConvergenceError(RuntimeError):
    """Iteration limit hit; ``estimate`` holds the best value reached."""

    def __init__(self, message: str, estimate: float = math.nan, error: float = math.nan):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class NoSignChangeError(ValueError):
    """Root bracket whose endpoints share a sign."""

    def __init__(self, message: str, f_lo: float = math.nan, f_hi: float = math.nan):
        super().__init__(message)
        self.f_lo = f_lo
        self.f_hi = f_hi


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise DomainError(f"interval endpoints must be finite, got [{self.lo}, {self.hi}]")
        if not self.lo < self.hi:
            raise DomainError(f"interval requires lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class Tolerance:
    rel: float = 1e-10
    abs: float = 0.0
    max_iters: int = 200

    def __post_init__(self):
        if self.rel < 0 or self.abs < 0 or not (self.rel > 0 or self.abs > 0):
            raise DomainError("tolerance needs rel > 0 or abs > 0 (and neither negative)")
        if self.max_iters < 1:
            raise DomainError("max_iters must be >= 1")

    def bound(self, scale: float) -> float:
        return max(self.abs, self.rel * abs(scale))


# --------------------------------------------------------------------------
# Gamma function family
# --------------------------------------------------------------------------

def log_gamma(a: float) -> float:
    """Natural log of the gamma function for ``a > 0``."""
    a = float(a)
    if not math.isfinite(a) or a <= 0:
        raise DomainError(f"log_gamma requires a finite a > 0, got {a}")
    return math.lgamma(a)


def _log1pmx(s: float) -> float:
    """log(1 + s) - s without cancellation near 0."""
    if abs(s) > 0.1:
        return math.log1p(s) - s
    term = s
    total = 0.0
    k = 2
    while True:
        term *= -s
        contrib = term / k
        total += contrib
        if abs(contrib) <= _EPS * abs(total):
            return total
        k += 1


def _gamma_star(a: float) -> float:
    """Gamma(a) / (sqrt(2 pi / a) (a / e)^a), the Stirling-normalised gamma."""
    if a >= 10.0:
        total = 0.0
        for g in reversed(STIRLING):
            total = total / a + g
        return total
    return math.exp(math.lgamma(a) - (a - 0.5) * math.log(a) + a) / _SQRT_2PI


def _prefactor(a: float, x: float) -> float:
    """x^a e^{-x} / Gamma(a), evaluated stably for large a."""
    if x == 0.0:
        return 0.0
    if a < 10.0:
        return math.exp(a * math.log(x) - x - math.lgamma(a))
    s = (x - a) / a
    if s <= -1.0:
        return 0.0
    return math.exp(a * _log1pmx(s)) * math.sqrt(a) / (_SQRT_2PI * _gamma_star(a))


def _lower_series(a: float, x: float) -> float:
    # P(a, x) = x^a e^-x / Gamma(a+1) * sum_k x^k / ((a+1)...(a+k))
    term = 1.0
    total = 1.0
    k = 1
    while k < _MAX_SERIES_ITERS:
        term *= x / (a + k)
        total += term
        if term <= _EPS * total:
            break
        k += 1
    else:
        raise ConvergenceError(f"incomplete gamma series did not converge (a={a}, x={x})")
    return _prefactor(a, x) / a * total


def _upper_cfrac(a: float, x: float) -> float:
    # Modified Lentz evaluation of Q(a, x) = x^a e^-x / Gamma(a) * 1/(x+1-a- ...)
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_SERIES_ITERS):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) <= _EPS:
            break
    else:
        raise ConvergenceError(f"incomplete gamma continued fraction did not converge (a={a}, x={x})")
    return _prefactor(a, x) * h


_erfc_ufunc = np.frompyfunc(math.erfc, 1, 1)


def _log1pmx_array(s: np.ndarray) -> np.ndarray:
    out = np.log1p(s) - s
    small = np.abs(s) <= 0.1
    if np.any(small):
        t = s[small]
        # -t^2/2 + t^3/3 - ... ; 0.1^24 / 24 is far below eps
        acc = np.zeros_like(t)
        for k in range(24, 1, -1):
            acc = acc * t + (-1.0) ** (k + 1) / k
        out[small] = acc * t * t
    return out


def _temme_sum(a: float, eta):
    # sum_k c_k(eta) a^-k, stopping once terms stop shrinking
    scalar = isinstance(eta, float)
    total = 0.0
    afac = 1.0
    last = math.inf
    for coeffs in TEMME:
        ck = 0.0
        for c in reversed(coeffs):
            ck = ck * eta + c
        term = ck * afac
        if scalar:
            size, floor = abs(term), abs(total + term)
        else:
            size, floor = float(np.max(np.abs(term))), float(np.min(np.abs(total + term)))
        if size > last:
            break
        total = total + term
        if size <= _EPS * floor:
            break
        last = size
        afac /= a
    return total


def _temme(a: float, x: float) -> tuple[float, float]:
    """Temme's uniform expansion of (P, Q); valid for a > 20, |x/a - 1| < 0.3."""
    s = (x - a) / a
    eta = math.copysign(math.sqrt(-2.0 * _log1pmx(s)), s)
    tail = math.exp(-0.5 * a * eta * eta) * _temme_sum(a, eta) / math.sqrt(2.0 * math.pi * a)
    z = eta * math.sqrt(a / 2.0)
    return 0.5 * math.erfc(-z) - tail, 0.5 * math.erfc(z) + tail


def _temme_array(a: float, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    s = (x - a) / a
    eta = np.sign(s) * np.sqrt(-2.0 * _log1pmx_array(s))
    tail = np.exp(-0.5 * a * eta * eta) * _temme_sum(a, eta) / math.sqrt(2.0 * math.pi * a)
    z = eta * math.sqrt(a / 2.0)
    p = 0.5 * _erfc_ufunc(-z).astype(float) - tail
    q = 0.5 * _erfc_ufunc(z).astype(float) + tail
    return p, q


def _use_temme(a: float, x: float) -> bool:
    return a > 20.0 and abs(x - a) < 0.3 * a


def _check_shape(a) -> float:
    a = float(a)
    if not math.isfinite(a) or a <= 0:
        raise DomainError(f"incomplete gamma requires a finite shape a > 0, got {a}")
    return a


def _pq_scalar(a: float, x: float) -> tuple[float, float]:
    if math.isnan(x) or x < 0:
        raise DomainError(f"incomplete gamma requires x >= 0, got {x}")
    if x == 0.0:
        return 0.0, 1.0
    if math.isinf(x):
        return 1.0, 0.0
    if _use_temme(a, x):
        p, q = _temme(a, x)
    elif x < a + 1.0:
        p = _lower_series(a, x)
        q = 1.0 - p
    else:
        q = _upper_cfrac(a, x)
        p = 1.0 - q
    return min(max(p, 0.0), 1.0), min(max(q, 0.0), 1.0)


def _dispatch(a, x, upper: bool):
    a = _check_shape(a)
    idx = 1 if upper else 0
    if np.ndim(x) == 0:
        return _pq_scalar(a, float(x))[idx]
    x = np.asarray(x, dtype=float)
    if np.any(np.isnan(x)) or np.any(x < 0):
        raise DomainError("incomplete gamma requires x >= 0")
    out = np.empty_like(x)
    flat_x, flat_out = x.ravel(), out.ravel()
    fast = (a > 20.0) & (np.abs(flat_x - a) < 0.3 * a)
    if np.any(fast):
        flat_out[fast] = np.clip(_temme_array(a, flat_x[fast])[idx], 0.0, 1.0)
    for i in np.flatnonzero(~fast):
        flat_out[i] = _pq_scalar(a, float(flat_x[i]))[idx]
    return flat_out.reshape(x.shape)


def reg_lower_gamma(a: float, x):
    """Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).

    Parameters
    ----------
    a : float
        Shape, ``a > 0``.
    x : float or array_like
        Evaluation point(s), ``x >= 0``.

    Returns
    -------
    float or ndarray
        Values in [0, 1], nondecreasing in ``x``.

    Notes
    -----
    Power series for ``x < a + 1``, Lentz continued fraction otherwise, and
    Temme's uniform asymptotic expansion when ``a > 20`` and ``x`` lies within
    30% of ``a``.  The last branch keeps the cost flat for the very large
    shapes produced by long estimation windows (a ~ 1e11 is routine).
    """
    return _dispatch(a, x, upper=False)


def reg_upper_gamma(a: float, x):
    """Complement Q(a, x) = 1 - P(a, x), computed directly (no cancellation)."""
    return _dispatch(a, x, upper=True)


def inv_reg_lower_gamma(a: float, p: float) -> float:
    """Solve P(a, x) = p for x.

    Newton iterations in log(x) on whichever of P or Q is smaller at the
    target, so p close to 1 keeps full precision.  Seeded by Wilson-Hilferty
    (or the small-x power law x^a / Gamma(a+1) when that is the better guess)
    and safeguarded by a shrinking bracket with bisection fallback.
    """
    a = _check_shape(a)
    p = float(p)
    if not (0.0 <= p < 1.0):
        raise DomainError(f"inv_reg_lower_gamma requires 0 <= p < 1, got {p}")
    if p == 0.0:
        return 0.0
    use_upper = p > 0.5
    target = 1.0 - p if use_upper else p

    def residual(x: float) -> float:
        pp, qq = _pq_scalar(a, x)
        return (target - qq) if use_upper else (pp - target)

    log_small = (math.log(p) + math.lgamma(a + 1.0)) / a
    z = NormalDist().inv_cdf(p)
    k = 1.0 / (9.0 * a)
    wh = 1.0 - k + z * math.sqrt(k)
    if wh > 0 and not (a < 1.0 and p < 0.5):
        u = math.log(a) + 3.0 * math.log(wh)
    else:
        u = log_small
        if u < math.log(1e-200):
            # P(a, x) = x^a / Gamma(a+1) (1 + O(x)) is exact to rounding here
            return math.exp(u)

    x = math.exp(u)
    lo, hi = 0.0, math.inf
    for _ in range(200):
        r = residual(x)
        if r == 0.0:
            return x
        if r < 0:
            lo = x
        else:
            hi = x
        slope = _prefactor(a, x) / x  # density of Gamma(a, 1)
        x_new = x - r / slope if slope > 0 else math.nan
        if abs(x_new - x) <= 2 * _EPS * x:
            return x_new
        if not (lo < x_new < hi):
            if math.isinf(hi):
                x_new = 4.0 * x
            elif lo == 0.0:
                x_new = 0.25 * hi
            else:
                x_new = math.sqrt(lo * hi) if hi > 2.0 * lo else 0.5 * (lo + hi)
        if math.isfinite(hi) and hi - lo <= 2 * _EPS * hi:
            return x_new
        x = x_new
    raise ConvergenceError(f"inv_reg_lower_gamma did not converge (a={a}, p={p})", estimate=x)


# --------------------------------------------------------------------------
# Quadrature: adaptive Gauss-Kronrod (7, 15)
# --------------------------------------------------------------------------

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
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467768523288,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


def _gk15(f: Callable[[float], float], lo: float, hi: float) -> tuple[float, float]:
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    fc = f(center)
    kronrod = fc * _WGK[7]
    gauss = fc * _WG[3]
    for j in range(7):
        dx = half * _XGK[j]
        pair = f(center - dx) + f(center + dx)
        kronrod += _WGK[j] * pair
        if j % 2 == 1:
            gauss += _WG[j // 2] * pair
    return kronrod * half, abs((kronrod - gauss) * half)


def integrate(f: Callable[[float], float], interval: Interval, tol: Tolerance = Tolerance(rel=1e-10)) -> float:
    """Adaptive Gauss-Kronrod 7/15 quadrature of ``f`` over ``interval``.

    The panel with the largest error estimate is bisected until the summed
    error estimate is within ``tol``.  After ``tol.max_iters`` bisections a
    :class:`ConvergenceError` carrying the best estimate is raised.
    """
    value, err = _gk15(f, interval.lo, interval.hi)
    heap = [(-err, interval.lo, interval.hi, value)]
    total, total_err = value, err
    for _ in range(tol.max_iters):
        if total_err <= tol.bound(total):
            return total
        neg_err, lo, hi, val = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        total += v1 + v2 - val
        total_err += e1 + e2 + neg_err
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
    # recompute sums from scratch to shed accumulated rounding
    total = math.fsum(item[3] for item in heap)
    total_err = math.fsum(-item[0] for item in heap)
    if total_err <= tol.bound(total):
        return total
    raise ConvergenceError(
        f"integrate: error estimate {total_err:.3g} above tolerance after {tol.max_iters} subdivisions",
        estimate=total,
        error=total_err,
    )


# --------------------------------------------------------------------------
# Root finding and maximization
# --------------------------------------------------------------------------

def find_root(f: Callable[[float], float], bracket: Interval, tol: Tolerance = Tolerance(rel=0.0, abs=1e-12)) -> float:
    """Root of ``f`` inside ``bracket`` (Brent: bisection with secant/IQI steps)."""
    a, b = bracket.lo, bracket.hi
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if math.copysign(1.0, fa) == math.copysign(1.0, fb):
        raise NoSignChangeError(
            f"no sign change on [{a}, {b}]: f(lo)={fa:.6g}, f(hi)={fb:.6g}", f_lo=fa, f_hi=fb
        )
    c, fc = a, fa
    d = e = b - a
    for _ in range(max(tol.max_iters, 200)):
        if math.copysign(1.0, fb) == math.copysign(1.0, fc):
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        bound = 2.0 * _EPS * abs(b) + 0.5 * tol.bound(b)
        m = 0.5 * (c - b)
        if abs(m) <= bound or fb == 0.0:
            return b
        if abs(e) >= bound and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                num, den = 2.0 * m * s, 1.0 - s
            else:
                q, r = fa / fc, fb / fc
                num = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0))
                den = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if num > 0:
                den = -den
            else:
                num = -num
            if 2.0 * num < min(3.0 * m * den - abs(bound * den), abs(e * den)):
                e, d = d, num / den
            else:
                d = e = m
        else:
            d = e = m
        a, fa = b, fb
        b += d if abs(d) > bound else math.copysign(bound, m)
        fb = f(b)
    raise ConvergenceError("find_root did not converge", estimate=b)


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def maximize_scalar(
    f: Callable[[float], float],
    interval: Interval,
    tol: Tolerance = Tolerance(rel=1e-10, abs=0.0),
    grid_points: int = 64,
    scale: str = "linear",
) -> tuple[float, float]:
    """Global-ish maximum of ``f`` on ``interval``.

    A grid of ``grid_points`` samples (linear or log spacing) picks the best
    cell, then golden-section search refines inside the two neighbouring
    cells.  The refined point is only accepted if it strictly beats the best
    grid sample; ties resolve to the smallest grid argmax.

    Returns
    -------
    (argmax, max)
    """
    if grid_points < 3:
        raise DomainError("maximize_scalar needs at least 3 grid points")
    if scale == "log":
        if interval.lo <= 0:
            raise DomainError("log-scale search needs a positive interval")
        to_x, from_x = math.exp, math.log
    elif scale == "linear":
        to_x = from_x = lambda u: u  # noqa: E731
    else:
        raise DomainError(f"unknown scale {scale!r}")

    u_lo, u_hi = from_x(interval.lo), from_x(interval.hi)
    grid = np.linspace(u_lo, u_hi, grid_points)
    xs = [interval.lo] + [to_x(u) for u in grid[1:-1]] + [interval.hi]
    values = [f(x) for x in xs]
    best = int(np.argmax(values))
    best_x, best_val = xs[best], values[best]

    a = grid[max(best - 1, 0)]
    b = grid[min(best + 1, grid_points - 1)]
    g = lambda u: f(min(max(to_x(u), interval.lo), interval.hi))  # noqa: E731
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = g(c), g(d)
    for _ in range(tol.max_iters):
        if abs(to_x(b) - to_x(a)) <= tol.bound(to_x(0.5 * (a + b))):
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = g(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = g(d)
    u_ref, v_ref = (c, fc) if fc >= fd else (d, fd)
    if v_ref > best_val:
        return min(max(to_x(u_ref), interval.lo), interval.hi), v_ref
    return best_x, best_val

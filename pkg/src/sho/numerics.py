"""Numerical kernel: Gamma function, Gaussian moments, semi-axis quadrature, RK4.

Everything here is deliberately generic; nothing in this module knows about
the oscillator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np
from numba import njit

from .errors import ConvergenceError, DivergenceError, DomainError

_HALF_PI = 0.5 * math.pi

# Magnitude at which outward integration is declared to have blown up.
BLOWUP_LIMIT = 1e250


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int


@dataclass(frozen=True)
class GridFunction:
    """Samples of a function (and optionally its derivative) on an increasing grid."""

    x: np.ndarray
    values: np.ndarray
    derivative: Optional[np.ndarray] = None
    blew_up: bool = False

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if x.ndim != 1 or v.shape != x.shape:
            raise ValueError("grid and values must be 1-d arrays of equal length")
        if x.size > 1 and not np.all(np.diff(x) > 0):
            raise ValueError("grid must be strictly increasing")
        if x.size and x[0] <= 0:
            raise ValueError("grid must be positive")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "values", v)


def log_gamma(z: float) -> float:
    """``ln Gamma(z)`` for ``z > 0``."""
    z = float(z)
    if not z > 0:
        raise DomainError(f"log_gamma requires z > 0, got {z!r}")
    return math.lgamma(z)


def gaussian_moment(p: float) -> float:
    """``int_0^inf x^p exp(-x^2) dx = Gamma((p + 1)/2) / 2``.

    Raises :class:`DivergenceError` for ``p <= -1``, where the integral
    diverges at the origin.
    """
    p = float(p)
    if not p > -1:
        raise DivergenceError(f"int_0^inf x^{p} exp(-x^2) dx diverges at the origin")
    a = 0.5 * (p + 1.0)
    if a < 170.0:
        return 0.5 * math.gamma(a)
    return 0.5 * math.exp(math.lgamma(a))


def _as_vectorized(f):
    def g(x):
        try:
            out = f(x)
        except (TypeError, ValueError):
            out = np.array([f(float(xi)) for xi in x])
        return np.broadcast_to(np.asarray(out, dtype=float), x.shape)

    return g


def integrate_semiaxis(
    f: Callable,
    tol: float = 1e-12,
    lower: float = 0.0,
    max_levels: int = 10,
    t_range: Tuple[float, float] = (-6.6, 3.0),
) -> QuadratureResult:
    """Integrate ``f`` over ``(lower, inf)``.

    Uses the exp-sinh substitution ``x - lower = exp(pi/2 sinh t)``, which maps
    the half line onto the real t axis with double-exponential decay of the
    transformed integrand at both ends, and refines the trapezoid step in t by
    halving until two successive levels agree to ``tol`` (relative to
    ``max(1, |I|)``). Integrable power singularities at ``lower`` are absorbed
    by the substitution.

    ``f`` should accept numpy arrays; scalar-only callables are vectorized.
    The default ``t_range`` spans ``x - lower`` from about 1e-250 to 7e6.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    g = _as_vectorized(f)
    t_lo, t_hi = t_range
    h = 0.5

    def level_sum(t):
        u = np.exp(_HALF_PI * np.sinh(t))
        with np.errstate(over="ignore", under="ignore", invalid="ignore"):
            fx = g(lower + u)
            terms = fx * (_HALF_PI * np.cosh(t) * u)
        if not np.all(np.isfinite(terms)):
            raise ConvergenceError("integrand is not finite on the quadrature nodes")
        return math.fsum(terms)

    t = np.arange(math.ceil(t_lo / h), math.floor(t_hi / h) + 1) * h
    acc = level_sum(t)
    evaluations = t.size
    estimate = h * acc
    for _ in range(max_levels):
        h *= 0.5
        k = np.arange(math.ceil(t_lo / h), math.floor(t_hi / h) + 1)
        t_new = k[k % 2 != 0] * h
        acc += level_sum(t_new)
        evaluations += t_new.size
        new = h * acc
        err = abs(new - estimate)
        estimate = new
        if err <= tol * max(1.0, abs(new)):
            return QuadratureResult(new, err, evaluations)
    raise ConvergenceError(
        f"quadrature did not reach tol={tol:g} after {max_levels} refinements",
        partial=QuadratureResult(estimate, err, evaluations),
    )


@njit(cache=True, nogil=True)
def _rk4_linear(g, h, y0, dy0, limit):
    # y'' = g y with g sampled at half steps: g[2i] at node i, g[2i+1] at its midpoint.
    n = (g.shape[0] - 1) // 2
    ys = np.empty(n + 1)
    dys = np.empty(n + 1)
    y = y0
    dy = dy0
    ys[0] = y
    dys[0] = dy
    for i in range(n):
        ga = g[2 * i]
        gm = g[2 * i + 1]
        gb = g[2 * i + 2]
        k1y = dy
        k1d = ga * y
        k2y = dy + 0.5 * h * k1d
        k2d = gm * (y + 0.5 * h * k1y)
        k3y = dy + 0.5 * h * k2d
        k3d = gm * (y + 0.5 * h * k2y)
        k4y = dy + h * k3d
        k4d = gb * (y + h * k3y)
        y = y + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        dy = dy + h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d)
        ys[i + 1] = y
        dys[i + 1] = dy
        if not abs(y) < limit:
            return ys, dys, i + 1
    return ys, dys, n


def rk4_linear(g_half: np.ndarray, h: float, y0: float, dy0: float):
    """Fixed-step RK4 for ``y'' = g y`` given ``g`` on the half-step lattice.

    Returns ``(y, dy, stop)``; ``stop`` is the last valid index, smaller than
    ``len(y) - 1`` only if ``|y|`` exceeded :data:`BLOWUP_LIMIT`.
    """
    g_half = np.ascontiguousarray(g_half, dtype=float)
    if g_half.size < 3 or g_half.size % 2 == 0:
        raise ValueError("g_half must have odd length >= 3")
    return _rk4_linear(g_half, float(h), float(y0), float(dy0), BLOWUP_LIMIT)


def integrate_ode(
    g: Callable,
    x0: float,
    y0: Tuple[float, float],
    x1: float,
    step: float = 1e-3,
) -> GridFunction:
    """Integrate ``psi'' = g(x) psi`` from ``x0`` to ``x1`` with classic RK4.

    The step is adjusted down so that an integer number of steps lands on
    ``x1``. A trajectory whose magnitude passes :data:`BLOWUP_LIMIT` is cut
    there and returned with ``blew_up=True``; this is a signal, not a failure.
    """
    if not x0 > 0:
        raise DomainError("integrate_ode must start away from the origin (x0 > 0)")
    if not step > 0:
        raise DomainError("step must be positive")
    if not x1 > x0:
        raise DomainError("x1 must exceed x0")
    n = max(1, math.ceil((x1 - x0) / step - 1e-9))
    h = (x1 - x0) / n
    xs_half = x0 + 0.5 * h * np.arange(2 * n + 1)
    xs_half[-1] = x1
    g_half = _as_vectorized(g)(xs_half)
    ys, dys, stop = rk4_linear(g_half, h, y0[0], y0[1])
    x = xs_half[::2][: stop + 1]
    return GridFunction(x, ys[: stop + 1], dys[: stop + 1], blew_up=stop < n)

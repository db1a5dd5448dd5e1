"""Independent numerical checks of the closed-form spectrum.

* :func:`shoot_eigenvalue` rediscovers eigenvalues by outward integration
  and bisection; it only uses the indicial exponent, never ``2n + s + 1/2``.
* :func:`residual_check` applies the Hamiltonian to a state by finite
  differences.
* :func:`hft_check` compares ``dE/dalpha`` with ``<dH/dalpha> = <x^-2>/2``.
* :func:`nonnormalizable_demo` shows the truncated series blowing up away
  from an eigenvalue.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    BracketError,
    DivergenceError,
    PreconditionError,
    ResolutionError,
    StepError,
)
from .frobenius import (
    EigenState,
    RecurrenceContext,
    build_state,
    energy,
    eval_state,
    expectation_power,
    is_eigenvalue,
    series_tail_ratio_bound,
    truncated_series,
)
from .model import ALPHA_CRITICAL, Branch, BranchExponent, branch_exponent
from .numerics import integrate_semiaxis, rk4_linear

SHOOT_X0 = 1e-3
SHOOT_X_MAX = 8.0
SHOOT_STEP = 1e-3
SHOOT_TOL = 1e-8
SCAN_DE = 0.5
CUTOFF_EPSILONS = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6)


@dataclass(frozen=True)
class ShootingResult:
    """Eigenvalue located by bisection.

    ``terminal_log_derivative_mismatch`` is ``psi'/psi`` at ``x_max`` minus
    the log-derivative ``-x + (E - 1/2)/x`` of the decaying asymptote. It
    stays O(x_max) in practice because any residual energy error excites the
    growing solution; treat it as a diagnostic only.
    """

    energy: float
    bracket: Tuple[float, float]
    iterations: int
    terminal_log_derivative_mismatch: float


def _resolve(alpha: float, branch) -> BranchExponent:
    if isinstance(branch, BranchExponent):
        return branch
    return branch_exponent(alpha, branch)


@lru_cache(maxsize=64)
def _log_grid(x0: float, x_max: float, step: float):
    # Fixed step in t = ln x: near the origin x^s varies on the scale x itself,
    # so a uniform step in x would be O(1) relative to x at the first nodes.
    t0, t1 = math.log(x0), math.log(x_max)
    n = max(1, math.ceil((t1 - t0) / step - 1e-9))
    h = (t1 - t0) / n
    x = np.exp(t0 + 0.5 * h * np.arange(2 * n + 1))
    x[-1] = x_max
    x2 = x * x
    x2.flags.writeable = False
    return h, x2


def _shoot_endpoint(alpha: float, s: float, e: float, x0: float, x_max: float, step: float):
    """Return ``(psi, dpsi)`` at ``x_max`` for trial energy ``e``.

    Integrates ``phi = x^(-1/2) psi`` in ``t = ln x``, where the equation is
    ``phi'' = (alpha + 1/4 + x^4 - 2 E x^2) phi``. The start values come
    from ``psi ~ x^s (1 - E x^2 / (2s + 1))``.
    """
    h, x2 = _log_grid(x0, x_max, step)
    g = (alpha + 0.25) + x2 * (x2 - 2.0 * e)
    b = -e / (2 * s + 1)
    psi = x0**s * (1 + b * x0 * x0)
    dpsi = s * x0 ** (s - 1) + b * (s + 2) * x0 ** (s + 1)
    phi = psi / math.sqrt(x0)
    dphi = math.sqrt(x0) * (dpsi - 0.5 * psi / x0)
    ys, dys, stop = rk4_linear(g, h, phi, dphi)
    x_end = math.sqrt(x2[2 * stop])
    phi_end, dphi_end = ys[stop], dys[stop]
    psi_end = math.sqrt(x_end) * phi_end
    dpsi_end = (dphi_end + 0.5 * phi_end) / math.sqrt(x_end)
    return psi_end, dpsi_end


def shoot_eigenvalue(
    alpha: float,
    branch,
    bracket: Tuple[float, float],
    tol: float = SHOOT_TOL,
    x0: float = SHOOT_X0,
    x_max: float = SHOOT_X_MAX,
    step: float = SHOOT_STEP,
) -> ShootingResult:
    """Bisect the energy on the sign of ``psi(x_max)`` inside ``bracket``.

    ``branch`` selects the origin behaviour ``psi ~ x^s``. The bracket must
    contain exactly one eigenvalue; see :func:`scan_brackets`.
    """
    b = _resolve(alpha, branch)
    b.require_admissible()
    s = b.s
    lo, hi = map(float, bracket)
    if not lo < hi:
        raise BracketError(f"empty bracket ({lo}, {hi})")

    def sign_at(e):
        return math.copysign(1.0, _shoot_endpoint(alpha, s, e, x0, x_max, step)[0])

    sign_lo = sign_at(lo)
    if sign_at(hi) == sign_lo:
        raise BracketError(f"psi(x_max) has no sign change on ({lo}, {hi})")
    iterations = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if sign_at(mid) == sign_lo:
            lo = mid
        else:
            hi = mid
        iterations += 1
    e = 0.5 * (lo + hi)
    psi, dpsi = _shoot_endpoint(alpha, s, e, x0, x_max, step)
    mismatch = dpsi / psi - (-x_max + (e - 0.5) / x_max)
    return ShootingResult(e, (lo, hi), iterations, mismatch)


def scan_brackets(
    alpha: float,
    branch,
    n_max: int,
    d_e: float = SCAN_DE,
    x0: float = SHOOT_X0,
    x_max: float = SHOOT_X_MAX,
    step: float = SHOOT_STEP,
) -> List[Tuple[float, float]]:
    """Coarse scan of ``sign psi(x_max)`` on ``E = s + 0.1, s + 0.1 + d_e, ...``.

    The scan covers ``[s + 0.1, s + 0.5 + 2 n_max]`` and one further point so
    the top level is bracketed too. Returns consecutive pairs with a sign
    change, lowest first.
    """
    b = _resolve(alpha, branch)
    b.require_admissible()
    top = b.s + 0.5 + 2 * n_max
    count = math.floor((top - (b.s + 0.1)) / d_e) + 2
    grid = b.s + 0.1 + d_e * np.arange(count)
    signs = [math.copysign(1.0, _shoot_endpoint(alpha, b.s, e, x0, x_max, step)[0]) for e in grid]
    return [
        (float(grid[i]), float(grid[i + 1]))
        for i in range(count - 1)
        if signs[i] != signs[i + 1]
    ]


def shoot_levels(alpha: float, branch, n_max: int, tol: float = SHOOT_TOL) -> List[ShootingResult]:
    """All levels with ``n <= n_max`` on one branch, by scan then bisection."""
    brackets = scan_brackets(alpha, branch, n_max)[: n_max + 1]
    return [shoot_eigenvalue(alpha, branch, br, tol) for br in brackets]


def default_residual_grid(x_min: float = 0.1, x_max: float = 5.0, h: float = 1e-3) -> np.ndarray:
    n = int(round((x_max - x_min) / h))
    return np.linspace(x_min, x_max, n + 1)


def _second_derivative(f: np.ndarray, h: float, stride: int = 1) -> np.ndarray:
    k = stride
    c = f[2 * k : f.size - 2 * k]
    return (
        -f[: f.size - 4 * k]
        + 16 * f[k : f.size - 3 * k]
        - 30 * c
        + 16 * f[3 * k : f.size - k]
        - f[4 * k :]
    ) / (12 * (k * h) ** 2)


def residual_check(state: EigenState, grid=None, tol: float = 1e-6) -> float:
    """Max of ``|H psi - E psi| / max|psi|`` over the interior of a uniform grid.

    ``H psi`` uses the 5-point second difference. The stencil error is
    estimated from the difference with the doubled spacing; if that estimate
    exceeds ``tol`` the grid is rejected with :class:`ResolutionError`.
    """
    x = default_residual_grid() if grid is None else np.asarray(getattr(grid, "x", grid), float)
    if x.size < 9:
        raise ResolutionError("residual grid needs at least 9 points")
    dx = np.diff(x)
    h = float(dx.mean())
    if not np.allclose(dx, h, rtol=1e-6, atol=0):
        raise ResolutionError("residual grid must be uniformly spaced")
    psi = eval_state(state, x)
    scale = np.max(np.abs(psi))
    d2 = _second_derivative(psi, h)
    d2_coarse = _second_derivative(psi, h, stride=2)
    stencil_err = np.max(np.abs(d2[2:-2] - d2_coarse)) / 15 * 0.5 / scale
    if stencil_err > tol:
        raise ResolutionError(
            f"estimated stencil error {stencil_err:.2e} exceeds tol={tol:g}; refine the grid"
        )
    xi = x[2:-2]
    potential = 0.5 * state.alpha / xi**2 + 0.5 * xi**2
    h_psi = -0.5 * d2 + potential * psi[2:-2]
    return float(np.max(np.abs(h_psi - state.energy * psi[2:-2])) / scale)


@dataclass(frozen=True)
class HftReport:
    """Hellmann-Feynman comparison for one state.

    ``expectation_half_inverse_x2`` is ``<x^-2>/2`` or ``math.inf`` when the
    integral diverges at the origin (``s <= 1/2``); in that case
    ``cutoff_scan`` holds ``(eps, int_eps^inf psi^2 / (2 x^2) dx)`` pairs and
    ``cutoff_exponent`` the fitted log-log slope.
    """

    alpha: float
    branch: Branch
    n: int
    s: float
    dE_dalpha_analytic: float
    dE_dalpha_finite_difference: float
    expectation_half_inverse_x2: float
    expectation_quadrature: Optional[float] = None
    cutoff_scan: Tuple[Tuple[float, float], ...] = ()
    cutoff_exponent: Optional[float] = None

    @property
    def divergent(self) -> bool:
        return math.isinf(self.expectation_half_inverse_x2)


def hft_check(alpha: float, branch, n: int = 0, dalpha: float = 1e-5,
              epsilons: Sequence[float] = CUTOFF_EPSILONS) -> HftReport:
    """Compare the analytic slope, a central difference and ``<x^-2>/2``."""
    if not dalpha > 0:
        raise StepError("dalpha must be positive")
    if not alpha - dalpha > ALPHA_CRITICAL:
        raise StepError(f"alpha - dalpha = {alpha - dalpha!r} leaves (-1/4, inf)")
    b = _resolve(alpha, branch)
    b.require_admissible()
    lower = branch_exponent(alpha - dalpha, b.branch)
    upper = branch_exponent(alpha + dalpha, b.branch)
    lower.require_admissible()
    upper.require_admissible()

    root = math.sqrt(1 + 4 * alpha)
    analytic = 1 / root if b.branch is Branch.PLUS else -1 / root
    fd = (energy(n, upper.s) - energy(n, lower.s)) / (2 * dalpha)

    state = build_state(n, b)

    def weighted(x):
        return 0.5 * (eval_state(state, x) / x) ** 2

    try:
        expectation = 0.5 * expectation_power(state, -2.0)
    except DivergenceError:
        scan = tuple(
            (eps, integrate_semiaxis(weighted, tol=1e-12, lower=eps).value) for eps in epsilons
        )
        logs = np.log([[eps, v] for eps, v in scan])
        slope = float(np.polyfit(logs[:, 0], logs[:, 1], 1)[0])
        return HftReport(alpha, b.branch, n, b.s, analytic, fd, math.inf,
                         cutoff_scan=scan, cutoff_exponent=slope)
    quad = integrate_semiaxis(weighted, tol=1e-12).value
    return HftReport(alpha, b.branch, n, b.s, analytic, fd, expectation, expectation_quadrature=quad)


@dataclass(frozen=True)
class GrowthReport:
    """Truncated-series values ``|psi_J(x_probe)|`` for ``J = 0 .. len - 1``."""

    alpha: float
    s: float
    energy: float
    x_probe: float
    threshold_index: int
    magnitudes: Tuple[float, ...]

    @property
    def monotone_after_threshold(self) -> bool:
        tail = self.magnitudes[self.threshold_index:]
        return all(b >= a for a, b in zip(tail, tail[1:]))

    @property
    def growth_factor(self) -> float:
        """``|psi|`` at the last order over ``|psi|`` at the threshold order."""
        return self.magnitudes[-1] / self.magnitudes[self.threshold_index]


def nonnormalizable_demo(alpha: float, branch, e_off: float, x_probe: float = 3.0,
                         beta: float = 0.75, max_terms: int = 200) -> GrowthReport:
    """Sum the non-terminating series at ``e_off`` and record ``|psi|`` per truncation order."""
    b = _resolve(alpha, branch)
    b.require_admissible()
    if is_eigenvalue(e_off, b.s, tol=1e-6):
        raise PreconditionError(f"E={e_off!r} is within 1e-6 of an eigenvalue for s={b.s!r}")
    if not 2.0 <= x_probe <= 4.0:
        raise PreconditionError("x_probe must lie in [2, 4]")
    ctx = RecurrenceContext(b.s, e_off)
    k = series_tail_ratio_bound(ctx, beta)
    sums = truncated_series(ctx, x_probe**2, max_terms=max_terms)
    prefactor = x_probe**b.s * math.exp(-0.5 * x_probe**2)
    mags = tuple(float(v) for v in np.abs(prefactor * sums))
    if len(mags) <= k:
        raise PreconditionError("series truncated before the threshold index")
    return GrowthReport(alpha, b.s, e_off, x_probe, k, mags)

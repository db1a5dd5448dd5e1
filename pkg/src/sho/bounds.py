"""Comparison bounds for power series built from two-term recurrences.

If ``a_{j+1} = A_j a_j`` and ``b_{j+1} = B_j b_j`` with ``A_j >= B_j > 0``
from index ``k`` on, then for ``r > 0``

    S(r) >= (a_k / b_k) T(r) + sum_{j<=k} (a_j - (a_k / b_k) b_j) r^j

Choosing ``B_j = beta / (j + 1)`` makes ``T(r) = exp(beta r)``, which is
what rules out normalizable solutions away from the quantized energies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Tuple, Union

import numpy as np

from .errors import DomainError, OrderingError, PreconditionError
from .frobenius import RecurrenceContext, recurrence_ratio, series_tail_ratio_bound, truncated_series
from .model import BranchExponent, branch_exponent

Ratios = Union[Callable[[int], float], Sequence[float]]

MAX_TERMS = 5000
REL_CUTOFF = 1e-18


def _ratio_fn(ratios: Ratios) -> Callable[[int], float]:
    if callable(ratios):
        return ratios
    seq = list(ratios)

    def f(j):
        if j >= len(seq):
            raise IndexError(f"ratio sequence has only {len(seq)} entries, needed j={j}")
        return seq[j]

    return f


def ttrr_ratios(s: float, e: float) -> Callable[[int], float]:
    """The oscillator recurrence ratios ``A_j`` as a callable of ``j``."""
    ctx = RecurrenceContext(s, e)
    return lambda j: recurrence_ratio(ctx, j)


def exp_ratios(beta: float) -> Callable[[int], float]:
    """Ratios ``beta / (j + 1)`` of the exponential series ``exp(beta r)``."""
    return lambda j: beta / (j + 1)


def _coefficients(ratio, c0, count):
    c = np.empty(count)
    c[0] = c0
    for j in range(count - 1):
        c[j + 1] = c[j] * ratio(j)
    return c


def _check_order(ra, rb, start, stop):
    for j in range(start, stop):
        a, b = ra(j), rb(j)
        if not (a >= b > 0):
            raise OrderingError(f"A_j >= B_j > 0 violated at j={j} (A={a!r}, B={b!r})", index=j)


def _power_terms(c, r):
    # c_j r^j without forming r^j separately (avoids overflow for long series).
    out = np.empty_like(c)
    p = 1.0
    for j, cj in enumerate(c):
        out[j] = cj * p
        p *= r
    return out


def _convergent_length(ra, rb, a0, b0, r, k):
    ta, tb, sa, sb = a0, b0, 0.0, 0.0
    for j in range(MAX_TERMS):
        sa += ta
        sb += tb
        if j > k and abs(ta) <= REL_CUTOFF * abs(sa) and abs(tb) <= REL_CUTOFF * abs(sb):
            return j + 1
        ta *= ra(j) * r
        tb *= rb(j) * r
    return MAX_TERMS


def compare_series(ratios_a: Ratios, ratios_b: Ratios, a0: float, b0: float, k: int,
                   r: float, truncation: int = None) -> Tuple[float, float]:
    """Return ``(lhs, rhs)`` of the comparison inequality at ``r``.

    Both series are summed through index ``truncation`` (default: until the
    next term is below ``1e-18`` of the partial sum). Either series is
    multiplied by -1 if its ``k``-th coefficient is negative. The ordering
    ``A_j >= B_j > 0`` is checked for ``k <= j < truncation``, which covers
    every ratio entering ``a_j / a_k`` and ``b_j / b_k`` in the sum.

    Raises
    ------
    OrderingError
        Naming the first index where the ratio ordering fails.
    """
    if a0 == 0 or b0 == 0:
        raise PreconditionError("a0 and b0 must be non-zero")
    if k < 0 or not r > 0:
        raise DomainError("need k >= 0 and r > 0")
    ra, rb = _ratio_fn(ratios_a), _ratio_fn(ratios_b)
    if truncation is None:
        _check_order(ra, rb, k, k + 1)
        truncation = _convergent_length(ra, rb, a0, b0, r, k) - 1
    if truncation < k:
        raise DomainError("truncation must be >= k")
    _check_order(ra, rb, k, truncation)
    a = _coefficients(ra, a0, truncation + 1)
    b = _coefficients(rb, b0, truncation + 1)
    if a[k] == 0 or b[k] == 0:
        raise PreconditionError("a_k and b_k must be non-zero")
    if a[k] < 0:
        a = -a
    if b[k] < 0:
        b = -b
    ratio = a[k] / b[k]
    ta, tb = _power_terms(a, r), _power_terms(b, r)
    lhs = math.fsum(ta)
    rhs = ratio * math.fsum(tb) + math.fsum(ta[: k + 1] - ratio * tb[: k + 1])
    return lhs, rhs


@dataclass(frozen=True)
class SeriesBound:
    """``sign * S(r) >= C exp(beta r) + P_k(r)`` for ``r >= 0``.

    ``correction_poly[j]`` is the coefficient of ``r^j`` in ``P_k``.
    """

    beta: float
    k: int
    C: float
    correction_poly: Tuple[float, ...]
    sign: int = 1

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return self.C * np.exp(self.beta * r) + np.polynomial.polynomial.polyval(r, self.correction_poly)


def exponential_lower_bound(ratios_a: Ratios, a0: float, beta: float, k: int,
                            window: int = 500) -> SeriesBound:
    """Build ``C = a_k / b_k`` (``b_j = beta^j / j!``) and ``P_k`` from a ratio sequence.

    The ordering ``A_j >= beta / (j + 1)`` is verified for
    ``k <= j < k + window``.
    """
    if not beta > 0:
        raise DomainError("beta must be positive")
    if k < 0:
        raise DomainError("k must be non-negative")
    ra = _ratio_fn(ratios_a)
    rb = exp_ratios(beta)
    _check_order(ra, rb, k, k + window)
    a = _coefficients(ra, a0, k + 1)
    if a[k] == 0:
        raise PreconditionError("a_k vanishes; the series terminates before k")
    sign = 1 if a[k] > 0 else -1
    a = sign * a
    b = np.array([beta**j / math.factorial(j) for j in range(k + 1)])
    c = a[k] / b[k]
    poly = a - c * b
    poly[k] = 0.0
    return SeriesBound(beta, k, float(c), tuple(float(p) for p in poly), sign)


def series_value(ratios: Ratios, a0: float, r: float) -> float:
    """``sum_j a_j r^j`` summed until terms drop below ``1e-18`` of the partial sum."""
    ra = _ratio_fn(ratios)
    term, total = a0, 0.0
    terms = []
    for j in range(MAX_TERMS):
        terms.append(term)
        total += term
        if j > 0 and abs(term) <= REL_CUTOFF * abs(total):
            break
        term *= ra(j) * r
        if term == 0.0:
            break
    return math.fsum(terms)


def scaled_ratio(s: float, e: float, j: int) -> float:
    """``j A_j``; tends to 1 as ``j -> inf``, approaching as ``1 - (2s + 5 + 2E)/(4j)``."""
    return j * recurrence_ratio(RecurrenceContext(s, e), j)


@dataclass(frozen=True)
class GrowthVerdict:
    """Lower-bound witness that ``psi^2`` grows like ``exp((2 beta - 1) x^2)``.

    ``witness`` rows are ``(x, lower bound on sign*u(x^2), psi^2 lower bound,
    psi^2 from the summed series)``.
    """

    alpha: float
    s: float
    energy: float
    bound: SeriesBound
    witness: Tuple[Tuple[float, float, float, float], ...]

    @property
    def growth_rate(self) -> float:
        return 2 * self.bound.beta - 1

    @property
    def increasing(self) -> bool:
        w = [row[2] for row in self.witness]
        return all(v > 0 for v in w) and all(b > a for a, b in zip(w, w[1:]))

    @property
    def consistent(self) -> bool:
        """The summed series respects the bound at every witness point."""
        return all(series >= lower * (1 - 1e-12) for _, _, lower, series in self.witness)


def growth_implies_nonnormalizable(alpha: float, branch, e_off: float, beta: float = 0.75,
                                   xs: Sequence[float] = (3.0, 4.0, 5.0)) -> GrowthVerdict:
    """Compose the ratio threshold and the exponential bound with ``r = x^2``.

    Away from an eigenvalue, ``|u(x)| >= C exp(beta x^2) + P_k(x^2)`` so
    ``psi^2 >= x^(2s) exp(-x^2) (C exp(beta x^2) + P_k)^2``, which grows
    without bound because ``2 beta - 1 > 0``.
    """
    if not 0.5 < beta < 1.0:
        raise DomainError(f"beta must lie in (1/2, 1), got {beta!r}")
    b = branch if isinstance(branch, BranchExponent) else branch_exponent(alpha, branch)
    b.require_admissible()
    ctx = RecurrenceContext(b.s, e_off)
    k = series_tail_ratio_bound(ctx, beta)
    ratios = ttrr_ratios(b.s, e_off)
    bound = exponential_lower_bound(ratios, 1.0, beta, k)
    rows = []
    for x in xs:
        r = x * x
        u = bound.sign * series_value(ratios, 1.0, r)
        lower = float(bound(r))
        envelope = x ** (2 * b.s) * math.exp(-r)
        psi2_lower = envelope * lower**2 if lower > 0 else 0.0
        rows.append((float(x), lower, psi2_lower, envelope * u * u))
    return GrowthVerdict(alpha, b.s, e_off, bound, tuple(rows))

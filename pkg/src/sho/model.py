"""Oscillator parameters, unit conversion and indicial (origin) analysis.

The Hamiltonian on the half line ``x > 0`` is

    H = -(hbar^2 / 2m) d^2/dx^2 + V_{-2} / (2 x^2) + V_2 x^2 / 2

In units of length ``L = hbar^(1/2) / (m V_2)^(1/4)`` and energy ``hbar omega``
it becomes ``-1/2 d^2/dx^2 + alpha / (2 x^2) + x^2 / 2`` with the single
coupling ``alpha = m V_{-2} / hbar^2``.

Near the origin a solution behaves as ``x^s`` with ``s (s - 1) = alpha``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple

from .errors import BranchError, DomainError

#: Smallest coupling for which the indicial exponents are real.
ALPHA_CRITICAL = -0.25


class Branch(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"


class Admissibility(enum.Enum):
    ADMISSIBLE = "admissible"
    INADMISSIBLE = "inadmissible"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class PhysicalParams:
    """Dimensional inputs: mass, stiffness ``V_2``, singular strength ``V_{-2}``, hbar."""

    mass: float
    stiffness: float
    singular_strength: float
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("mass", "stiffness", "hbar"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"{name} must be positive and finite, got {value!r}")
        if not math.isfinite(self.singular_strength):
            raise DomainError("singular_strength must be finite")

    @property
    def omega(self) -> float:
        return math.sqrt(self.stiffness / self.mass)

    @property
    def length_scale(self) -> float:
        return math.sqrt(self.hbar) / (self.mass * self.stiffness) ** 0.25

    @property
    def energy_scale(self) -> float:
        return self.hbar * self.omega


@dataclass(frozen=True)
class OscillatorParams:
    """Dimensionless coupling ``alpha``.

    ``length_scale`` and ``energy_scale`` are only set when the instance was
    produced by :func:`to_dimensionless`; they are used for reporting.
    """

    alpha: float
    length_scale: Optional[float] = None
    energy_scale: Optional[float] = None

    def __post_init__(self):
        if not math.isfinite(self.alpha):
            raise DomainError(f"alpha must be finite, got {self.alpha!r}")


@dataclass(frozen=True)
class BranchExponent:
    branch: Branch
    s: float
    admissibility: Admissibility

    @property
    def admissible(self) -> bool:
        return self.admissibility is Admissibility.ADMISSIBLE

    def require_admissible(self) -> None:
        if not self.admissible:
            raise BranchError(
                f"branch {self.branch.value} (s={self.s!r}) is {self.admissibility.value}"
            )


def to_dimensionless(p: PhysicalParams) -> OscillatorParams:
    """Convert physical parameters to the dimensionless coupling.

    Examples
    --------
    >>> to_dimensionless(PhysicalParams(2.0, 8.0, 1.0, 1.0)).alpha
    2.0
    """
    alpha = p.mass * p.singular_strength / p.hbar**2
    return OscillatorParams(alpha, length_scale=p.length_scale, energy_scale=p.energy_scale)


def _coerce_alpha(params) -> float:
    alpha = params.alpha if isinstance(params, OscillatorParams) else float(params)
    if not math.isfinite(alpha):
        raise DomainError(f"alpha must be finite, got {alpha!r}")
    if alpha < ALPHA_CRITICAL:
        raise DomainError(
            f"alpha={alpha!r} < -1/4: no real indicial exponents (fall to the center)"
        )
    return alpha


def indicial_exponents(params) -> Tuple[BranchExponent, BranchExponent]:
    """Return ``(plus, minus)`` branch exponents ``s = (1 +- sqrt(1 + 4 alpha)) / 2``.

    ``params`` may be an :class:`OscillatorParams` or a bare float. At
    ``alpha == -1/4`` both roots coincide at ``1/2`` and both branches are
    tagged degenerate; the second solution there is ``x^(1/2) ln x``, which is
    not a Frobenius state of the form used by the solver.
    """
    alpha = _coerce_alpha(params)
    if alpha == ALPHA_CRITICAL:
        return (
            BranchExponent(Branch.PLUS, 0.5, Admissibility.DEGENERATE),
            BranchExponent(Branch.MINUS, 0.5, Admissibility.DEGENERATE),
        )
    s_plus = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * alpha))
    # Vieta form avoids cancellation in 1 - sqrt(1 + 4 alpha) for small alpha.
    s_minus = -alpha / s_plus + 0.0  # + 0.0 turns -0.0 into 0.0
    minus_status = Admissibility.ADMISSIBLE if alpha <= 0 else Admissibility.INADMISSIBLE
    return (
        BranchExponent(Branch.PLUS, s_plus, Admissibility.ADMISSIBLE),
        BranchExponent(Branch.MINUS, s_minus, minus_status),
    )


def branch_exponent(params, branch) -> BranchExponent:
    """Pick one branch; ``branch`` is a :class:`Branch` or its string value."""
    plus, minus = indicial_exponents(params)
    return plus if Branch(branch) is Branch.PLUS else minus


def admissible_branches(params) -> Tuple[BranchExponent, ...]:
    """Admissible branches ordered minus first, as used for tabulated output."""
    plus, minus = indicial_exponents(params)
    return tuple(b for b in (minus, plus) if b.admissible)

"""Exact spectrum of the singular harmonic oscillator ``alpha/(2x^2) + x^2/2``.

Closed-form Frobenius eigenstates plus independent numerical checks
(shooting, quadrature, finite-difference residuals) and series bounds.
"""
from .bounds import (
    SeriesBound,
    compare_series,
    exponential_lower_bound,
    growth_implies_nonnormalizable,
)
from .errors import (
    BracketError,
    BranchError,
    ConvergenceError,
    DivergenceError,
    DomainError,
    OrderingError,
    PreconditionError,
    ResolutionError,
    SHOError,
    StepError,
)
from .frobenius import (
    EigenState,
    RecurrenceContext,
    build_state,
    energy,
    eval_state,
    recurrence_ratio,
    series_tail_ratio_bound,
    value_at_origin,
)
from .model import (
    Admissibility,
    Branch,
    BranchExponent,
    OscillatorParams,
    PhysicalParams,
    indicial_exponents,
    to_dimensionless,
)
from .numerics import (
    GridFunction,
    QuadratureResult,
    gaussian_moment,
    integrate_ode,
    integrate_semiaxis,
    log_gamma,
)
from .oracle import (
    HftReport,
    ShootingResult,
    hft_check,
    nonnormalizable_demo,
    residual_check,
    shoot_eigenvalue,
)

__version__ = "0.1.0"

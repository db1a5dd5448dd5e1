import math

import pytest
from hypothesis import given, strategies as st

from sho.errors import BranchError, DomainError
from sho.model import (
    Admissibility,
    Branch,
    OscillatorParams,
    PhysicalParams,
    admissible_branches,
    branch_exponent,
    indicial_exponents,
    to_dimensionless,
)


def test_to_dimensionless_examples():
    assert to_dimensionless(PhysicalParams(1, 1, 0, 1)).alpha == 0
    assert to_dimensionless(PhysicalParams(1, 1, 2, 1)).alpha == 2
    p = to_dimensionless(PhysicalParams(2, 8, 1, 1))
    assert p.alpha == 2
    assert p.energy_scale == pytest.approx(2.0, rel=1e-15)
    # L = hbar^(1/2) / (m V2)^(1/4) = 1 / 16^(1/4)
    assert p.length_scale == pytest.approx(0.5, rel=1e-15)


@pytest.mark.parametrize("kw", [dict(mass=0), dict(stiffness=-1), dict(hbar=0)])
def test_physical_params_reject_nonpositive(kw):
    args = dict(mass=1.0, stiffness=1.0, singular_strength=0.0, hbar=1.0)
    args.update(kw)
    with pytest.raises(DomainError):
        PhysicalParams(**args)


def test_exponents_at_zero():
    plus, minus = indicial_exponents(0.0)
    assert (plus.s, minus.s) == (1.0, 0.0)
    assert math.copysign(1, minus.s) == 1
    assert plus.admissible and minus.admissible


def test_exponents_paper_values():
    plus, minus = indicial_exponents(OscillatorParams(-0.0475))
    assert plus.s == pytest.approx(0.95, abs=1e-12)
    assert minus.s == pytest.approx(0.05, abs=1e-12)
    assert plus.admissible and minus.admissible


def test_exponents_degenerate():
    plus, minus = indicial_exponents(-0.25)
    assert plus.s == minus.s == 0.5
    assert plus.admissibility is minus.admissibility is Admissibility.DEGENERATE
    with pytest.raises(BranchError):
        plus.require_admissible()


def test_exponents_repulsive():
    plus, minus = indicial_exponents(2.0)
    assert plus.s == 2.0 and minus.s == -1.0
    assert plus.admissibility is Admissibility.ADMISSIBLE
    assert minus.admissibility is Admissibility.INADMISSIBLE


def test_fall_to_center_rejected():
    with pytest.raises(DomainError):
        indicial_exponents(-0.3)


@pytest.mark.parametrize(
    "alpha, expected",
    [
        (-0.25, (Admissibility.DEGENERATE, Admissibility.DEGENERATE)),
        (-0.2, (Admissibility.ADMISSIBLE, Admissibility.ADMISSIBLE)),
        (-0.1, (Admissibility.ADMISSIBLE, Admissibility.ADMISSIBLE)),
        (0.0, (Admissibility.ADMISSIBLE, Admissibility.ADMISSIBLE)),
        (0.5, (Admissibility.ADMISSIBLE, Admissibility.INADMISSIBLE)),
        (1.0, (Admissibility.ADMISSIBLE, Admissibility.INADMISSIBLE)),
        (2.0, (Admissibility.ADMISSIBLE, Admissibility.INADMISSIBLE)),
    ],
)
def test_admissibility_trichotomy(alpha, expected):
    plus, minus = indicial_exponents(alpha)
    assert (plus.admissibility, minus.admissibility) == expected
    if -0.25 < alpha <= 0:
        assert 1 >= plus.s > 0.5 > minus.s >= 0


def test_branch_lookup_and_ordering():
    assert branch_exponent(-0.1, "minus").branch is Branch.MINUS
    assert [b.branch for b in admissible_branches(-0.1)] == [Branch.MINUS, Branch.PLUS]
    assert [b.branch for b in admissible_branches(0.1)] == [Branch.PLUS]


@given(st.floats(min_value=-0.25, max_value=1e4))
def test_vieta(alpha):
    plus, minus = indicial_exponents(alpha)
    scale = abs(plus.s) + abs(minus.s)  # relative to the magnitude of the summands
    assert abs(plus.s + minus.s - 1.0) <= 1e-14 * scale
    assert plus.s * minus.s == pytest.approx(-alpha, rel=1e-14, abs=1e-15)


@given(st.floats(min_value=-0.25, max_value=100), st.floats(min_value=1e-6, max_value=10))
def test_monotone(alpha, d):
    p1, m1 = indicial_exponents(alpha)
    p2, m2 = indicial_exponents(alpha + d)
    assert p2.s > p1.s
    assert m2.s < m1.s

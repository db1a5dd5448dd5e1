import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import ALPHA_GRID, admissible
from sho.errors import BranchError, DomainError, PreconditionError
from sho.frobenius import (
    RecurrenceContext,
    build_state,
    energy,
    eval_state,
    inner_product,
    is_eigenvalue,
    ratio_at_eigenvalue,
    recurrence_ratio,
    series_coefficients,
    series_tail_ratio_bound,
    truncated_series,
    value_at_origin,
)
from sho.model import branch_exponent, indicial_exponents
from sho.numerics import integrate_semiaxis


def test_recurrence_ratio_examples():
    assert recurrence_ratio(RecurrenceContext(1.0, 1.5), 0) == 0.0
    for s in (0.05, 0.5, 1.3, 2.0):
        assert recurrence_ratio(RecurrenceContext(s, energy(1, s)), 0) == pytest.approx(-2 / (2 * s + 1), rel=1e-15)
    assert recurrence_ratio(RecurrenceContext(0.5, 0.0), 0) == 0.5


def test_energy_examples():
    assert energy(0, 1.0) == 1.5
    assert energy(0, 0.05) == pytest.approx(0.55, rel=1e-15)
    assert energy(3, 2.0) == 8.5
    with pytest.raises(DomainError):
        energy(-1, 1.0)


@pytest.mark.parametrize("alpha", ALPHA_GRID)
@pytest.mark.parametrize("n", range(11))
def test_termination_exact(alpha, n):
    for b in admissible(alpha):
        c = series_coefficients(RecurrenceContext(b.s, energy(n, b.s)), n + 3)
        assert c[n] != 0.0
        assert c[n + 1] == 0.0
        assert c[n + 2] == 0.0


@given(st.floats(min_value=0.0, max_value=50.0), st.integers(min_value=0, max_value=10))
def test_termination_random_s(s, n):
    assert recurrence_ratio(RecurrenceContext(s, energy(n, s)), n) == 0.0


@pytest.mark.parametrize("alpha", ALPHA_GRID)
def test_ratio_closed_form(alpha):
    for b in admissible(alpha):
        for n in range(6):
            ctx = RecurrenceContext(b.s, energy(n, b.s))
            for j in range(21):
                assert recurrence_ratio(ctx, j) == pytest.approx(
                    ratio_at_eigenvalue(n, b.s, j), rel=1e-15, abs=1e-300
                )


def test_n0_state_closed_form():
    for alpha in ALPHA_GRID:
        for b in admissible(alpha):
            st_ = build_state(0, b)
            assert st_.norm == pytest.approx(math.sqrt(2 / math.gamma(b.s + 0.5)), rel=1e-12)
    assert build_state(0, branch_exponent(0.0, "plus")).norm == pytest.approx(
        math.sqrt(4 / math.sqrt(math.pi)), rel=1e-14
    )


def test_n1_polynomial():
    for s in (0.05, 0.95, 2.0):
        b = branch_exponent(s * (s - 1), "plus" if s > 0.5 else "minus")
        st_ = build_state(1, b)
        assert st_.coeffs[0] == 1.0
        assert st_.coeffs[1] == pytest.approx(-2 / (2 * b.s + 1), rel=1e-14)


def test_sign_convention():
    b = branch_exponent(0.5, "plus")
    assert build_state(2, b, c0_sign=-1).coeffs == tuple(-c for c in build_state(2, b).coeffs)


@pytest.mark.parametrize("alpha", ALPHA_GRID)
def test_coefficients_alternate(alpha):
    for b in admissible(alpha):
        c = build_state(6, b).coeffs
        assert all(np.sign(c[j + 1]) == -np.sign(c[j]) for j in range(6))


def test_inadmissible_branch_rejected():
    with pytest.raises(BranchError):
        build_state(0, branch_exponent(2.0, "minus"))
    with pytest.raises(BranchError):
        build_state(0, indicial_exponents(-0.25)[0])


def test_eval_examples():
    b = branch_exponent(-0.0475, "plus")
    st_ = build_state(0, b)
    expected = math.sqrt(2 / math.gamma(1.45)) * math.exp(-0.5)
    assert eval_state(st_, 1.0) == pytest.approx(expected, rel=1e-12)
    assert value_at_origin(build_state(0, branch_exponent(0.0, "plus"))) == 0.0
    ho_even = build_state(0, branch_exponent(0.0, "minus"))
    assert value_at_origin(ho_even) == pytest.approx(math.pi**-0.25 * math.sqrt(2), rel=1e-14)
    assert eval_state(build_state(0, branch_exponent(0.0, "plus")), 1e-9) < 1e-8
    for s_alpha, name in [(-0.0475, "minus"), (-0.0475, "plus"), (2.0, "plus")]:
        b = branch_exponent(s_alpha, name)
        node = math.sqrt((2 * b.s + 1) / 2)
        assert abs(eval_state(build_state(1, b), node)) < 1e-15


def test_eval_domain():
    st_ = build_state(0, branch_exponent(0.0, "plus"))
    with pytest.raises(DomainError):
        eval_state(st_, 0.0)
    with pytest.raises(DomainError):
        eval_state(st_, np.array([1.0, -1.0]))


def test_eval_log_space_matches_high_precision():
    b = branch_exponent(0.5, "plus")
    st_ = build_state(3, b)
    mpmath.mp.dps = 40
    for x in (19.5, 20.5, 25.0, 38.0):
        xm = mpmath.mpf(x)
        poly = sum(mpmath.mpf(c) * xm ** (2 * j) for j, c in enumerate(st_.coeffs))
        ref = mpmath.mpf(st_.norm) * xm ** mpmath.mpf(b.s) * mpmath.exp(-xm * xm / 2) * poly
        assert eval_state(st_, x) == pytest.approx(float(ref), rel=1e-12)
    assert eval_state(st_, 60.0) == 0.0


def test_eval_vectorized_matches_scalar():
    st_ = build_state(2, branch_exponent(-0.1, "minus"))
    xs = np.array([0.3, 1.0, 2.5, 21.0])
    np.testing.assert_array_equal(eval_state(st_, xs), [eval_state(st_, float(x)) for x in xs])


@pytest.mark.parametrize("alpha", [-0.0475, 1.0, 2.0])
def test_normalization_and_orthogonality_by_quadrature(alpha):
    for b in admissible(alpha):
        states = [build_state(n, b) for n in range(6)]
        for i, a in enumerate(states):
            for c in states[i:]:
                q = integrate_semiaxis(lambda x: eval_state(a, x) * eval_state(c, x)).value
                expected = 1.0 if a is c else 0.0
                assert abs(q - expected) <= 1e-10


def test_cross_branch_overlap_is_reported():
    plus, minus = indicial_exponents(-0.0475)
    a, b = build_state(0, plus), build_state(1, minus)
    q = integrate_semiaxis(lambda x: eval_state(a, x) * eval_state(b, x)).value
    assert inner_product(a, b) == pytest.approx(q, abs=1e-12)


@pytest.mark.parametrize("alpha", ALPHA_GRID)
def test_node_count(alpha):
    x = np.linspace(1e-4, 12, 200001)
    for b in admissible(alpha):
        for n in range(6):
            psi = eval_state(build_state(n, b), x)
            signs = np.sign(psi[np.abs(psi) > 1e-200])
            assert np.count_nonzero(np.diff(signs)) == n


def test_tail_threshold_examples():
    assert series_tail_ratio_bound(RecurrenceContext(1.0, 0.0), 0.75) == 2
    assert series_tail_ratio_bound(RecurrenceContext(1.0, 2.0), 0.75) == 6
    with pytest.raises(PreconditionError):
        series_tail_ratio_bound(RecurrenceContext(1.0, energy(2, 1.0)), 0.75)
    for beta in (0.5, 1.0, 0.2):
        with pytest.raises(DomainError):
            series_tail_ratio_bound(RecurrenceContext(1.0, 0.0), beta)


@given(st.floats(0.0, 5.0), st.floats(-5.0, 30.0), st.floats(0.51, 0.99))
def test_tail_threshold_is_tight(s, e, beta):
    ctx = RecurrenceContext(s, e)
    if is_eigenvalue(e, s):
        return
    k = series_tail_ratio_bound(ctx, beta)
    assert all(recurrence_ratio(ctx, j) > beta / (j + 1) for j in range(k, k + 300))
    if k > 0:
        threshold = e / (2 * (1 - beta)) + (2 * s + 1) * (2 * beta - 1) / (4 * (1 - beta))
        assert k - 1 <= threshold


def test_truncated_series_stops():
    sums = truncated_series(RecurrenceContext(1.0, 2.0), 9.0)
    assert len(sums) < 200
    terminating = truncated_series(RecurrenceContext(1.0, energy(1, 1.0)), 9.0)
    assert len(terminating) == 2

import cmath

import pytest

from lawson.errors import StepLimitExceeded
from lawson.integrator import ToleranceBudget, integrate
from lawson.linalg import Mat2

ID = (1 + 0j, 0j, 0j, 1 + 0j)


def expm_tracefree(c: Mat2) -> Mat2:
    # exp(C) = cosh(s) Id + sinh(s)/s C with s^2 = -det C
    s = cmath.sqrt(-c.det)
    k = 1.0 if s == 0 else cmath.sinh(s) / s
    return Mat2(cmath.cosh(s), 0, 0, cmath.cosh(s)) + c.scale(k)


@pytest.mark.parametrize("entries", [(0.3, 2 - 1j, 0.5j, -0.3), (1j, 0.2, -3, -1j), (0, 4, -4, 0)])
def test_constant_coefficients_match_exponential(entries):
    c = Mat2(*entries)
    y, err, steps = integrate(lambda t: c.entries(), ID, ToleranceBudget())
    exact = expm_tracefree(c)
    assert (Mat2(*y) - exact).norm() < 1e-8 * max(1.0, exact.norm())
    assert err > 0 and steps > 0


def test_time_dependent_scalar_case():
    # y' = t y on the diagonal: exp(t^2/2)
    y, _, _ = integrate(lambda t: (t, 0, 0, -t), ID, ToleranceBudget(rel_tol=1e-12, abs_tol=1e-14))
    assert abs(y[0] - cmath.exp(0.5)) < 1e-11
    assert abs(y[3] - cmath.exp(-0.5)) < 1e-11


def test_error_estimate_tracks_tolerance():
    c = (0.2, 3, -3, -0.2)
    errs = [integrate(lambda t: c, ID, ToleranceBudget(rel_tol=r, abs_tol=r * 1e-2))[1]
            for r in (1e-6, 1e-9, 1e-12)]
    assert errs[0] > errs[1] > errs[2]


def test_step_limit():
    with pytest.raises(StepLimitExceeded):
        integrate(lambda t: (0, 50, -50, 0), ID, ToleranceBudget(max_steps=5))


def test_budget_validation():
    with pytest.raises(ValueError):
        ToleranceBudget(rel_tol=1e-14)
    with pytest.raises(ValueError):
        ToleranceBudget(abs_tol=0)
    assert ToleranceBudget().rel_tol == 1e-10 and ToleranceBudget().max_steps == 2_000_000


def test_bitwise_reproducible():
    f = lambda t: (t, 1 + t * t, -2j, -t)
    a = integrate(f, ID, ToleranceBudget())
    b = integrate(f, ID, ToleranceBudget())
    assert a == b

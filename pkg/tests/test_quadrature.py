import mpmath
import numpy as np
import pytest
from mpmath import mpf

from conftest import close
from mzvsum.errors import DepthUnsupported, DomainError, NonFinite
from mzvsum.multiseries import lhs_double_pole
from mzvsum.quadrature import (
    check_change_of_variables,
    iterated_integral_prop1,
    iterated_integral_prop3,
    tanh_sinh,
)
from mzvsum.taylor import pochhammer_ratio_series


@pytest.mark.parametrize(
    "f, exact",
    [
        (lambda t: np.ones_like(t), 1),
        (lambda t: t ** -0.5, 2),
        (lambda t: np.log(t), -1),
    ],
)
def test_tanh_sinh_elementary(f, exact):
    r = tanh_sinh(f, level=8)
    assert close(r.value, exact, 1e-13)


def test_tanh_sinh_pair_keeps_complement_accurate():
    # Beta(1/2, 3/2) = pi/2 with the (1-t) factor taken from the complement
    r = tanh_sinh(lambda t, omt: t ** -0.5 * omt ** 0.5, level=8, pair=True)
    assert close(r.value, mpmath.pi / 2, 1e-13)
    # a singularity at t -> 1 that only the complement resolves
    r = tanh_sinh(lambda t, omt: omt ** -0.75, level=8, pair=True)
    assert close(r.value, 4, 1e-12)


def test_tanh_sinh_non_finite_node():
    # t = 1/2 is a node of every level
    with pytest.raises(NonFinite), np.errstate(divide="ignore"):
        tanh_sinh(lambda t: 1 / (t - 0.5))


def test_level_validation():
    with pytest.raises(DomainError):
        tanh_sinh(np.ones_like, level=1)


@pytest.mark.parametrize(
    "n, alpha, beta, exact",
    [
        (1, 1, 1, mpmath.zeta(2)),
        (2, 1, 1, mpmath.zeta(3)),
        (1, "0.5", "0.5", mpmath.pi ** 2 / 2),
    ],
)
@pytest.mark.parametrize("form", ["original", "reflected"])
def test_prop1_integral_closed_forms(n, alpha, beta, exact, form):
    r = iterated_integral_prop1(n, alpha, beta, level=8, form=form)
    assert close(r.value, exact, 1e-8)


@pytest.mark.parametrize(
    "n, alpha, beta, X",
    [(1, "0.5", "2", "0.3"), (2, "1.5", "0.75+0.25i", "0.1"), (2, "1+0.5i", "1", "-0.1+0.05i")],
)
def test_prop1_integral_against_partial_fractions(ctx, n, alpha, beta, X):
    with ctx.working():
        shifted = mpmath.mpmathify(beta.replace("i", "j")) - mpmath.mpmathify(X.replace("i", "j"))
    series = lhs_double_pole(n, 1, alpha, shifted, ctx)
    for form in ("original", "reflected"):
        r = iterated_integral_prop1(n, alpha, beta, X, level=8, form=form)
        assert close(r.value, series.value, 1e-8), form


def test_prop3_integral_closed_form():
    # sum 1/((l+1)**2 (l+2)) = zeta(2) - 1
    for form in ("original", "reflected"):
        r = iterated_integral_prop3(1, 2, 0, level=8, form=form)
        assert close(r.value, mpmath.zeta(2) - 1, 1e-10), form


@pytest.mark.parametrize("n, alpha, X", [(1, "2", "0.25"), (2, "1.5", "0.2"), (2, "1+0.5i", "0.1i")])
def test_prop3_integral_against_series(ctx, n, alpha, X):
    series = pochhammer_ratio_series(n, alpha, X, ctx=ctx)
    for form in ("original", "reflected"):
        r = iterated_integral_prop3(n, alpha, X, level=8, form=form)
        assert close(r.value, series.value, 1e-9), form


def test_error_estimate_decreases_with_level():
    errs = [iterated_integral_prop3(2, "1.5", "0.2", level=lv).err for lv in (5, 6, 7)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-6


def test_error_estimate_bounds_true_error():
    exact = mpmath.zeta(3)
    for lv in (5, 6, 7):
        r = iterated_integral_prop1(2, 1, 1, level=lv)
        assert abs(r.value - exact) <= 10 * r.err + 1e-14


def test_depth_three_is_unsupported():
    with pytest.raises(DepthUnsupported):
        iterated_integral_prop1(3, 1, 1)
    with pytest.raises(DepthUnsupported):
        iterated_integral_prop3(3, 1)


def test_domain_errors():
    with pytest.raises(DomainError):
        iterated_integral_prop1(1, -1, 1)
    with pytest.raises(DomainError):
        iterated_integral_prop1(1, 1, 1, X="0.25")
    with pytest.raises(DomainError):
        iterated_integral_prop3(1, 1, X="0.3")
    with pytest.raises(DomainError):
        iterated_integral_prop3(1, 1, form="sideways")
    with pytest.raises(DomainError):
        check_change_of_variables("eq5", 1, 1)
    with pytest.raises(DomainError):
        check_change_of_variables("eq4", 1, 1)


@pytest.mark.parametrize("n, alpha, beta, X", [(1, "0.5", "1", "0.1"), (2, "1", "0.75+0.25i", "0")])
def test_change_of_variables_eq4(ctx, n, alpha, beta, X):
    rep = check_change_of_variables("eq4", n, alpha, beta, X, ctx=ctx)
    assert rep.id == "cov_eq4"
    assert rep.passed
    assert rep.residual <= 1e-8


def test_change_of_variables_eq6_includes_series(ctx):
    rep = check_change_of_variables("eq6", 1, 2, X="0.25", ctx=ctx)
    assert rep.id == "cov_eq6"
    assert rep.passed
    assert rep.residual <= 1e-8
    assert rep.extra["series_residual"] <= mpf("1e-6")
    assert close(rep.extra["series"], pochhammer_ratio_series(1, 2, "0.25", ctx=ctx).value, 1e-25)

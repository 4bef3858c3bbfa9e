import mpmath
import pytest
import sympy
from mpmath import mpc, mpf

from conftest import close
from mzvsum.errors import DivisionByZero, DomainError
from mzvsum.hpcore import PrecisionContext, parse_complex
from mzvsum.taylor import (
    MAX_ORDER,
    TruncSeries,
    div_linear,
    mul_linear,
    pochhammer_ratio_coeffs,
    pochhammer_ratio_series,
    pochhammer_ratio_sweep,
    prop3_rhs,
    prop3_rhs_orders,
)


def ts(*c):
    return TruncSeries(tuple(mpc(x) for x in c))


def test_mul_linear_examples():
    assert mul_linear(ts(1), 2).coeffs == ts(2).coeffs  # order 0 keeps only the constant
    assert mul_linear(ts(1, 0), 2).coeffs == ts(2, -1).coeffs
    assert mul_linear(ts(1, 0), 1).coeffs == ts(1, -1).coeffs
    assert mul_linear(ts(2, -1, 0), 3).coeffs == ts(6, -5, 1).coeffs


def test_div_linear_examples(ctx):
    with ctx.working():
        a = parse_complex("0.75+0.25i")
        out = div_linear(ts(1, 0, 0), a, ctx)
        for j, c in enumerate(out.coeffs):
            assert abs(c - a ** -(j + 1)) < mpf(10) ** -40
    assert div_linear(ts(1, 1), 1, ctx).coeffs == ts(1, 2).coeffs


def test_mul_then_div_is_identity(ctx):
    with ctx.working():
        s = ts("0.3", "-1.25", "2", mpc("0.5", "1"), "7")
        c = parse_complex("1.5-0.5i")
        back = div_linear(mul_linear(s, c), c, ctx)
        for u, v in zip(back.coeffs, s.coeffs):
            assert abs(u - v) < mpf(10) ** -40


def test_div_by_zero(ctx):
    with pytest.raises(DivisionByZero):
        div_linear(ts(1, 0), 0, ctx)
    with mpmath.workdps(60):
        tiny = mpf(10) ** -35
    with pytest.raises(DivisionByZero):
        div_linear(ts(1, 0), tiny, ctx)


def test_trunc_series_validation():
    with pytest.raises(ValueError):
        TruncSeries(())
    assert TruncSeries.constant(3, 4).order == 4


@pytest.mark.parametrize("a", ["1", "0.5", "1.5", "1+0.5i"])
def test_l0_is_geometric(ctx, a):
    s = pochhammer_ratio_coeffs(0, a, 6, ctx)
    with mpmath.workdps(60):
        al = parse_complex(a)
        for m, c in enumerate(s.coeffs):
            assert abs(c - al ** -(m + 1)) < mpf(10) ** -40


def test_l1_alpha1_cancels(ctx):
    s = pochhammer_ratio_coeffs(1, 1, 6, ctx)
    for m, c in enumerate(s.coeffs):
        assert close(c, mpf(2) ** -(m + 1), 1e-40)


@pytest.mark.parametrize("alpha", [sympy.Rational(1, 2), sympy.Rational(3, 2), sympy.Integer(1), sympy.Rational(3, 4)])
@pytest.mark.parametrize("l", [0, 1, 2, 3])
def test_exact_rational_expansion(ctx, alpha, l):
    X = sympy.symbols("X")
    f = sympy.rf(1 - X, l) / sympy.rf(alpha - X, l + 1)
    d = 5
    s = pochhammer_ratio_coeffs(l, str(sympy.N(alpha, 40)), d, ctx)
    g = f
    for m in range(d + 1):
        exact = sympy.Rational(sympy.cancel(g.subs(X, 0))) / sympy.factorial(m)
        g = sympy.diff(g, X)
        with mpmath.workdps(60):
            ref = mpf(exact.p) / exact.q
            assert abs(s.coeffs[m] - ref) <= mpf(10) ** -38 * max(1, abs(ref)), (l, m)


def mp_ratio(l, alpha):
    return lambda x: mpmath.rf(1 - x, l) / mpmath.rf(alpha - x, l + 1)


@pytest.mark.parametrize("a", ["0.5", "1.5", "1+0.5i"])
@pytest.mark.parametrize("l", [2, 17, 50])
def test_finite_difference_derivatives(ctx, a, l):
    s = pochhammer_ratio_coeffs(l, a, 4, ctx)
    with mpmath.workdps(60):
        al = parse_complex(a)
        f = mp_ratio(l, al)
        for m in range(5):
            fd = mpmath.diff(f, 0, m) / mpmath.factorial(m)
            assert abs(s.coeffs[m] - fd) <= mpf(10) ** -10 * abs(fd), (l, m)


def test_sweep_matches_from_scratch(ctx):
    a = "0.75+0.25i"
    sweep = list(pochhammer_ratio_sweep(a, 3, 101, ctx))
    for l in (0, 1, 7, 33, 100):
        direct = pochhammer_ratio_coeffs(l, a, 3, ctx)
        for u, v in zip(sweep[l].coeffs, direct.coeffs):
            assert u == v
    with mpmath.workdps(60):
        al = parse_complex(a)
        ref = mpmath.rf(1, 100) / mpmath.rf(al, 101)
        assert abs(sweep[100].coeffs[0] - ref) <= mpf(10) ** -38 * abs(ref)


def test_coefficient_decay_plateaus(ctx):
    a = "1.5"
    r = mpf("0.7")  # below Re(alpha)/2
    for l in (0, 5, 40):
        s = pochhammer_ratio_coeffs(l, a, MAX_ORDER, ctx)
        partial = []
        acc = mpf(0)
        for m, c in enumerate(s.coeffs):
            acc += abs(c) * r**m
            partial.append(acc)
        assert all(b >= a_ for a_, b in zip(partial, partial[1:]))
        assert partial[-1] - partial[-2] < mpf(10) ** -3 * partial[-1]


@pytest.mark.parametrize("bad", [dict(d=-1), dict(d=MAX_ORDER + 1), dict(alpha="-1"), dict(l=-2), dict(d=1.5)])
def test_taylor_domain(ctx, bad):
    args = dict(l=3, alpha="0.5", d=2) | bad
    with pytest.raises(DomainError):
        pochhammer_ratio_coeffs(args["l"], args["alpha"], args["d"], ctx)


@pytest.mark.parametrize("n", [1, 2, 3, 6])
def test_prop3_rhs_alpha_one_reduces_to_zeta(ctx40, n):
    v = prop3_rhs(n + 1, n, 1, ctx=ctx40)
    with mpmath.workdps(60):
        assert abs(v.value - mpmath.zeta(n + 1)) < mpf(10) ** -38


def test_prop3_rhs_alpha_one_higher_orders(ctx):
    vals = prop3_rhs_orders(2, 1, 3, ctx=ctx)
    for m, v in enumerate(vals):
        with mpmath.workdps(60):
            assert abs(v.value - mpmath.zeta(m + 3)) < mpf(10) ** -28


@pytest.mark.parametrize("d", [1, 2, 5])
@pytest.mark.parametrize("a", ["0.5", "1+0.5i", "1.5", "3.25-1i"])
def test_prop3_rhs_depth_one_is_hurwitz(ctx, d, a):
    # at depth one the only composition is (k), so the Taylor-coefficient
    # series must reproduce zeta(k; alpha) (mpmath oracle) for every order
    v = prop3_rhs(d + 2, 1, a, ctx=ctx)
    with mpmath.workdps(60):
        ref = mpmath.zeta(d + 2, parse_complex(a))
    assert close(v.value, ref, max(mpf(10) ** -18, 10 * v.err))
    assert v.err < 1e-12


def test_prop3_rhs_domain(ctx):
    with pytest.raises(DomainError):
        prop3_rhs(3, 3, 1, ctx=ctx)
    with pytest.raises(DomainError):
        prop3_rhs(3, 0, 1, ctx=ctx)


def test_pochhammer_ratio_series_direct(ctx):
    # n=1, alpha=2, X=0.25: terms decay like l^-3 so 10^5 direct terms plus an
    # integral tail bound suffice for 1e-9
    v = pochhammer_ratio_series(1, 2, "0.25", ctx=ctx)
    with mpmath.workdps(30):
        x = mpf("0.25")
        r = 1 / (2 - x)
        acc = mpf(0)
        L = 10**5
        for l in range(L):
            acc += r / (l + 1)
            r *= (l + 1 - x) / (2 + l + 1 - x)
    assert close(v.value, acc, 1e-9)
    assert close(v.value, "0.7012475262064239", 1e-15)


def test_pochhammer_ratio_series_at_zero_is_prop3_order_zero(ctx):
    a = "0.75+0.25i"
    s = pochhammer_ratio_series(2, a, 0, ctx=ctx)
    r = prop3_rhs_orders(2, a, 0, ctx=ctx)[0]
    assert close(s.value, r.value, 1e-20)

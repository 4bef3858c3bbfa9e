"""Numerical checks of the sum-formula family of identities.

Every check evaluates both sides independently and returns an
:class:`~mzvsum.report.IdentityReport`.  Numerical breakdowns in a
constituent (a tail fit that does not settle, an ill-conditioned fit,
catastrophic cancellation) produce a failed report with a reason; invalid
parameters raise :class:`~mzvsum.errors.DomainError`.
"""
from __future__ import annotations

import time

import mpmath
from mpmath import mpc, mpf

from .compositions import enumerate_compositions
from .errors import CancellationError, ConvergenceError, DivisionByZero, DomainError, IllConditioned
from .extrapolate import TruncationPlan
from .hpcore import Method, Number, PrecisionContext, SeriesValue, hurwitz_zeta, sum_series_values, to_hp
from .multiseries import WeightVariant, lhs_double_pole, multiple_hurwitz_zeta, weighted_multiple_series
from .report import IdentityReport
from .taylor import pochhammer_ratio_series, prop3_rhs

DEFAULT_TOL = 1e-10
SUM_FORMULA_TOL = 1e-12
GF_MAX_ORDER = 60

# numerical failures that turn into a failed report instead of an exception
_SOFT_ERRORS = (ConvergenceError, IllConditioned, CancellationError, DivisionByZero)


def _positive_int(v, name):
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise DomainError(f"{name} must be a positive integer, got {v!r}")


def _weight_depth(k, n):
    _positive_int(k, "k")
    _positive_int(n, "n")
    if not n < k:
        raise DomainError(f"need 0 < n < k, got k={k}, n={n}")


def _param(z, ctx, name, positive=True):
    with ctx.working():
        v = to_hp(z)
    if positive and not v.real > 0:
        raise DomainError(f"need Re {name} > 0, got {name}={mpmath.nstr(v, 10)}")
    return v


def _run(id, params, tol, ctx, sides):
    """Evaluate ``sides()`` -> (lhs, rhs) and wrap the outcome in a report."""
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    start = time.perf_counter()
    try:
        with ctx.working():
            lhs, rhs = sides()
    except _SOFT_ERRORS as exc:
        return IdentityReport.failure(id, params, f"{type(exc).__name__}: {exc}", tol, ctx,
                                      time.perf_counter() - start)
    return IdentityReport.from_sides(id, params, lhs, rhs, tol, ctx, time.perf_counter() - start)


def _sum_over(values):
    values = list(values)
    return sum_series_values(values) if values else SeriesValue(mpc(0), mpf(0), 0, Method.DIRECT)


def check_prop1(n: int, m: int, alpha: Number, beta: Number, tol: float = DEFAULT_TOL,
                ctx: PrecisionContext | None = None, plan: TruncationPlan | None = None) -> IdentityReport:
    """Double-pole series against the weighted multiple series.

    ``sum_l (l+alpha)**-n (l+beta)**-m`` is compared with the sum, over all
    compositions of ``m+n-1`` into ``n`` parts, of the weighted series with
    outer weight ``m_n!/(alpha)_{m_n+1}``.
    """
    ctx = ctx or PrecisionContext()
    _positive_int(n, "n")
    _positive_int(m, "m")
    a = _param(alpha, ctx, "alpha")
    b = _param(beta, ctx, "beta")
    params = {"n": n, "m": m, "alpha": a, "beta": b}

    def sides():
        lhs = lhs_double_pole(n, m, a, b, ctx)
        rhs = _sum_over(
            weighted_multiple_series(c, a, b, WeightVariant.PROP1, 0, plan, ctx)
            for c in enumerate_compositions(m + n - 1, n)
        )
        return lhs, rhs

    return _run("prop1", params, tol, ctx, sides)


def check_cor2(k: int, n: int, alpha: Number, tol: float = DEFAULT_TOL,
               ctx: PrecisionContext | None = None, plan: TruncationPlan | None = None) -> IdentityReport:
    """``zeta(k; alpha)`` against the weighted series with outer weight ``m_n!/(alpha)_{m_n}``."""
    ctx = ctx or PrecisionContext()
    _weight_depth(k, n)
    a = _param(alpha, ctx, "alpha")
    params = {"k": k, "n": n, "alpha": a}

    def sides():
        lhs = hurwitz_zeta(k, a, ctx)
        rhs = _sum_over(
            weighted_multiple_series(c, a, a, WeightVariant.COR2, 0, plan, ctx)
            for c in enumerate_compositions(k, n, last_min=2)
        )
        return lhs, rhs

    return _run("cor2", params, tol, ctx, sides)


def check_prop3(k: int, n: int, alpha: Number, tol: float = DEFAULT_TOL,
                ctx: PrecisionContext | None = None, plan: TruncationPlan | None = None) -> IdentityReport:
    """Sum of multiple Hurwitz zeta values of weight ``k`` and depth ``n``
    against the Taylor-coefficient series ``sum_l (l+1)**-n c_{k-n-1}(l)``."""
    ctx = ctx or PrecisionContext()
    _weight_depth(k, n)
    a = _param(alpha, ctx, "alpha")
    params = {"k": k, "n": n, "alpha": a}

    def sides():
        lhs = _sum_over(
            multiple_hurwitz_zeta(c, a, plan, ctx) for c in enumerate_compositions(k, n, last_min=2)
        )
        return lhs, prop3_rhs(k, n, a, plan, ctx)

    return _run("prop3", params, tol, ctx, sides)


def check_sum_formula(k: int, n: int, tol: float = SUM_FORMULA_TOL,
                      ctx: PrecisionContext | None = None, plan: TruncationPlan | None = None) -> IdentityReport:
    """``sum zeta(k1, ..., kn) = zeta(k)`` over compositions with last part >= 2.

    The multiple zeta values go through the multiple Hurwitz evaluator at
    ``alpha = 1`` and ``zeta(k)`` through Euler-Maclaurin, so this exercises
    a different code path from :func:`check_cor2` at ``alpha = 1``.
    """
    ctx = ctx or PrecisionContext()
    _weight_depth(k, n)
    params = {"k": k, "n": n}

    def sides():
        lhs = _sum_over(
            multiple_hurwitz_zeta(c, 1, plan, ctx) for c in enumerate_compositions(k, n, last_min=2)
        )
        return lhs, hurwitz_zeta(k, 1, ctx)

    return _run("sum_formula", params, tol, ctx, sides)


def _check_radius(x, bound, what):
    if not abs(x) < bound / 4:
        raise DomainError(f"need |X| < {what}/4, got X={mpmath.nstr(x, 10)}")


def check_gf_prop1(n: int, alpha: Number, beta: Number, X: Number, tol: float = DEFAULT_TOL,
                   ctx: PrecisionContext | None = None, plan: TruncationPlan | None = None) -> IdentityReport:
    """Generating function in ``X`` of the double-pole identity at a numeric ``X``.

    ``sum_l (l+alpha)**-n (l+beta-X)**-1`` (partial fractions) against the
    weighted depth-``n`` series with every index shifted by ``beta - X``.
    ``X`` only ever appears next to ``beta``, so it is restricted to
    ``|X| < Re(beta)/4``.
    """
    ctx = ctx or PrecisionContext()
    _positive_int(n, "n")
    a = _param(alpha, ctx, "alpha")
    b = _param(beta, ctx, "beta")
    x = _param(X, ctx, "X", positive=False)
    _check_radius(x, b.real, "Re beta")
    params = {"n": n, "alpha": a, "beta": b, "X": x}

    def sides():
        with ctx.working():
            shifted = b - x
        lhs = lhs_double_pole(n, 1, a, shifted, ctx)
        rhs = weighted_multiple_series((1,) * n, a, b, WeightVariant.PROP1, x, plan, ctx)
        return lhs, rhs

    return _run("gf_prop1", params, tol, ctx, sides)


def gf_prop3_coefficients(n: int, alpha: Number, X: Number, tol: float, ctx: PrecisionContext,
                          plan: TruncationPlan | None = None) -> SeriesValue:
    """``sum_m X**m S_m`` with ``S_m`` the sum of multiple Hurwitz values of
    weight ``n+m+1`` and depth ``n`` (last part >= 2).

    Orders are added until a term falls below ``tol/1000`` while the terms
    are decreasing; the remaining tail is bounded geometrically from the
    last observed ratio.
    """
    with ctx.working():
        x = to_hp(X)
    total = []
    prev = None
    for m in range(GF_MAX_ORDER + 1):
        s_m = _sum_over(
            multiple_hurwitz_zeta(c, alpha, plan, ctx) for c in enumerate_compositions(n + m + 1, n, last_min=2)
        )
        with ctx.working():
            term = SeriesValue(s_m.value * x**m, s_m.err * abs(x) ** m, s_m.cutoff, Method.EXTRAPOLATED)
        total.append(term)
        size = abs(term.value)
        if prev is not None and size <= tol / 1000 and size <= prev:
            with ctx.working():
                ratio = min(size / prev if prev else mpf(0), mpf("0.9"))
                tail = size * ratio / (1 - ratio)
            acc = sum_series_values(total)
            return SeriesValue(acc.value, acc.err + tail, acc.cutoff, Method.EXTRAPOLATED)
        prev = size
    raise ConvergenceError(f"generating series in X did not settle within {GF_MAX_ORDER} orders")


def check_gf_prop3(n: int, alpha: Number, X: Number, tol: float = DEFAULT_TOL,
                   ctx: PrecisionContext | None = None, plan: TruncationPlan | None = None) -> IdentityReport:
    """Closed series ``sum_l (1-X)_l / ((alpha-X)_{l+1} (l+1)**n)`` against the
    power series in ``X`` whose coefficients are the multiple Hurwitz sums."""
    ctx = ctx or PrecisionContext()
    _positive_int(n, "n")
    a = _param(alpha, ctx, "alpha")
    x = _param(X, ctx, "X", positive=False)
    _check_radius(x, a.real, "Re alpha")
    params = {"n": n, "alpha": a, "X": x}

    def sides():
        lhs = pochhammer_ratio_series(n, a, x, plan, ctx)
        rhs = gf_prop3_coefficients(n, a, x, tol, ctx, plan)
        return lhs, rhs

    return _run("gf_prop3", params, tol, ctx, sides)

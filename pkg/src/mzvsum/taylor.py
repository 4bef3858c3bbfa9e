"""Truncated power series in ``X`` for the Pochhammer ratio

    f_l(X) = (1 - X)_l / (alpha - X)_{l+1}

around ``X = 0``.  Going from ``l`` to ``l+1`` multiplies by ``(l+1-X)`` and
divides by ``(alpha+l+1-X)``, so a whole sweep over ``l`` costs ``O(L d)`` for
order ``d``.  The ``m``-th coefficient ``c_m(l)`` is the ``m``-th derivative
at 0 divided by ``m!``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import mpmath
from mpmath import mp, mpc, mpf

from .errors import ConvergenceError, DivisionByZero, DomainError
from .extrapolate import TruncationPlan, extra_digits_for, extrapolate_tail
from .hpcore import Method, Number, PrecisionContext, SeriesValue, hurwitz_zeta, to_hp

MAX_ORDER = 24


@dataclass(frozen=True)
class TruncSeries:
    """Coefficients ``c_0 .. c_d`` of a power series in ``X`` cut at order ``d``."""

    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) < 1:
            raise ValueError("a truncated series needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, value, order: int) -> "TruncSeries":
        return cls((mpc(value),) + (mpc(0),) * order)

    def __getitem__(self, j):
        return self.coeffs[j]

    def __len__(self):
        return len(self.coeffs)


def mul_linear(s: TruncSeries, c: Number) -> TruncSeries:
    """``s * (c - X)`` at the same order."""
    c = mpmath.mpmathify(c)
    co = s.coeffs
    out = [c * co[0]]
    for j in range(1, len(co)):
        out.append(c * co[j] - co[j - 1])
    return TruncSeries(tuple(out))


def div_linear(s: TruncSeries, c: Number, ctx: PrecisionContext | None = None) -> TruncSeries:
    """``s / (c - X)`` at the same order, by forward substitution."""
    ctx = ctx or PrecisionContext()
    c = mpmath.mpmathify(c)
    if abs(c) < mpf(10) ** (-ctx.digits):
        raise DivisionByZero(f"division by (c - X) with |c| = {mpmath.nstr(abs(c), 3)}")
    inv = 1 / c
    co = s.coeffs
    out = [co[0] * inv]
    for j in range(1, len(co)):
        out.append((co[j] + out[j - 1]) * inv)
    return TruncSeries(tuple(out))


def _check_alpha(alpha):
    if alpha.real <= 0:
        raise DomainError(f"need Re alpha > 0, got alpha={alpha}")


def _check_order(d):
    if isinstance(d, bool) or not isinstance(d, int) or d < 0:
        raise DomainError(f"derivative order must be a nonnegative integer, got {d!r}")
    if d > MAX_ORDER:
        raise DomainError(f"derivative order {d} exceeds the cap {MAX_ORDER}")


def pochhammer_ratio_sweep(alpha: Number, d: int, count: int, ctx: PrecisionContext) -> Iterator[TruncSeries]:
    """Yield the order-``d`` expansions of ``f_0, f_1, ..., f_{count-1}``."""
    _check_order(d)
    with ctx.working():
        a = to_hp(alpha)
        _check_alpha(a)
        s = div_linear(TruncSeries.constant(1, d), a, ctx)
    for l in range(count):
        yield s
        with ctx.working():
            s = div_linear(mul_linear(s, l + 1), a + l + 1, ctx)


def pochhammer_ratio_coeffs(l: int, alpha: Number, d: int, ctx: PrecisionContext) -> TruncSeries:
    """Taylor coefficients of ``(1-X)_l / (alpha-X)_{l+1}`` at ``X = 0`` up to order ``d``."""
    if isinstance(l, bool) or not isinstance(l, int) or l < 0:
        raise DomainError(f"l must be a nonnegative integer, got {l!r}")
    for i, s in enumerate(pochhammer_ratio_sweep(alpha, d, l + 1, ctx)):
        if i == l:
            return s
    raise AssertionError("unreachable")


def _sweep_basis(alpha, n, depth):
    # Gamma(l+1-X)/Gamma(l+alpha+1-X) ~ l**-alpha times a power series in 1/l
    # whose coefficients are polynomials in X, so X-derivatives add no logs
    return tuple((alpha + n - 1 + j, 0) for j in range(depth))


def prop3_rhs_orders(
    n: int, alpha: Number, d: int, plan: TruncationPlan | None = None, ctx: PrecisionContext | None = None
) -> list[SeriesValue]:
    """``R_m = sum_{l>=0} (l+1)**-n c_m(l)`` for every ``m = 0 .. d``.

    At ``alpha = 1`` the ratio collapses to ``1/(l+1-X)``, so
    ``c_m(l) = (l+1)**-(m+1)`` and ``R_m`` is the Riemann zeta value at
    ``n+m+1``; that case is evaluated exactly by Euler-Maclaurin.
    """
    ctx = ctx or PrecisionContext()
    plan = plan or TruncationPlan()
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    _check_order(d)
    with ctx.working():
        a = to_hp(alpha)
        _check_alpha(a)
        if a == 1:
            return [hurwitz_zeta(n + m + 1, 1, ctx) for m in range(d + 1)]
        bases = [plan.basis or _sweep_basis(a, n, plan.depth)] * (d + 1)
        extra = max(extra_digits_for(plan.cutoffs, b, ctx) for b in bases)
    data = PrecisionContext(ctx.digits, ctx.guard + extra)
    marks = set(plan.cutoffs)
    partial = [mpc(0)] * (d + 1)
    checkpoints: list[list] = [[] for _ in range(d + 1)]
    with data.working():
        for l, s in enumerate(pochhammer_ratio_sweep(a, d, plan.max_cutoff, data)):
            if l in marks:
                for m in range(d + 1):
                    checkpoints[m].append((l, partial[m]))
            w = mpf(l + 1) ** (-n)
            for m in range(d + 1):
                partial[m] += w * s.coeffs[m]
        for m in range(d + 1):
            checkpoints[m].append((plan.max_cutoff, partial[m]))
    out = []
    for m in range(d + 1):
        limit, err = extrapolate_tail(checkpoints[m], bases[m], ctx, data_dps=data.dps)
        if err > 10 * plan.target_tol:
            raise ConvergenceError(
                f"order-{m} Taylor sweep disagrees across windows by {mpmath.nstr(err, 3)}"
            )
        out.append(SeriesValue(limit, err, plan.max_cutoff, Method.TAYLOR))
    return out


def prop3_rhs(
    k: int, n: int, alpha: Number, plan: TruncationPlan | None = None, ctx: PrecisionContext | None = None
) -> SeriesValue:
    """``1/(k-n-1)! sum_l (l+1)**-n d^{k-n-1}/dX^{k-n-1} f_l(X) |_{X=0}``.

    The factorial cancels against the one in the Taylor coefficient, so this
    is ``sum_l (l+1)**-n c_{k-n-1}(l)``.
    """
    if not (isinstance(k, int) and isinstance(n, int) and 0 < n < k):
        raise DomainError(f"need integers 0 < n < k, got k={k!r}, n={n!r}")
    return prop3_rhs_orders(n, alpha, k - n - 1, plan, ctx)[-1]


def pochhammer_ratio_series(
    n: int, alpha: Number, X: Number, plan: TruncationPlan | None = None, ctx: PrecisionContext | None = None
) -> SeriesValue:
    """``sum_{l>=0} (1-X)_l / ((alpha-X)_{l+1} (l+1)**n)`` at a numeric ``X``."""
    ctx = ctx or PrecisionContext()
    plan = plan or TruncationPlan()
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    with ctx.working():
        a = to_hp(alpha)
        x = to_hp(X)
        _check_alpha(a)
        if abs(x) >= a.real:
            raise DomainError(f"need |X| < Re alpha, got X={x}, alpha={a}")
        basis = plan.basis or _sweep_basis(a, n, plan.depth)
        extra = extra_digits_for(plan.cutoffs, basis, ctx)
    marks = set(plan.cutoffs)
    checkpoints = []
    with mp.workdps(ctx.dps + extra):
        ratio = 1 / (a - x)
        acc = mpc(0)
        for l in range(plan.max_cutoff):
            if l in marks:
                checkpoints.append((l, acc))
            acc += ratio * mpf(l + 1) ** (-n)
            ratio = ratio * (l + 1 - x) / (a + l + 1 - x)
        checkpoints.append((plan.max_cutoff, acc))
    limit, err = extrapolate_tail(checkpoints, basis, ctx, data_dps=ctx.dps + extra)
    if err > 10 * plan.target_tol:
        raise ConvergenceError(f"series disagrees across windows by {mpmath.nstr(err, 3)}")
    return SeriesValue(limit, err, plan.max_cutoff, Method.EXTRAPOLATED)

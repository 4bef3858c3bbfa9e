"""Tanh-sinh quadrature oracle for the simplex integrals behind the identities.

The integrals live on ``0 < t_n < ... < t_0 < 1``.  They are mapped to the
unit cube by ``t_i = t_{i-1} u_i``; every variable is carried together with
its complement ``1 - t_i = (1 - t_{i-1}) + t_{i-1} (1 - u_i)`` so that the
endpoint singularities at ``t -> 1`` are evaluated without cancellation.
Arithmetic is binary64 (numpy): this path only corroborates the series
evaluations at the ~1e-10 level.

Level ``k`` uses step ``h = 2**(3-k)`` in the tanh-sinh variable; the
level ``k-1`` estimate reuses every other node, and their difference is the
reported error.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from mpmath import mpc

from .errors import DepthUnsupported, DomainError, MzvError, NonFinite
from .hpcore import Method, Number, PrecisionContext, SeriesValue, to_hp
from .report import IdentityReport
from .taylor import pochhammer_ratio_series

# nodes with min(t, 1-t) below ~1e-200 are dropped
_X_MAX = float(np.arcsinh(460.0 / np.pi))
MAX_DEPTH = 2
DEFAULT_LEVEL = 7
QUAD_TOL = 1e-8


@dataclass(frozen=True)
class QuadResult:
    value: mpc
    err: float
    levels: int

    def as_series_value(self) -> SeriesValue:
        return SeriesValue(self.value, self.err, 0, Method.QUADRATURE)


@lru_cache(maxsize=16)
def _rule(level: int):
    if level < 2:
        raise DomainError(f"quadrature level must be >= 2, got {level}")
    h = 2.0 ** (3 - level)
    jmax = int(_X_MAX / h)
    j = np.arange(-jmax, jmax + 1)
    x = j * h
    e = np.exp(-np.pi * np.sinh(x))
    t = 1.0 / (1.0 + e)
    omt = e / (1.0 + e)
    w = h * np.pi * np.cosh(x) * t * omt
    even = (j % 2) == 0
    for arr in (t, omt, w):
        arr.setflags(write=False)
    return t, omt, w, even


def _check_finite(vals):
    if not np.all(np.isfinite(vals)):
        raise NonFinite("integrand is not finite at an interior quadrature node")


def tanh_sinh(f: Callable, level: int = 8, ctx: PrecisionContext | None = None, *, pair: bool = False) -> QuadResult:
    """Integrate ``f`` over ``(0, 1)``.

    ``f`` receives a numpy array of nodes; with ``pair=True`` it receives
    ``(t, 1 - t)`` with the complement computed without cancellation.
    """
    t, omt, w, even = _rule(level)
    vals = np.asarray(f(t, omt) if pair else f(t), dtype=complex)
    _check_finite(vals)
    fine = np.sum(w * vals)
    coarse = 2.0 * np.sum(w[even] * vals[even])
    return QuadResult(mpc(complex(fine)), float(abs(fine - coarse)), level)


def _cube(log_integrand, dim: int, level: int) -> QuadResult:
    """Integrate ``exp(log_integrand(lt, l1t, lu))`` over the simplex of ``dim`` variables.

    ``lt[i] = log t_i``, ``l1t[i] = log(1 - t_i)``, ``lu[i-1] = log u_i``;
    the integrand already includes the Jacobian of ``t_i = t_{i-1} u_i``.
    Working with logarithms lets the (tiny) quadrature weights absorb the
    (huge) values of integrable corner singularities before exponentiation.
    """
    t, omt, w, even = _rule(level)
    logt = np.log(t)
    log1t = np.log(omt)
    logw = np.log(w)
    fine = 0j
    coarse = 0j
    if dim == 2:
        for i0 in range(len(t)):
            t0, c0 = t[i0], omt[i0]
            c1 = c0 + t0 * omt
            expo = log_integrand([logt[i0], logt[i0] + logt], [log1t[i0], np.log(c1)], [logt])
            vals = np.exp(np.broadcast_to(expo, t.shape) + logw)
            _check_finite(vals)
            fine += w[i0] * np.sum(vals)
            if even[i0]:
                coarse += 4.0 * w[i0] * np.sum(vals[even])
    elif dim == 3:
        lu1 = logt[:, None]
        lu2 = logt[None, :]
        om1 = omt[:, None]
        om2 = omt[None, :]
        lw2 = logw[:, None] + logw[None, :]
        ee = even[:, None] & even[None, :]
        for i0 in range(len(t)):
            t0, c0 = t[i0], omt[i0]
            lt1 = logt[i0] + lu1
            c1 = c0 + t0 * om1
            lt2 = lt1 + lu2
            c2 = c1 + np.exp(lt1) * om2
            expo = log_integrand(
                [logt[i0], lt1, lt2],
                [log1t[i0], np.log(c1), np.log(c2)],
                [lu1, lu2],
            )
            vals = np.exp(np.broadcast_to(expo, lw2.shape) + lw2)
            _check_finite(vals)
            fine += w[i0] * np.sum(vals)
            if even[i0]:
                coarse += 8.0 * w[i0] * np.sum(vals[ee])
    else:
        raise DepthUnsupported(f"simplex dimension {dim} is not supported")
    return QuadResult(mpc(complex(fine)), float(abs(fine - coarse)), level)


def _cplx(z) -> complex:
    return complex(to_hp(z))


def _depth(n):
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if n > MAX_DEPTH:
        raise DepthUnsupported(f"iterated integrals are supported for n <= {MAX_DEPTH}, got n={n}")


def iterated_integral_prop1(
    n: int, alpha: Number, beta: Number, X: Number = 0, level: int = DEFAULT_LEVEL,
    ctx: PrecisionContext | None = None, form: str = "original",
) -> QuadResult:
    """Simplex integral whose value is ``sum_l (l+alpha)**-n (l+beta-X)**-1``.

    ``form="original"`` integrates

        (1-t0)**(beta-X-1) t_n**(alpha-1) / (t0**alpha t1...t_{n-1} (1-t_n)**(beta-X))

    and ``form="reflected"`` the image under ``t_i -> 1 - t_{n-i}``,

        t_n**(beta-X-1) (1-t0)**(alpha-1) / ((1-t_n)**alpha (1-t_{n-1})...(1-t_1) t0**(beta-X)).
    """
    ctx = ctx or PrecisionContext()
    _depth(n)
    with ctx.working():
        a, b, x = to_hp(alpha), to_hp(beta), to_hp(X)
        if a.real <= 0 or b.real <= 0:
            raise DomainError("need Re alpha > 0 and Re beta > 0")
        if abs(x) >= b.real / 4:
            raise DomainError(f"need |X| < Re beta / 4, got X={x}")
    a, bx = complex(a), complex(b - x)

    if form == "original":
        def integrand(lt, l1t, lu):
            return (bx - 1) * l1t[0] - bx * l1t[n] + (a - 1) * sum(lu)
    elif form == "reflected":
        def integrand(lt, l1t, lu):
            e = (bx - 1) * sum(lu) + (a - 1) * l1t[0] - a * l1t[n]
            for i in range(1, n):
                e = e + lt[i] - l1t[i]
            return e
    else:
        raise DomainError(f"unknown integral form {form!r}")
    return _cube(integrand, n + 1, level)


def iterated_integral_prop3(
    n: int, alpha: Number, X: Number = 0, level: int = DEFAULT_LEVEL,
    ctx: PrecisionContext | None = None, form: str = "original",
) -> QuadResult:
    """Generating-function integral for sums of multiple Hurwitz zeta values.

    ``form="original"``:  ``t0**(X-1) t_n**(alpha-X-1) / ((1-t1)...(1-t_n))``;
    ``form="reflected"``: ``(1-t0)**(alpha-X-1) / ((1-t_n)**(1-X) t_{n-1}...t_0)``.
    """
    ctx = ctx or PrecisionContext()
    _depth(n)
    with ctx.working():
        a, x = to_hp(alpha), to_hp(X)
        if a.real <= 0:
            raise DomainError("need Re alpha > 0")
        if abs(x) >= a.real / 4:
            raise DomainError(f"need |X| < Re alpha / 4, got X={x}")
    a, x = complex(a), complex(x)

    if form == "original":
        def integrand(lt, l1t, lu):
            e = (a - 1) * lt[0] + (a - x - 1) * sum(lu)
            for i in range(1, n):
                e = e + lt[i]
            for i in range(1, n + 1):
                e = e - l1t[i]
            return e
    elif form == "reflected":
        def integrand(lt, l1t, lu):
            return (a - x - 1) * l1t[0] + (x - 1) * l1t[n]
    else:
        raise DomainError(f"unknown integral form {form!r}")
    return _cube(integrand, n + 1, level)


def check_change_of_variables(
    which: str, n: int, alpha: Number, beta: Number | None = None, X: Number = 0,
    level: int = DEFAULT_LEVEL, ctx: PrecisionContext | None = None, tol: float = QUAD_TOL,
) -> IdentityReport:
    """Compare a simplex integral with its image under ``t_i -> 1 - t_{n-i}``.

    For ``which="eq6"`` the reflected integral is also compared with the
    closed series ``sum_l (1-X)_l / ((alpha-X)_{l+1} (l+1)**n)``; the report
    passes only if both residuals are within tolerance.
    """
    ctx = ctx or PrecisionContext()
    start = time.perf_counter()
    if which == "eq4":
        if beta is None:
            raise DomainError("eq4 needs beta")
        params = {"n": n, "alpha": _hp(alpha, ctx), "beta": _hp(beta, ctx), "X": _hp(X, ctx), "level": level}
        lhs = iterated_integral_prop1(n, alpha, beta, X, level, ctx, form="original")
        rhs = iterated_integral_prop1(n, alpha, beta, X, level, ctx, form="reflected")
        return IdentityReport.from_sides(
            "cov_eq4", params, lhs.as_series_value(), rhs.as_series_value(), tol, ctx,
            time.perf_counter() - start,
        )
    if which != "eq6":
        raise DomainError(f"which must be 'eq4' or 'eq6', got {which!r}")
    params = {"n": n, "alpha": _hp(alpha, ctx), "X": _hp(X, ctx), "level": level}
    lhs = iterated_integral_prop3(n, alpha, X, level, ctx, form="original").as_series_value()
    rhs = iterated_integral_prop3(n, alpha, X, level, ctx, form="reflected").as_series_value()
    try:
        series = pochhammer_ratio_series(n, alpha, X, ctx=ctx)
    except MzvError as exc:
        return IdentityReport.failure("cov_eq6", params, f"{type(exc).__name__}: {exc}", tol, ctx,
                                      time.perf_counter() - start, lhs, rhs)
    report = IdentityReport.from_sides("cov_eq6", params, lhs, rhs, tol, ctx, time.perf_counter() - start)
    with ctx.working():
        series_res = abs(rhs.value - series.value)
        series_ok = series_res <= max(tol, 10 * (rhs.err + series.err))
    report.extra = {"series": series.value, "series_residual": series_res}
    report.passed = report.passed and bool(series_ok)
    return report


def _hp(z, ctx):
    with ctx.working():
        return to_hp(z)

"""Multiple Hurwitz zeta values and Pochhammer-weighted multiple series.

All nested sums over ``0 <= m1 < ... < mn`` are evaluated by cumulative sums:
for a composition ``(k1, ..., kn)`` the level-``j`` array

    E_j(m) = sum_{m_j < m} E_{j-1}(m_j) * (m_j + b)**-k_j

is an exclusive prefix sum of the level below, so a cutoff-``L`` evaluation
costs ``O(L n)`` and compositions sharing a prefix share the work.  The
truncated sums are then extrapolated to ``L -> oo`` with a power-log tail
model whose exponents follow from the large-``m`` behaviour of the weights:
``(a)_m/m!`` grows like ``m**(a-1)`` and ``m!/(a)_{m+1}`` decays like
``m**-a``, so the tails carry the exponent family ``a, a+1, ...`` besides the
integer family ``1, 2, ...``, each with up to ``n-1`` powers of ``log L``.
"""
from __future__ import annotations

import enum
from functools import lru_cache
from math import comb

import mpmath
from mpmath import mp, mpc, mpf

from .compositions import Composition
from .errors import CancellationError, ConvergenceError, DomainError
from .extrapolate import TruncationPlan, extra_digits_for, extrapolate_tail
from .hpcore import (
    Method,
    Number,
    PrecisionContext,
    SeriesValue,
    digamma,
    hurwitz_zeta,
    is_real_integer,
    to_hp,
)


class WeightVariant(str, enum.Enum):
    """Outer weight: ``m_n!/(a)_{m_n+1}`` (prop1) or ``m_n!/(a)_{m_n}`` (cor2)."""

    PROP1 = "prop1"
    COR2 = "cor2"


_MH = "mh"  # kernel kind for the unweighted multiple Hurwitz sums

# alpha closer than this to an integer merges the two exponent families
_MERGE_TOL = mpf("1e-3")


def lhs_double_pole(n: int, m: int, alpha: Number, beta: Number, ctx: PrecisionContext) -> SeriesValue:
    """``sum_{l>=0} (l+alpha)**-n (l+beta)**-m`` in closed form.

    For distinct parameters the summand is split into partial fractions;
    the exponent-2-and-up pieces are Hurwitz zeta values and the two
    exponent-1 pieces, which carry opposite residues, combine into
    ``A1 (psi(beta) - psi(alpha))``.  When ``|alpha - beta| <= 10**(-digits/2)``
    the value is taken as ``zeta(n+m; alpha)`` with the first-order
    perturbation added to ``err``.
    """
    _check_order(n, "n")
    _check_order(m, "m")
    with ctx.working():
        a = to_hp(alpha)
        b = to_hp(beta)
        if a.real <= 0 or b.real <= 0:
            raise DomainError(f"need Re alpha > 0 and Re beta > 0, got alpha={a}, beta={b}")
        delta = b - a
        if abs(delta) <= mpf(10) ** (-mpf(ctx.digits) / 2):
            hz = hurwitz_zeta(n + m, a, ctx)
            lo = min(a.real, b.real)
            bound = hurwitz_zeta(n + m + 1, lo, ctx).value.real
            return SeriesValue(hz.value, hz.err + abs(delta) * m * bound, hz.cutoff, Method.EULER_MACLAURIN)

        terms = []
        err = mpf(0)
        cutoff = 0
        # coefficient of (l+alpha)^{-(n-r)} and (l+beta)^{-(m-r)}
        a1 = None
        for r in range(n):
            coef = (-1) ** r * comb(m + r - 1, r) * delta ** (-m - r)
            if n - r == 1:
                a1 = coef
                continue
            hz = hurwitz_zeta(n - r, a, ctx)
            terms.append(coef * hz.value)
            err += abs(coef) * hz.err
            cutoff = max(cutoff, hz.cutoff)
        for r in range(m):
            coef = (-1) ** r * comb(n + r - 1, r) * (-delta) ** (-n - r)
            if m - r == 1:
                continue  # its residue is -a1, folded into the digamma difference
            hz = hurwitz_zeta(m - r, b, ctx)
            terms.append(coef * hz.value)
            err += abs(coef) * hz.err
            cutoff = max(cutoff, hz.cutoff)
        psi_a = digamma(a, ctx)
        psi_b = digamma(b, ctx)
        terms.append(a1 * (psi_b - psi_a))
        value = mpmath.fsum(terms)
        biggest = max(abs(t) for t in terms)
        if value == 0 or biggest / abs(value) > mpf(10) ** ctx.guard:
            raise CancellationError(
                f"partial fractions lose more than {ctx.guard} digits at |alpha-beta|={mpmath.nstr(abs(delta), 3)}"
            )
        err += biggest * ctx.eps * (len(terms) + 2)
        return SeriesValue(value, err, cutoff, Method.PARTIAL_FRACTION)


def _check_order(v, name):
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise DomainError(f"{name} must be a positive integer, got {v!r}")


class _Kernel:
    """Per-(weights, shift, cutoff, precision) arrays shared by compositions."""

    def __init__(self, kind: str, alpha: mpc, shift: mpc, length: int, dps: int):
        self.kind = kind
        self.length = length
        self.dps = dps
        self._prefix_cache: dict[tuple, list] = {}
        self._pow_cache: dict[int, list] = {}
        with mp.workdps(dps):
            self.inv = [1 / (m + shift) for m in range(length)]
            if kind == _MH:
                self.first = None
                self.last = None
                return
            first = []
            w = mpc(1)
            for m in range(length):
                first.append(w)
                w = w * (alpha + m) / (m + 1)
            last = []
            if kind == WeightVariant.PROP1:
                v = 1 / alpha
                for m in range(length):
                    last.append(v)
                    v = v * (m + 1) / (alpha + m + 1)
            else:
                v = mpc(1)
                for m in range(length):
                    last.append(v)
                    v = v * (m + 1) / (alpha + m)
            self.first = first
            self.last = last

    def _pow(self, k: int) -> list:
        got = self._pow_cache.get(k)
        if got is None:
            if k == 1:
                got = self.inv
            else:
                below = self._pow(k - 1)
                got = [x * y for x, y in zip(below, self.inv)]
            self._pow_cache[k] = got
        return got

    def _prefix(self, prefix: tuple):
        """``E(m)`` for the given leading parts; ``None`` stands for all ones."""
        if not prefix:
            return self.first
        got = self._prefix_cache.get(prefix)
        if got is not None:
            return got
        below = self._prefix(prefix[:-1])
        powk = self._pow(prefix[-1])
        out = []
        acc = mpc(0)
        if below is None:
            for p in powk:
                out.append(acc)
                acc += p
        else:
            for e, p in zip(below, powk):
                out.append(acc)
                acc += e * p
        self._prefix_cache[prefix] = out
        return out

    def partial_sums(self, comp: tuple, cutoffs) -> list:
        """``T(L) = sum over 0 <= m1 < ... < mn < L`` for each cutoff ``L``."""
        with mp.workdps(self.dps):
            inner = self._prefix(tuple(comp[:-1]))
            powk = self._pow(comp[-1])
            last = self.last
            marks = list(cutoffs)
            out = []
            idx = 0
            acc = mpc(0)
            for m in range(self.length):
                while idx < len(marks) and marks[idx] == m:
                    out.append(acc)
                    idx += 1
                t = powk[m]
                if inner is not None:
                    t = t * inner[m]
                if last is not None:
                    t = t * last[m]
                acc += t
            while idx < len(marks):
                out.append(acc)
                idx += 1
            return out


@lru_cache(maxsize=6)
def _kernel(kind, alpha, shift, length, dps):
    return _Kernel(kind, alpha, shift, length, dps)


def _as_composition(k, last_min=1) -> Composition:
    try:
        return k if isinstance(k, Composition) and k[-1] >= last_min else Composition(k, last_min)
    except ValueError as exc:
        raise DomainError(str(exc)) from None


def _auto_basis(alpha: mpc, depth: int, n: int, weighted: bool) -> tuple:
    """Tail families for a depth-``n`` nested sum.

    Unweighted nested sums pick up one logarithm per harmonic-like level,
    so the integer powers carry ``log**(n-1)``.  With Pochhammer weights and
    a non-integer ``alpha`` the first weight contributes ``m**(alpha-1)``
    and the last ``m**(1-alpha)`` (or ``m**-alpha``): the logarithms built up
    by the inner levels then ride on the ``alpha + j`` powers (at most
    ``n-2`` of them), while the integer powers carry none.
    """
    if weighted and n >= 2 and not is_real_integer(alpha, _MERGE_TOL):
        return tuple([(mpf(j), 0) for j in range(1, depth + 1)] + [(alpha + j, n - 2) for j in range(depth)])
    return tuple((mpf(j), n - 1) for j in range(1, depth + 1))


def _extrapolated(kind, comp, alpha, shift, plan, basis, ctx) -> SeriesValue:
    extra = extra_digits_for(plan.cutoffs, basis, ctx)
    dps = ctx.dps + extra
    kern = _kernel(kind, alpha, shift, plan.max_cutoff, dps)
    sums = kern.partial_sums(tuple(comp), plan.cutoffs)
    limit, err = extrapolate_tail(zip(plan.cutoffs, sums), basis, ctx, data_dps=dps)
    if err > 10 * plan.target_tol:
        raise ConvergenceError(
            f"tail extrapolation for {tuple(comp)} disagrees across windows by "
            f"{mpmath.nstr(err, 3)} (target {plan.target_tol:g})"
        )
    return SeriesValue(limit, err, plan.max_cutoff, Method.EXTRAPOLATED)


def _weighted_setup(k, alpha, beta, X, ctx):
    comp = _as_composition(k)
    a = to_hp(alpha)
    b = to_hp(beta)
    x = to_hp(X)
    if a.real <= 0 or b.real <= 0:
        raise DomainError(f"need Re alpha > 0 and Re beta > 0, got alpha={a}, beta={b}")
    if abs(x) >= b.real:
        raise DomainError(f"need |X| < Re beta, got X={x}, beta={b}")
    return comp, a, b, x


def weighted_multiple_series(
    k,
    alpha: Number,
    beta: Number,
    variant: WeightVariant | str,
    X: Number = 0,
    plan: TruncationPlan | None = None,
    ctx: PrecisionContext | None = None,
) -> SeriesValue:
    """Pochhammer-weighted nested sum

        sum_{0<=m1<...<mn} (alpha)_{m1}/m1! * W(mn) * prod_j (m_j + beta - X)**-k_j

    with ``W(m) = m!/(alpha)_{m+1}`` for ``prop1`` and ``m!/(alpha)_m`` for
    ``cor2``.  For ``n = 1`` both weights sit on the same index.
    """
    ctx = ctx or PrecisionContext()
    plan = plan or TruncationPlan()
    variant = WeightVariant(variant)
    with ctx.working():
        comp, a, b, x = _weighted_setup(k, alpha, beta, X, ctx)
        basis = plan.basis or _auto_basis(a, plan.depth, len(comp), weighted=True)
        return _extrapolated(variant, comp, a, b - x, plan, basis, ctx)


def weighted_partial_sums(k, alpha, beta, variant, X=0, cutoffs=(), ctx=None) -> list:
    """Truncated weighted sums over ``0 <= m1 < ... < mn < L`` at each cutoff."""
    ctx = ctx or PrecisionContext()
    variant = WeightVariant(variant)
    with ctx.working():
        comp, a, b, x = _weighted_setup(k, alpha, beta, X, ctx)
        cutoffs = sorted(int(c) for c in cutoffs)
        kern = _Kernel(variant, a, b - x, max(cutoffs), ctx.dps)
        return kern.partial_sums(tuple(comp), cutoffs)


def _mh_setup(s, alpha):
    comp = _as_composition(s)
    if comp[-1] < 2:
        raise DomainError(f"multiple Hurwitz zeta diverges when the last part is < 2: {tuple(comp)}")
    a = to_hp(alpha)
    if a.real <= 0:
        raise DomainError(f"need Re alpha > 0, got alpha={a}")
    return comp, a


def multiple_hurwitz_zeta(
    s, alpha: Number, plan: TruncationPlan | None = None, ctx: PrecisionContext | None = None
) -> SeriesValue:
    """``sum_{0<=m1<...<mn} prod_j (m_j + alpha)**-s_j`` with ``s_n >= 2``."""
    ctx = ctx or PrecisionContext()
    plan = plan or TruncationPlan()
    with ctx.working():
        comp, a = _mh_setup(s, alpha)
        basis = plan.basis or _auto_basis(a, plan.depth, len(comp), weighted=False)
        return _extrapolated(_MH, comp, a, a, plan, basis, ctx)


def multiple_hurwitz_partial_sums(s, alpha, cutoffs, ctx=None) -> list:
    ctx = ctx or PrecisionContext()
    with ctx.working():
        comp, a = _mh_setup(s, alpha)
        cutoffs = sorted(int(c) for c in cutoffs)
        kern = _Kernel(_MH, a, a, max(cutoffs), ctx.dps)
        return kern.partial_sums(tuple(comp), cutoffs)

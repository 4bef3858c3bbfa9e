"""Limit estimation from partial sums with power-log tails.

A truncated sum ``T(L)`` is modelled as

    T(L) = T_inf + sum over basis families (p, q) of L**-p * (c0 + c1 log L + ... + cq log**q L)

and ``T_inf`` is obtained by linear least squares over a window of
checkpoints.  Because the fit is linear in the data, the limit is a fixed
linear functional ``T_inf = sum_i g_i T(L_i)`` of the checkpoints; the weight
vector ``g`` depends only on the cutoffs and the basis, so it is computed once
(at generous precision) and cached.  ``||g||_1`` is the factor by which
rounding noise in the partial sums is amplified.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import mpmath
from mpmath import mp, mpc, mpf

from .errors import IllConditioned
from .hpcore import PrecisionContext

DEFAULT_LMAX = 4000
DEFAULT_LMIN = 250
DEFAULT_CHECKPOINTS = 64
DEFAULT_DEPTH = 6


def geometric_cutoffs(start: int, stop: int, count: int) -> tuple[int, ...]:
    """``count`` roughly geometric integer cutoffs from ``start`` to ``stop``."""
    if count < 2 or start < 1 or stop <= start:
        raise ValueError("need count >= 2 and 1 <= start < stop")
    ratio = stop / start
    pts = {int(round(start * ratio ** (i / (count - 1)))) for i in range(count)}
    return tuple(sorted(pts))


@dataclass(frozen=True)
class TruncationPlan:
    """Partial-sum checkpoints and the tail model used to extrapolate them.

    ``basis`` is a tuple of ``(p, q)`` families; when it is ``None`` each
    evaluator derives the families from the asymptotics of its own summand,
    using ``depth`` consecutive exponents per family.
    """

    cutoffs: tuple[int, ...] = field(
        default_factory=lambda: geometric_cutoffs(DEFAULT_LMIN, DEFAULT_LMAX, DEFAULT_CHECKPOINTS)
    )
    basis: tuple | None = None
    target_tol: float = 1e-12
    depth: int = DEFAULT_DEPTH

    def __post_init__(self):
        cutoffs = tuple(int(c) for c in self.cutoffs)
        object.__setattr__(self, "cutoffs", cutoffs)
        if any(b <= a for a, b in zip(cutoffs, cutoffs[1:])):
            raise ValueError("cutoffs must be strictly increasing")
        if len(cutoffs) < 4:
            raise ValueError("a truncation plan needs at least 4 cutoffs")
        if cutoffs[0] < 1:
            raise ValueError("cutoffs must be positive")
        if not self.target_tol > 0:
            raise ValueError("target_tol must be positive")
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if self.basis is not None:
            object.__setattr__(self, "basis", tuple((p, int(q)) for p, q in self.basis))

    @property
    def max_cutoff(self) -> int:
        return self.cutoffs[-1]

    def scaled(self, factor: int) -> "TruncationPlan":
        """Same plan with every cutoff multiplied by ``factor``."""
        return TruncationPlan(
            tuple(c * factor for c in self.cutoffs), self.basis, self.target_tol, self.depth
        )

    @classmethod
    def geometric(cls, start: int, stop: int, count: int = DEFAULT_CHECKPOINTS, **kw) -> "TruncationPlan":
        return cls(geometric_cutoffs(start, stop, count), **kw)


def power_log_basis(exponents, max_log: int) -> tuple:
    """One ``(p, max_log)`` family per exponent."""
    return tuple((p, max_log) for p in exponents)


def _basis_key(basis) -> tuple:
    key = []
    for p, q in basis:
        p = mpmath.mpmathify(p)
        if isinstance(p, mpc):
            key.append(((p.real, p.imag), q))
        else:
            key.append(((p, mpf(0)), q))
    return tuple(key)


# The three windows share all but one or two checkpoints, so their fits are
# strongly correlated and the raw spread understates the truncation error
# (by up to ~1.4x on test cases with known limits).
SPREAD_SAFETY = 4


def _windows(n_points: int, n_unknowns: int) -> list[tuple[int, int]]:
    if n_points < n_unknowns + 1:
        raise IllConditioned(
            f"{n_points} checkpoints cannot fit {n_unknowns} unknowns and still "
            "leave a second window for the error estimate"
        )
    width = max(n_unknowns, n_points - 2)
    last = n_points - width
    starts = sorted({s for s in (last - 2, last - 1, last) if s >= 0})
    return [(s, s + width) for s in starts]


def _solve_weights(cutoffs, key, dps):
    """Weight vectors (one per window) for the limit functional."""
    with mp.workdps(dps):
        lref = mpf(cutoffs[-1])
        rows = []
        for L in cutoffs:
            x = lref / L
            lg = mpmath.log(mpf(L) / lref)
            row = [mpf(1)]
            for (pr, pi), q in key:
                base = x ** mpc(pr, pi) if pi else x ** pr
                for j in range(q + 1):
                    row.append(base * lg**j)
            rows.append(row)
        n_unknowns = len(rows[0])
        out = []
        for lo, hi in _windows(len(rows), n_unknowns):
            A = mpmath.matrix(rows[lo:hi])
            m = hi - lo
            scale = []
            for j in range(n_unknowns):
                nrm = mpmath.sqrt(mpmath.fsum(abs(A[i, j]) ** 2 for i in range(m)))
                scale.append(nrm)
                for i in range(m):
                    A[i, j] /= nrm
            Q, R = mpmath.qr(A, mode="skinny")
            e0 = mpmath.matrix(n_unknowns, 1)
            e0[0] = 1
            # first component of R^{-1} Q^H b is z^T Q^H b with R^T z = e0
            z = mpmath.lu_solve(R.T, e0)
            g = [
                mpmath.fsum(z[k] * mpmath.conj(Q[i, k]) for k in range(n_unknowns)) / scale[0]
                for i in range(m)
            ]
            out.append((lo, hi, g))
        return out


@lru_cache(maxsize=256)
def _fit_weights(cutoffs: tuple, key: tuple, base_dps: int):
    dps = 2 * base_dps + 20
    while True:
        windows = _solve_weights(cutoffs, key, dps)
        with mp.workdps(dps):
            ok = all(abs(mpmath.fsum(g) - 1) < mpf(10) ** (-base_dps) for _, _, g in windows)
            amp = max(mpmath.fsum(abs(x) for x in g) for _, _, g in windows)
        if ok or dps > 8 * base_dps + 200:
            break
        dps *= 2
    if not ok:
        raise IllConditioned("tail fit could not be solved accurately")
    with mp.workdps(base_dps):
        return tuple((lo, hi, tuple(+x for x in g)) for lo, hi, g in windows), +amp


def fit_amplification(cutoffs: Sequence[int], basis, ctx: PrecisionContext) -> mpf:
    """Noise amplification ``||g||_1`` of the limit functional."""
    _, amp = _fit_weights(tuple(int(c) for c in cutoffs), _basis_key(basis), ctx.dps)
    return amp


def extra_digits_for(cutoffs: Sequence[int], basis, ctx: PrecisionContext) -> int:
    """Digits to add to the working precision so the fit does not eat guard digits."""
    amp = fit_amplification(cutoffs, basis, ctx)
    return max(0, int(math.ceil(float(mpmath.log10(amp))))) + 2


def extrapolate_tail(checkpoints, basis, ctx: PrecisionContext, data_dps: int | None = None):
    """Estimate ``lim T(L)`` from ``[(L_i, T(L_i)), ...]``.

    Parameters
    ----------
    checkpoints : sequence of (int, number)
        At least four partial sums with strictly increasing cutoffs.
    basis : sequence of (p, q)
        Tail families; each contributes ``L**-p * log(L)**j`` for ``j <= q``.
    ctx : PrecisionContext
    data_dps : int, optional
        Decimal digits the partial sums were computed with (defaults to the
        context working precision).  Only used for the noise model.

    Returns
    -------
    (limit, err)
        ``limit`` is the fit on the window of largest cutoffs, ``err``
        ``SPREAD_SAFETY`` times the largest disagreement between the last
        three checkpoint windows, plus the amplified rounding noise.

    Raises
    ------
    IllConditioned
        When rounding noise in the data, amplified by the fit, would leave
        fewer than ``digits/2`` correct digits.
    """
    pts = list(checkpoints)
    if len(pts) < 4:
        raise ValueError("extrapolation needs at least 4 checkpoints")
    cutoffs = tuple(int(L) for L, _ in pts)
    if any(b <= a for a, b in zip(cutoffs, cutoffs[1:])):
        raise ValueError("checkpoint cutoffs must be strictly increasing")
    if data_dps is None:
        data_dps = ctx.dps
    windows, amp = _fit_weights(cutoffs, _basis_key(basis), ctx.dps)
    if amp > mpf(10) ** (data_dps - ctx.digits / 2):
        raise IllConditioned(
            f"fit amplifies rounding noise by {mpmath.nstr(amp, 3)}, more than the "
            f"{data_dps}-digit data can support"
        )
    with mp.workdps(max(ctx.dps, data_dps)):
        values = [mpmath.mpmathify(v) for _, v in pts]
        limits = [mpmath.fsum(gi * values[lo + i] for i, gi in enumerate(g)) for lo, _, g in windows]
        spread = mpf(0)
        for i in range(len(limits)):
            for j in range(i + 1, len(limits)):
                spread = max(spread, abs(limits[i] - limits[j]))
        scale = max(abs(v) for v in values)
        noise = amp * scale * mpf(10) ** (-data_dps)
    with mp.workdps(ctx.dps):
        return mpc(limits[-1]), +(SPREAD_SAFETY * spread + noise)

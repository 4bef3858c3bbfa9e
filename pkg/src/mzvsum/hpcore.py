"""High-precision arithmetic context and the scalar special functions.

Everything here is a thin layer over :mod:`mpmath`: complex values are plain
``mpmath.mpc`` objects, and a :class:`PrecisionContext` fixes the number of
decimal digits the arithmetic runs at.  The special functions (Pochhammer
symbols, Bernoulli numbers, digamma, Hurwitz zeta at integer exponents) are
implemented directly so that ``mpmath``'s own versions stay available as
independent oracles in the tests.
"""
from __future__ import annotations

import enum
import math
import os
import re
from contextlib import contextmanager
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Union

import mpmath
from mpmath import mp, mpc, mpf

from .errors import DomainError, NonFinite, PoleError

HpComplex = mpc
Number = Union[int, float, complex, str, mpf, mpc]

DEFAULT_DIGITS = 30
DEFAULT_GUARD = 15


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision: ``digits`` reported, ``digits + guard`` carried."""

    digits: int = DEFAULT_DIGITS
    guard: int = DEFAULT_GUARD

    def __post_init__(self):
        if not isinstance(self.digits, int) or self.digits < 20:
            raise DomainError(f"digits must be an integer >= 20, got {self.digits!r}")
        if not isinstance(self.guard, int) or self.guard < 5:
            raise DomainError(f"guard must be an integer >= 5, got {self.guard!r}")

    @property
    def dps(self) -> int:
        return self.digits + self.guard

    @property
    def eps(self) -> mpf:
        """Unit roundoff of the working precision (as a decimal power)."""
        return mpf(10) ** (-self.dps)

    @contextmanager
    def working(self, extra: int = 0) -> Iterator[None]:
        with mp.workdps(self.dps + extra):
            yield

    @classmethod
    def from_env(cls, digits: int | None = None, guard: int = DEFAULT_GUARD) -> "PrecisionContext":
        """Honour ``MZV_DIGITS`` when no explicit precision is given."""
        if digits is None:
            raw = os.environ.get("MZV_DIGITS")
            digits = int(raw) if raw else DEFAULT_DIGITS
        return cls(digits=digits, guard=guard)


class Method(str, enum.Enum):
    DIRECT = "direct"
    EULER_MACLAURIN = "euler_maclaurin"
    EXTRAPOLATED = "extrapolated"
    PARTIAL_FRACTION = "partial_fraction"
    TAYLOR = "taylor"
    QUADRATURE = "quadrature"


@dataclass(frozen=True)
class SeriesValue:
    """A computed value together with its estimated absolute error."""

    value: mpc
    err: mpf
    cutoff: int
    method: Method

    def __post_init__(self):
        if self.err < 0:
            raise ValueError("err must be nonnegative")
        if self.cutoff < 0:
            raise ValueError("cutoff must be nonnegative")
        if not isfinite(self.value):
            raise NonFinite("non-finite series value")


def sum_series_values(values, method: Method | None = None) -> SeriesValue:
    """Add values in the given order; errors add, cutoff is the largest used.

    The addition happens at the ambient mpmath precision, so call it inside
    ``ctx.working()``.
    """
    values = list(values)
    total = mpc(0)
    err = mpf(0)
    cutoff = 0
    for v in values:
        total += v.value
        err += v.err
        cutoff = max(cutoff, v.cutoff)
    if method is None:
        method = values[0].method if values else Method.DIRECT
    return SeriesValue(total, err, cutoff, method)


def isfinite(z) -> bool:
    z = mpmath.mpmathify(z)
    if isinstance(z, mpc):
        return mpmath.isfinite(z.real) and mpmath.isfinite(z.imag)
    return bool(mpmath.isfinite(z))


_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(
    rf"^(?P<re>[+-]?{_NUM})?(?:(?P<sign>[+-])?(?P<im>{_NUM})?(?P<unit>[ij]))?$"
)


def parse_complex(text: str) -> mpc:
    """Parse ``re[+im i]`` at the current working precision.

    Decimal strings go straight to ``mpf`` so no binary64 rounding happens
    on the way in.  Accepted shapes: ``"1"``, ``"-0.5"``, ``"0.75+0.25i"``,
    ``"1-0.5i"``, ``"2i"``, ``"-i"``.
    """
    s = text.strip().replace(" ", "")
    m = _COMPLEX_RE.match(s)
    if not s or m is None:
        raise DomainError(f"cannot parse complex number {text!r}")
    re_part, sign, im_part, unit = m.group("re", "sign", "im", "unit")
    if unit is None:
        if re_part is None:
            raise DomainError(f"cannot parse complex number {text!r}")
        return mpc(mpf(re_part), 0)
    if sign is None and re_part is not None and im_part is None:
        # "2i", "-0.5i": the regex put the coefficient in the real group
        return mpc(0, mpf(re_part))
    if sign is None and re_part is not None:
        raise DomainError(f"cannot parse complex number {text!r}")
    imag = mpf(im_part) if im_part is not None else mpf(1)
    if sign == "-":
        imag = -imag
    real = mpf(re_part) if re_part is not None else mpf(0)
    return mpc(real, imag)


def to_hp(x: Number) -> mpc:
    """Convert to ``mpc`` at the current precision (strings parsed exactly)."""
    if isinstance(x, str):
        return parse_complex(x)
    if isinstance(x, mpc):
        return +x
    if isinstance(x, float):
        # through repr so 0.1 means the decimal 0.1, not its binary64 neighbour
        return mpc(mpf(repr(x)), 0)
    if isinstance(x, complex):
        return mpc(mpf(repr(x.real)), mpf(repr(x.imag)))
    return mpc(x)


def _exact(x):
    """``mpmathify`` without rounding to the ambient precision."""
    return x if isinstance(x, (mpf, mpc)) else mpmath.mpmathify(x)


def format_real(x, digits: int) -> str:
    x = _exact(x)
    if isinstance(x, mpc):
        x = x.real
    return mpmath.nstr(x, digits)


def format_complex(z, digits: int) -> str:
    """Inverse of :func:`parse_complex` to ``digits`` significant digits."""
    z = _exact(z)
    re, im = (z.real, z.imag) if isinstance(z, mpc) else (z, mpf(0))
    re_s = mpmath.nstr(re, digits)
    if im == 0:
        return re_s
    im_s = mpmath.nstr(im, digits).lstrip("-")
    return f"{re_s}{'-' if im < 0 else '+'}{im_s}i"


def is_real_integer(z, tol=0) -> bool:
    z = mpc(z)
    return abs(z.imag) <= tol and abs(z.real - mpmath.nint(z.real)) <= tol


def pochhammer(a: Number, m: int, ctx: PrecisionContext) -> mpc:
    """Rising factorial ``a (a+1) ... (a+m-1)``; exactly 1 when ``m == 0``."""
    if isinstance(m, bool) or not isinstance(m, int) or m < 0:
        raise DomainError(f"Pochhammer index must be a nonnegative integer, got {m!r}")
    with ctx.working():
        a = to_hp(a)
        result = mpc(1)
        for j in range(m):
            result *= a + j
        if not isfinite(result):
            raise OverflowError(f"Pochhammer symbol ({a})_{m} overflowed")
        return result


@lru_cache(maxsize=32)
def _bernoulli_table(count: int, dps: int) -> tuple:
    # the recurrence cancels heavily for large index; carry extra digits
    with mp.workdps(dps + count + 10):
        b = [mpf(1)]
        for n in range(1, count):
            if n > 1 and n % 2 == 1:
                b.append(mpf(0))
                continue
            acc = mpf(0)
            binom = mpf(1)  # C(n+1, j), updated in the loop
            for j in range(n):
                acc += binom * b[j]
                binom = binom * (n + 1 - j) / (j + 1)
            b.append(-acc / (n + 1))
    with mp.workdps(dps):
        return tuple(+x for x in b)


def bernoulli_numbers(count: int, ctx: PrecisionContext) -> list[mpf]:
    """``B_0 .. B_{count-1}`` with ``B_1 = -1/2``."""
    if isinstance(count, bool) or not isinstance(count, int) or count < 1:
        raise DomainError(f"count must be a positive integer, got {count!r}")
    return list(_bernoulli_table(count, ctx.dps))


def digamma(z: Number, ctx: PrecisionContext) -> mpc:
    """Digamma function by upward recurrence plus the Stirling-type series."""
    with ctx.working():
        z = to_hp(z)
        nearest = mpmath.nint(z.real)
        if nearest <= 0 and abs(z - nearest) < mpf(10) ** (-ctx.digits):
            raise PoleError(f"digamma pole at z={nearest}")
        eps = ctx.eps
        shift = max(0, int(math.ceil(ctx.dps - z.real)))
        acc = mpc(0)
        for j in range(shift):
            acc += 1 / (z + j)
        w = z + shift
        result = mpmath.log(w) - 1 / (2 * w)
        w2inv = 1 / (w * w)
        power = w2inv
        nterms = ctx.dps
        bern = _bernoulli_table(2 * nterms + 1, ctx.dps)
        for k in range(1, nterms + 1):
            term = bern[2 * k] / (2 * k) * power
            result -= term
            if abs(term) < eps * abs(result):
                break
            power *= w2inv
        return result - acc


def _em_terms(digits: int) -> int:
    return -(-digits // 4) + 2


def hurwitz_zeta(s: int, a: Number, ctx: PrecisionContext) -> SeriesValue:
    """``sum_{m>=0} (m+a)^{-s}`` for integer ``s >= 2`` and ``Re a > 0``.

    Direct summation up to a cutoff ``N`` followed by an Euler-Maclaurin tail
    with ``ceil(digits/4)+2`` Bernoulli corrections.  ``N`` is the smallest
    cutoff for which the first omitted correction falls below
    ``10**-(digits+guard)``; that term is returned as ``err``.
    """
    if isinstance(s, bool) or not isinstance(s, int):
        raise DomainError(f"s must be an integer, got {s!r}")
    if s < 2:
        raise DomainError(f"Hurwitz zeta series diverges for s={s}")
    with ctx.working():
        a = to_hp(a)
        if a.real <= 0:
            raise DomainError(f"Hurwitz zeta needs Re a > 0, got a={a}")
        p = _em_terms(ctx.digits)
        bern = _bernoulli_table(2 * p + 3, ctx.dps)
        # rising factorials (s)_{2j-1}, j = 1 .. p+1
        rising = []
        r = mpf(s)
        for j in range(1, p + 2):
            rising.append(r)
            r *= (s + 2 * j - 1) * (s + 2 * j)
        coef = [bern[2 * j] / mpmath.factorial(2 * j) * rising[j - 1] for j in range(1, p + 2)]
        omitted_coef = abs(coef[p])
        order = s + 2 * p + 1
        target = ctx.eps

        def omitted(n):
            return omitted_coef * abs(n + a) ** (-order)

        radius = (omitted_coef / target) ** (mpf(1) / order)
        N = max(1, int(mpmath.ceil(radius - a.real)))
        while N > 1 and omitted(N - 1) < target:
            N -= 1
        while omitted(N) >= target:
            N += 1

        direct = mpc(0)
        for m in range(N):
            direct += (m + a) ** (-s)
        w = N + a
        winv = 1 / w
        wpow = w ** (-s)
        tail = w * wpow / (s - 1) + wpow / 2
        wpow *= winv
        winv2 = winv * winv
        for j in range(p):
            tail += coef[j] * wpow
            wpow *= winv2
        return SeriesValue(direct + tail, omitted(N), N, Method.EULER_MACLAURIN)

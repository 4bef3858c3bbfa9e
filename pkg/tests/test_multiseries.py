import itertools
import random

import mpmath
import numpy as np
import pytest
from mpmath import mpc, mpf

from conftest import close
from mzvsum.errors import CancellationError, ConvergenceError, DomainError
from mzvsum.extrapolate import TruncationPlan
from mzvsum.hpcore import Method, PrecisionContext, parse_complex
from mzvsum.multiseries import (
    WeightVariant,
    lhs_double_pole,
    multiple_hurwitz_partial_sums,
    multiple_hurwitz_zeta,
    weighted_multiple_series,
    weighted_partial_sums,
)

GRID = ["1", "0.5", "1.5", "0.75+0.25i", "1+0.5i"]


def mp_ref(x, dps=60):
    with mpmath.workdps(dps):
        return parse_complex(x) if isinstance(x, str) else mpmath.mpmathify(x)


def zeta(s, a="1"):
    with mpmath.workdps(60):
        return mpmath.zeta(s, mp_ref(a))


# ---------------------------------------------------------------- double pole

def test_double_pole_telescoping(ctx):
    v = lhs_double_pole(1, 1, 1, 2, ctx)
    assert v.method is Method.PARTIAL_FRACTION
    assert close(v.value, 1, 1e-40)


def test_double_pole_equal_parameters(ctx):
    v = lhs_double_pole(2, 1, 1, 1, ctx)
    assert v.method is Method.EULER_MACLAURIN
    assert close(v.value, zeta(3), 1e-40)


def test_double_pole_half_parameter(ctx):
    # (psi(1/2) - psi(1)) / (1/2 - 1) = 4 log 2
    v = lhs_double_pole(1, 1, 1, "0.5", ctx)
    with mpmath.workdps(60):
        assert close(v.value, 4 * mpmath.log(2), 1e-40)


def nsum_double_pole(n, m, a, b):
    with mpmath.workdps(40):
        a, b = mp_ref(a), mp_ref(b)
        return mpmath.nsum(lambda l: (l + a) ** -n * (l + b) ** -m, [0, mpmath.inf])


@pytest.mark.parametrize("n, m", [(1, 1), (1, 2), (2, 1), (2, 3), (3, 3), (1, 5)])
@pytest.mark.parametrize("a, b", [("1", "0.5"), ("0.75+0.25i", "1+0.5i"), ("1.5", "0.3-2i"), ("2", "7.25")])
def test_double_pole_against_nsum(ctx, n, m, a, b):
    v = lhs_double_pole(n, m, a, b, ctx)
    ref = nsum_double_pole(n, m, a, b)
    assert close(v.value, ref, mpf(10) ** -28 * max(1, abs(ref)))


@pytest.mark.parametrize("n, m, a, b", [(2, 3, "0.5", "1+0.5i"), (3, 1, "1.5", "0.75+0.25i")])
def test_double_pole_symmetry(ctx, n, m, a, b):
    u = lhs_double_pole(n, m, a, b, ctx)
    v = lhs_double_pole(m, n, b, a, ctx)
    assert close(u.value, v.value, 10 * (u.err + v.err) + mpf(10) ** -35)


def test_double_pole_near_equal_branch_is_continuous(ctx):
    with mpmath.workdps(60):
        b = mpf(1) + mpf(10) ** -20
    near = lhs_double_pole(2, 2, 1, b, ctx)
    assert near.method is Method.EULER_MACLAURIN
    assert close(near.value, zeta(4), 1e-18)
    assert near.err > 0


def test_double_pole_cancellation_is_reported():
    ctx = PrecisionContext(30, guard=5)
    with mpmath.workdps(60):
        b = mpf(1) + mpf(10) ** -14  # above the 10^-15 switch, far too close for partial fractions
    with pytest.raises(CancellationError):
        lhs_double_pole(3, 3, 1, b, ctx)


@pytest.mark.parametrize("args", [(0, 1, 1, 1), (1, 1, "-0.5", 1), (1, 1, 1, "0+2i"), (1, 1.5, 1, 1)])
def test_double_pole_domain(ctx, args):
    with pytest.raises(DomainError):
        lhs_double_pole(*args, ctx)


def brute_double_pole_numpy(n, m, a, b, terms=10**6):
    """Direct binary64 summation of 10^6 terms plus an integral bound for the tail."""
    a, b = complex(a.replace("i", "j")), complex(b.replace("i", "j"))
    l = np.arange(terms, dtype=float)
    s = np.sum((l + a) ** -n * (l + b) ** -m)
    # sum_{l>=L} |...| <= integral_{L-1}^inf (x + lo)^-(n+m) dx
    lo = min(a.real, b.real)
    tail = (terms - 1 + lo) ** (1 - n - m) / (n + m - 1)
    return s, tail


def test_double_pole_brute_force_random_points(ctx):
    rng = random.Random(20240611)
    for _ in range(10):
        n, m = rng.randint(1, 3), rng.randint(1, 3)
        a, b = rng.choice(GRID), rng.choice(GRID)
        if a == b:
            continue
        brute, tail = brute_double_pole_numpy(n, m, a, b)
        v = complex(lhs_double_pole(n, m, a, b, ctx).value)
        assert abs(v - brute) <= tail + 1e-8


# ---------------------------------------------------------------- DP vs enumeration

def brute_nested(comp, weight_fn, L, dps):
    """Exhaustive sum over 0 <= m1 < ... < mn < L of weight_fn(ms) * prod (m_j + shift)^-k_j."""
    with mpmath.workdps(dps):
        return mpmath.fsum(weight_fn(ms) for ms in itertools.combinations(range(L), len(comp)))


@pytest.mark.parametrize("comp", [(2,), (1, 2), (2, 3), (1, 1, 2), (3, 1, 2)])
@pytest.mark.parametrize("a", ["1", "0.75+0.25i"])
def test_multiple_hurwitz_partial_sums_match_enumeration(ctx40, comp, a):
    L = 40
    got = multiple_hurwitz_partial_sums(comp, a, [L], ctx40)[0]
    with mpmath.workdps(80):
        al = parse_complex(a)

        def w(ms):
            r = mpc(1)
            for mj, kj in zip(ms, comp):
                r *= (mj + al) ** -kj
            return r

        ref = brute_nested(comp, w, L, 80)
        assert abs(got - ref) <= mpf(10) ** -50 * abs(ref)


@pytest.mark.parametrize("variant", ["prop1", "cor2"])
@pytest.mark.parametrize("comp", [(1,), (3,), (1, 2), (2, 1), (1, 1, 1), (1, 2, 1)])
def test_weighted_partial_sums_match_enumeration(ctx40, variant, comp):
    L = 30
    a, b, x = "0.5", "1+0.5i", "0.1"
    got = weighted_partial_sums(comp, a, b, variant, x, [L], ctx40)[0]
    with mpmath.workdps(80):
        al, be, X = parse_complex(a), parse_complex(b), parse_complex(x)

        def w(ms):
            r = mpmath.rf(al, ms[0]) / mpmath.factorial(ms[0])
            last = ms[-1]
            if variant == "prop1":
                r *= mpmath.factorial(last) / mpmath.rf(al, last + 1)
            else:
                r *= mpmath.factorial(last) / mpmath.rf(al, last)
            for mj, kj in zip(ms, comp):
                r *= (mj + be - X) ** -kj
            return r

        ref = brute_nested(comp, w, L, 80)
        assert abs(got - ref) <= mpf(10) ** -50 * abs(ref)


# ---------------------------------------------------------------- limits

def test_mzv_depth_two(ctx):
    v = multiple_hurwitz_zeta((1, 2), 1, ctx=ctx)
    assert v.method is Method.EXTRAPOLATED
    assert close(v.value, zeta(3), 1e-20)


def test_single_hurwitz_reduction(ctx):
    assert close(multiple_hurwitz_zeta((2,), 1, ctx=ctx).value, zeta(2), 1e-20)
    assert close(multiple_hurwitz_zeta((3,), "0.75+0.25i", ctx=ctx).value, zeta(3, "0.75+0.25i"), 1e-20)


def test_stuffle_relation(ctx):
    # zeta(2,2) = (zeta(2)^2 - zeta(4)) / 2, in either weight variant convention at alpha = beta = 1
    with mpmath.workdps(60):
        ref = (zeta(2) ** 2 - zeta(4)) / 2
    assert close(multiple_hurwitz_zeta((2, 2), 1, ctx=ctx).value, ref, 1e-20)
    assert close(weighted_multiple_series((2, 2), 1, 1, "cor2", ctx=ctx).value, ref, 1e-20)


def test_cor2_weight_at_one_is_mzv(ctx):
    assert close(weighted_multiple_series((1, 2), 1, 1, WeightVariant.COR2, ctx=ctx).value, zeta(3), 1e-20)


def test_euler_depth_five(ctx):
    # zeta(1,1,1,1,2) = zeta(6) (duality)
    assert close(multiple_hurwitz_zeta((1, 1, 1, 1, 2), 1, ctx=ctx).value, zeta(6), 1e-15)


@pytest.mark.parametrize("m", [1, 2, 4])
@pytest.mark.parametrize("a, b", [("1", "2"), ("0.5", "1+0.5i"), ("1.5", "0.75+0.25i")])
def test_depth_one_weights_cancel(ctx, m, a, b):
    w = weighted_multiple_series((m,), a, b, "prop1", ctx=ctx)
    d = lhs_double_pole(1, m, a, b, ctx)
    assert close(w.value, d.value, max(mpf(10) ** -12, 10 * (w.err + d.err)))


def test_multiple_hurwitz_brute_force_half(ctx):
    # zeta(1,2; 1/2) by binary64 brute force over 10^6 outer indices; the inner
    # sums come from a cumulative sum and the outer tail from the asymptotic
    # H(m) ~ log m - psi(1/2), whose error is O(log N / N^2)
    v = complex(multiple_hurwitz_zeta((1, 2), "0.5", ctx=ctx).value)
    N = 10**6
    m = np.arange(N, dtype=float) + 0.5
    inner = np.concatenate(([0.0], np.cumsum(1.0 / m)[:-1]))
    head = np.sum(inner / m**2)
    psi_half = float(mpmath.psi(0, 0.5))
    tail = (np.log(N) + 1 - psi_half) / N
    assert abs(v - (head + tail)) < 1e-9


def test_invariant_under_doubled_cutoffs(ctx):
    plan = TruncationPlan()
    for comp, a in [((1, 2), "0.5"), ((1, 1, 2), "1+0.5i")]:
        u = multiple_hurwitz_zeta(comp, a, plan, ctx)
        v = multiple_hurwitz_zeta(comp, a, plan.scaled(2), ctx)
        assert close(u.value, v.value, max(mpf(10) ** -14, 10 * (u.err + v.err)))
    u = weighted_multiple_series((1, 2), "0.5", "0.75+0.25i", "prop1", plan=plan, ctx=ctx)
    v = weighted_multiple_series((1, 2), "0.5", "0.75+0.25i", "prop1", plan=plan.scaled(2), ctx=ctx)
    assert close(u.value, v.value, max(mpf(10) ** -14, 10 * (u.err + v.err)))


def test_convergence_error_on_inadequate_plan(ctx):
    # a tail model with only the integer family cannot describe the alpha-dependent tail
    plan = TruncationPlan(cutoffs=(20, 25, 30, 35, 40, 45, 50), basis=((1, 0),), target_tol=1e-25)
    with pytest.raises(ConvergenceError):
        weighted_multiple_series((1, 2), "0.5", "0.75", "prop1", plan=plan, ctx=ctx)


@pytest.mark.parametrize(
    "call",
    [
        lambda c: multiple_hurwitz_zeta((2, 1), 1, ctx=c),
        lambda c: multiple_hurwitz_zeta((1, 2), "-0.5", ctx=c),
        lambda c: multiple_hurwitz_zeta((0, 2), 1, ctx=c),
        lambda c: weighted_multiple_series((1, 2), "0", 1, "prop1", ctx=c),
        lambda c: weighted_multiple_series((1, 2), 1, 1, "prop1", X="1.5", ctx=c),
        lambda c: weighted_multiple_series((1, 2), 1, 1, "prop9", ctx=c),
    ],
)
def test_domain_errors(ctx, call):
    with pytest.raises((DomainError, ValueError)):
        call(ctx)

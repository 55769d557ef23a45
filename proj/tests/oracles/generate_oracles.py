#!/usr/bin/env python3
"""Independent mpmath re-implementation of the bound formulas.

Produces tests/oracles.hpp with frozen expected values. The C++ library is
never consulted; rerun only when a formula definition changes:

    python3 tests/oracles/generate_oracles.py > tests/oracles.hpp
"""

from mpmath import mp, mpf, sqrt, exp, pi, log

mp.dps = 400
DIGITS = 60  # frozen significant digits


def astala_lower(t, K):
    return 1 / (K * (1 / t - mpf(1) / 2) + mpf(1) / 2)


def astala_upper(t, K):
    return 1 / ((1 / K) * (1 / t - mpf(1) / 2) + mpf(1) / 2)


def k_of(K):
    return (K - 1) / (K + 1)


def K_of(k):
    return (1 + k) / (1 - k)


def delta(d, k):
    return d * (1 - k * k) / (1 + k * sqrt(1 - d)) ** 2


def composed_lower(L, k):
    D = delta(L, k)
    return (1 - k * k) * D / (1 + k * k - k * k * D)


def composed_upper(L, k):
    if L <= 1 - k * k:
        return (1 + k * k) * L / (1 + k * k - 2 * k * sqrt(1 - L))
    return 1 + k * k


def g0(k2, L):
    return composed_lower(L, k2) - astala_lower(L, K_of(k2))


def g1(k2, L):
    return astala_upper(L, K_of(k2)) - (1 + k2**2) * L / (1 + k2**2 - 2 * k2 * sqrt(1 - L))


def g2(k2, L):
    return astala_upper(L, K_of(k2)) - (1 + k2**2)


def bisect(f, a, b, iters=1500):
    fa = f(a)
    for _ in range(iters):
        m = (a + b) / 2
        if (f(m) > 0) == (fa > 0):
            a, fa = m, f(m)
        else:
            b = m
    return (a + b) / 2


x0 = bisect(lambda x: x**60 - (1 - x) ** 27, mpf(0), mpf(1))
y0 = bisect(lambda x: x**99 - (1 - x) ** 49, mpf(0), mpf(1))
CAP = mpf("2.67e-21")


def lower_schedule(L):
    return L**60 if L <= x0 else (1 - L) ** 27


def upper_schedule(L):
    if L <= y0:
        return L**99
    if L <= 1 - CAP**2:
        return (1 - L) ** 49
    return CAP


def split_lower(L, K, k2):
    K1 = K / K_of(k2)
    return astala_lower(composed_lower(L, k2), K1)


def split_upper(L, K, k2):
    K1 = K / K_of(k2)
    return astala_upper(composed_upper(L, k2), K1)


def schedule_lower(L, K):
    k2 = min(lower_schedule(L), k_of(K))
    return split_lower(L, K, k2)


def schedule_upper(L, K):
    k2 = min(upper_schedule(L), k_of(K))
    return split_upper(L, K, k2)


def dense_optimum(L, K, sign, points=4000):
    """Best value of sign*objective over a log grid then golden refinement."""
    mp.dps = 120
    k = k_of(K)
    f = (lambda s: -split_lower(L, K, s)) if sign < 0 else (lambda s: split_upper(L, K, s))
    lo = log(mpf("1e-60"))
    hi = log(k)
    grid = [exp(lo + (hi - lo) * i / (points - 1)) for i in range(points)]
    vals = [f(s) for s in grid]
    i = min(range(points), key=lambda j: vals[j])
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, points - 1)]
    gr = (sqrt(5) - 1) / 2
    for _ in range(300):
        c = b - gr * (b - a)
        d = a + gr * (b - a)
        if f(c) < f(d):
            b = d
        else:
            a = c
    x = (a + b) / 2
    best = min(f(x), vals[i])
    mp.dps = 400
    return -best if sign < 0 else best


def s(v, digits=DIGITS):
    return mp.nstr(v, digits, min_fixed=1, max_fixed=0)


def emit(name, value, digits=DIGITS, note=None):
    if note:
        print(f"// {note}")
    print(f'inline constexpr const char* {name} = "{s(value, digits)}";')


print("// Generated by tests/oracles/generate_oracles.py (mpmath, 400 digits).")
print("// Frozen expected values; do not edit by hand.")
print("#ifndef QCDIM_TESTS_ORACLES_HPP")
print("#define QCDIM_TESTS_ORACLES_HPP")
print()
print("namespace oracle {")
print()
emit("kX0", x0, note="root of x^60 = (1-x)^27")
emit("kY0", y0, note="root of x^99 = (1-x)^49")
emit("kX0Pow60", x0**60)
emit("kY0Pow99", y0**99)
print()

pos = {
    "kG0Pow60Right": bisect(lambda x: g0(x**60, x), mpf("0.98"), mpf("0.99"), 400),
    "kG0Pow27Left": bisect(lambda x: g0((1 - x) ** 27, x), mpf("0.17"), mpf("0.19"), 400),
    "kG1Pow49Left": bisect(lambda x: g1((1 - x) ** 49, x), mpf("0.11"), mpf("0.13"), 400),
}
print("// sign changes of the gap functions along the split schedules")
for name, v in pos.items():
    emit(name, v, 30)
print()

mp.dps = 80
g2_80 = g2(mpf("2.67e-21"), 1 - mpf("1e-40"))
mp.dps = 400
emit("kG2Point", g2_80, 30, note="g2(2.67e-21, 1 - 1e-40) at 80 digits")
print()

half = mpf("0.5")
K2 = mpf(2)
emit("kScheduleLowerHalf", schedule_lower(half, K2), note="theorem-schedule lower bound at L = 0.5, K = 2")
emit("kScheduleLowerHalfGain", schedule_lower(half, K2) - astala_lower(half, K2), 30)
emit("kScheduleUpperHalf", schedule_upper(half, K2), note="theorem-schedule upper bound at L = 0.5, K = 2")
emit("kScheduleUpperHalfGain", astala_upper(half, K2) - schedule_upper(half, K2), 30)
L9 = mpf("0.9")
emit("kScheduleLowerNine", schedule_lower(L9, K2))
emit("kScheduleUpperNine", schedule_upper(L9, K2))
Ltop = 1 - mpf("1e-50")
emit("kScheduleUpperTop", schedule_upper(Ltop, K2), note="L = 1 - 1e-50, K = 2: capped split")
emit("kScheduleUpperTopGain", astala_upper(Ltop, K2) - schedule_upper(Ltop, K2), 30)
print()

k01 = mpf("0.1")
emit("kComposedDeltaHalf", delta(half, k01), note="composed chain at L = 0.5, k = 0.1")
emit("kComposedLowerHalf", composed_lower(half, k01))
emit("kComposedUpperHalf", composed_upper(half, k01))
print()

emit("kSymmetricUpper", delta(mpf("0.75"), -mpf("0.25")), note="symmetric upper at d = 0.75, k = 0.25")
emit("kEllIdentity", exp(-pi), note="ell at k = 0")
print()

print("// best split bounds from a 4000-point log grid plus golden refinement")
emit("kOptLowerHalf2", dense_optimum(half, K2, -1), 20)
emit("kOptUpperHalf2", dense_optimum(half, K2, +1), 20)
emit("kOptUpperNine15", dense_optimum(L9, mpf("1.5"), +1), 20)
print()

# golden example: maximise g0(x, 0.5) over [1e-30, 1e-6]
mp.dps = 120
grid = [exp(log(mpf("1e-30")) + (log(mpf("1e-6")) - log(mpf("1e-30"))) * i / 9999) for i in range(10000)]
best = max(grid, key=lambda x: g0(x, half))
emit("kG0HalfMaxOnSmall", g0(best, half), 20, note="max of g0(x, 0.5) on [1e-30, 1e-6], 10^4-point log grid")
mp.dps = 400
print()
print("}  // namespace oracle")
print()
print("#endif  // QCDIM_TESTS_ORACLES_HPP")

"""Acceptance suite: thirteen criteria, one PASS/FAIL line each.

Run under pytest (lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import os
import random
import sys
import time
from fractions import Fraction

import pytest
import sympy as sp

sys.path.insert(0, os.path.dirname(__file__))

from cumpoly import combinat  # noqa: E402
from cumpoly.combinat import enumerate_partitions, indices_up_to  # noqa: E402
from cumpoly.cumulant import (  # noqa: E402
    SequenceTable,
    cumulant_poly_augmented,
    cumulant_poly_multinomial,
    cumulant_polynomial,
    cumulants_from_moments,
    moments_from_cumulants,
    random_sum_cumulants,
)
from cumpoly.mc import SampleSpec, compare, simulate_moments  # noqa: E402
from cumpoly.models import GaussianSpec, MertonSpec, VGSpec, hermite, merton_moments, vg_moments, \
    vg_outer_cumulants  # noqa: E402
from cumpoly.ring import SparsePoly  # noqa: E402
from cumpoly.series import TruncatedSeries, compose_multi_outer, compose_uni_outer  # noqa: E402
from cumpoly.symfunc import (  # noqa: E402
    elementary_symmetric_by_cumulants,
    elementary_symmetric_by_product,
    inverse_bell_cumulants,
    matrix_cumulants_from_trace_moments,
    sampling_invariance_check,
    trace_moments_from_matrix_cumulants,
)
from oracles import compose_oracle, exp_oracle, rand_coeffs, rand_fraction, symbols, to_expr, trunc_mul, \
    from_expr  # noqa: E402

F = Fraction
MC_SEED = 20261016
MC_SAMPLES = 10 ** 6

RESULTS: list[str] = []


def rand_table(rng, d, order):
    return SequenceTable(d, order, rand_coeffs(rng, d, order))


def ac01():
    expected = [
        (((2, 1), 1),),
        (((0, 1), 1), ((2, 0), 1)),
        (((1, 0), 1), ((1, 1), 1)),
        (((0, 1), 1), ((1, 0), 2)),
    ]
    best = float("inf")
    for _ in range(5):
        combinat._partitions.cache_clear()
        t0 = time.perf_counter()
        parts = enumerate_partitions((2, 1))
        best = min(best, time.perf_counter() - t0)
    got = [p.parts for p in parts]
    ok = got == expected and len(set(parts)) == len(parts) and best < 1e-3
    return ok, f"4 partitions in canonical order, cold run {best * 1e3:.3f} ms"


def ac02():
    c = SequenceTable.symbolic(2, 3)
    y, c10, c01, c20, c11, c21 = SparsePoly.variables("y", "c[1,0]", "c[0,1]", "c[2,0]", "c[1,1]", "c[2,1]")
    expected = y ** 3 * c01 * c10 ** 2 + 2 * y ** 2 * c10 * c11 + y ** 2 * c01 * c20 + y * c21
    got = cumulant_polynomial((2, 1), c).value
    return got == expected, f"C_(2,1)(y) = {got}"


def ac03():
    m = moments_from_cumulants(SequenceTable.from_sequence([1] * 6))
    got = [m[k] for k in range(1, 7)]
    return got == [1, 2, 5, 15, 52, 203], "moments " + ", ".join(map(str, got))


def ac04():
    rng = random.Random(4)
    t0 = time.perf_counter()
    ok = True
    for _ in range(100):
        d = rng.randint(1, 3)
        order = rng.randint(1, 6)
        c = rand_table(rng, d, order)
        m = moments_from_cumulants(c)
        ok &= cumulants_from_moments(m) == c
        mt = SequenceTable(d, order, rand_coeffs(rng, d, order), kind="moment")
        ok &= moments_from_cumulants(cumulants_from_moments(mt)) == mt
    elapsed = time.perf_counter() - t0
    return ok and elapsed < 10, f"100 tables both directions in {elapsed:.2f} s"


def ac05():
    rng = random.Random(5)
    ok = True
    for _ in range(50):
        d = rng.randint(1, 2)
        n = rng.randint(1, 3)
        order = rng.randint(1, 5)
        inner = [rand_coeffs(rng, d, order, density=0.6) for _ in range(n)]
        outer = rand_coeffs(rng, n, order, start=0, density=0.6)
        F_ = [TruncatedSeries(d, order, f) for f in inner]
        G = TruncatedSeries(n, order, outer)
        expected = compose_oracle(outer, inner, d, order)
        ok &= compose_multi_outer(G, F_).coeffs == expected
        if n == 1:
            ok &= compose_uni_outer(G, F_[0]).coeffs == expected
    return ok, "50 random instances, d <= 2, n <= 3, D <= 5, against brute-force substitution"


def ac06():
    c = SequenceTable.symbolic(2, 4)
    ok = True
    count = 0
    for n in (1, 2, 3):
        for i in indices_up_to(2, 4, start=1):
            ok &= cumulant_poly_multinomial(i, c, n) == cumulant_poly_augmented(i, c, n)
            count += 1
    return ok, f"{count} symbolic identities, d = 2, |i| <= 4, n <= 3"


def ac07():
    rng = random.Random(7)
    ok = True
    for d in (1, 2):
        order = 5
        c = rand_table(rng, d, order)
        zs = symbols(d)
        m = exp_oracle(c.entries, d, order)
        M = to_expr(m, zs)
        power = sp.Integer(1)
        for n in range(1, 5):
            power = trunc_mul(power, M, zs, order)
            conv = from_expr(power, zs, order)
            for i in c.indices():
                ok &= cumulant_polynomial(i, c)(n) == conv.get(i, 0)
    return ok, "C_i(n) equals the n-fold convolution moment, d <= 2, |i| <= 5, n <= 4"


def ac08():
    rng = random.Random(8)
    ok = True
    for _ in range(20):
        d = rng.randint(1, 2)
        order = rng.randint(1, 5)
        c = rand_table(rng, d, order)
        lam = rand_fraction(rng)
        h = random_sum_cumulants(SequenceTable.from_sequence([lam] * order), c)
        m = exp_oracle(c.entries, d, order)
        ok &= all(h[i] == lam * m.get(i, 0) for i in c.indices())
    return ok, "20 random tables: compound Poisson cumulants equal lambda * m_i"


def ac09():
    y = SparsePoly.var("y")
    ok = True
    for s2 in (F(1), F(3, 2), F(-2, 5)):
        H = [SparsePoly.const(1, ("y",))] + [hermite((k,), [[s2]]) for k in range(1, 9)]
        for i in range(1, 8):
            ok &= H[i + 1] == y * H[i] - s2 * i * H[i - 1]
    cov = [[F(2), F(-1, 3)], [F(-1, 3), F(1, 2)]]
    zs = symbols(2)
    y1, y2 = sp.symbols("y1 y2")
    q = sum(sp.Rational(cov[r][s]) * zs[r] * zs[s] for r in range(2) for s in range(2))
    expo = y1 * zs[0] + y2 * zs[1] - q / 2
    gf = sp.Poly(sp.expand(sum(expo ** k / sp.factorial(k) for k in range(5))), *zs)
    ref = {tuple(mon): c * sp.prod([sp.factorial(k) for k in mon]) for mon, c in gf.terms() if sum(mon) <= 4}
    for i in indices_up_to(2, 4, start=1):
        got = sp.sympify(str(hermite(i, cov)).replace("^", "**"))
        ok &= sp.expand(got - ref[i]) == 0
    return ok, "three-term recurrence through degree 8, bivariate through degree 4"


def rising(a, n):
    out = F(1)
    for k in range(n):
        out *= a + k
    return out


def ac10():
    ok = True
    for t, nu in [(F(1), F(1, 4)), (F(2, 3), F(5, 7)), (F(3), F(2))]:
        g = vg_outer_cumulants(t, nu, 8)
        composed = compose_uni_outer([1] * 9, g.to_series())
        a = t / nu
        ok &= all(composed[(k,)] == rising(a, k) for k in range(1, 9))
    return ok, "rising factorials (t/nu)(t/nu+1)... for i <= 8 (not falling factorials)"


def ac11():
    rng = random.Random(11)
    ok = True
    for n in range(1, 6):
        for order in range(1, 7):
            cA = SequenceTable.from_sequence([rand_fraction(rng) for _ in range(order)])
            ok &= matrix_cumulants_from_trace_moments(trace_moments_from_matrix_cumulants(cA, n)) == cA
    for n, m in [(5, 2), (4, 3), (6, 1)]:
        cX = SequenceTable.from_sequence([rand_fraction(rng) for _ in range(6)])
        ok &= sampling_invariance_check(cX, n, m).passed
    return ok, "trace round trip n <= 5, D <= 6; sampling invariance for (5,2), (4,3), (6,1)"


def ac12():
    ok = inverse_bell_cumulants(6)[2] == -1
    for n in range(1, 5):
        ok &= elementary_symmetric_by_product(n, 6) == elementary_symmetric_by_cumulants(n, 6)
    return ok, "routes agree for n <= 4, D <= 6; second inverse-Bell cumulant is -1"


def ac13():
    t0 = time.perf_counter()
    merton = MertonSpec([F(1, 20)], [[F(1, 25)]], 1, GaussianSpec([F(-1, 10)], [[F(9, 100)]]), t=1)
    vg = VGSpec(1, F(1, 4), [F(1, 10)], [[F(1, 25)]])
    r1 = compare(merton_moments(merton, 4), simulate_moments(SampleSpec(merton, MC_SAMPLES, MC_SEED, 4)), 4)
    r2 = compare(vg_moments(vg, 3), simulate_moments(SampleSpec(vg, MC_SAMPLES, MC_SEED, 3)), 4)
    elapsed = time.perf_counter() - t0
    worst = max(abs(float(F(r["symbolic"])) - r["estimate"]) / r["se"] for r in r1.results + r2.results)
    ok = r1.passed and r2.passed and elapsed < 120
    return ok, f"seed {MC_SEED}, 10^6 samples, worst |z| = {worst:.2f}, {elapsed:.1f} s"


CRITERIA = [
    ("AC01 partition fidelity", ac01),
    ("AC02 C_(2,1) display", ac02),
    ("AC03 Bell numbers", ac03),
    ("AC04 moment/cumulant round trip", ac04),
    ("AC05 composition vs brute force", ac05),
    ("AC06 multinomial vs augmented", ac06),
    ("AC07 integer-time convolution", ac07),
    ("AC08 compound Poisson", ac08),
    ("AC09 Hermite", ac09),
    ("AC10 VG rising factorials", ac10),
    ("AC11 random matrices", ac11),
    ("AC12 elementary symmetric", ac12),
    ("AC13 Monte Carlo", ac13),
]


def run_criterion(name, fn) -> bool:
    try:
        ok, detail = fn()
    except Exception as exc:  # report, then fail
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    line = f"{'PASS' if ok else 'FAIL'} {name}: {detail}"
    RESULTS.append(line)
    print(line)
    return ok


@pytest.mark.parametrize("name,fn", CRITERIA, ids=[n.split()[0] for n, _ in CRITERIA])
def test_criterion(name, fn):
    assert run_criterion(name, fn), RESULTS[-1]


def main() -> int:
    ok = all([run_criterion(name, fn) for name, fn in CRITERIA])
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())

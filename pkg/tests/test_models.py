from fractions import Fraction

import pytest
import sympy as sp

from cumpoly.combinat import indices_up_to
from cumpoly.cumulant import SequenceTable, cumulants_from_moments, moments_from_cumulants
from cumpoly.models import (
    GaussianSpec,
    MertonSpec,
    VGSpec,
    gaussian_cumulants,
    hermite,
    merton_cumulants,
    merton_moments,
    nef_series,
    sheffer_coefficients,
    shifted_cumulants,
    vg_cumulants,
    vg_moments,
    vg_outer_cumulants,
)
from cumpoly.ring import SparsePoly
from cumpoly.series import compose_uni_outer
from oracles import symbols

F = Fraction


def rising(a, n):
    out = Fraction(1)
    for k in range(n):
        out *= a + k
    return out


def test_gaussian_cumulants():
    c = gaussian_cumulants(GaussianSpec([0], [[1]]), 4)
    assert (c[1], c[2], c[3]) == (0, 1, 0)
    assert moments_from_cumulants(c)[4] == 3
    c2 = gaussian_cumulants(GaussianSpec([1, 2], [[3, 0], [0, 5]]), 3)
    assert c2[(1, 1)] == 0 and c2[(2, 0)] == 3 and c2[(0, 2)] == 5
    with pytest.raises(ValueError, match="symmetric"):
        GaussianSpec([0, 0], [[1, 2], [3, 1]])


def test_merton_without_jumps_is_scaled_gaussian():
    spec = MertonSpec([F(1, 3), -1], [[2, F(1, 2)], [F(1, 2), 1]], 0, GaussianSpec([5, 5], [[1, 0], [0, 1]]), t=F(5, 2))
    gauss = gaussian_cumulants(GaussianSpec(spec.drift, spec.cov), 4)
    assert merton_cumulants(spec, 4).multiply(spec.t) == gauss.multiply(spec.t)
    assert merton_moments(spec, 4)[(1, 0)] == spec.t * F(1, 3)


def test_merton_low_orders_by_hand():
    m, s, lam, mj, sj = F(1, 20), F(1, 25), F(3, 2), F(-1, 10), F(9, 100)
    c = merton_cumulants(MertonSpec([m], [[s]], lam, GaussianSpec([mj], [[sj]])), 4)
    assert c[1] == m + lam * mj
    assert c[2] == s + lam * (sj + mj ** 2)
    assert c[3] == lam * (mj ** 3 + 3 * mj * sj)
    assert c[4] == lam * (mj ** 4 + 6 * mj ** 2 * sj + 3 * sj ** 2)


def test_merton_reference_values():
    spec = MertonSpec([F(1, 20)], [[F(1, 25)]], 1, GaussianSpec([F(-1, 10)], [[F(9, 100)]]))
    m = merton_moments(spec, 4)
    assert [m[k] for k in range(1, 5)] == [F(-1, 20), F(57, 400), F(-393, 8000), F(15409, 160000)]


def test_merton_validation():
    with pytest.raises(ValueError):
        MertonSpec([0], [[1]], -1, GaussianSpec([0], [[1]]))
    with pytest.raises(ValueError):
        MertonSpec([0, 0], [[1, 0], [0, 1]], 1, GaussianSpec([0], [[1]]))


@pytest.mark.parametrize("t", [F(1), F(3, 2), F(2, 7)])
def test_vg_degenerate_is_gamma(t):
    spec = VGSpec(t, 1, [1], [[0]])
    m = vg_moments(spec, 6)
    assert [m[k] for k in range(1, 7)] == [rising(t, k) for k in range(1, 7)]


def test_vg_symmetric_has_no_odd_moments():
    m = vg_moments(VGSpec(F(3, 2), F(1, 3), [0], [[1]]), 7)
    assert all(m[k] == 0 for k in (1, 3, 5, 7))
    assert m[2] == F(3, 2)


def test_vg_outer_composed_with_bell_gives_rising_factorials():
    for a in (F(1, 3), F(4), F(7, 5)):
        g = vg_outer_cumulants(a, 1, 8)
        out = compose_uni_outer([1] * 9, g.to_series())
        assert [out[(k,)] for k in range(1, 9)] == [rising(a, k) for k in range(1, 9)]
    with pytest.raises(ValueError):
        vg_outer_cumulants(1, 0, 3)


def test_vg_bivariate_cross_moment():
    spec = VGSpec(2, F(1, 2), [F(1, 5), F(-1, 3)], [[1, F(1, 4)], [F(1, 4), 2]])
    c = vg_cumulants(spec, 2)
    # Cov = t (Sigma + nu theta theta^T)
    assert c[(1, 1)] == 2 * (F(1, 4) + F(1, 2) * F(1, 5) * F(-1, 3))
    assert c[(1, 0)] == 2 * F(1, 5)


def test_hermite_low_degrees():
    s2 = F(5, 3)
    y = SparsePoly.var("y")
    assert hermite((1,), [[s2]]) == y
    assert hermite((2,), [[s2]]) == y ** 2 - s2


@pytest.mark.parametrize("s2", [F(1), F(2), F(-3, 7)])
def test_hermite_recurrence(s2):
    y = SparsePoly.var("y")
    H = [SparsePoly.const(1, ("y",))] + [hermite((k,), [[s2]]) for k in range(1, 10)]
    for i in range(1, 9):
        assert H[i + 1] == y * H[i] - s2 * i * H[i - 1]


def test_hermite_bivariate_matches_generating_function():
    cov = [[F(1), F(1, 2)], [F(1, 2), F(3)]]
    zs = symbols(2)
    y1, y2 = sp.symbols("y1 y2")
    q = sum(sp.Rational(cov[r][s]) * zs[r] * zs[s] for r in range(2) for s in range(2))
    expo = y1 * zs[0] + y2 * zs[1] - q / 2
    gf = sum(expo ** k / sp.factorial(k) for k in range(5))
    ref = from_expr_poly(gf, zs, 4)
    for i in indices_up_to(2, 4, start=1):
        got = hermite(i, cov)
        assert sp.expand(sp.sympify(str(got).replace("^", "**")) - ref[i]) == 0


def from_expr_poly(expr, zs, order):
    """Coefficients times i! as sympy expressions in the remaining symbols."""
    poly = sp.Poly(sp.expand(expr), *zs)
    out = {}
    for mon, c in poly.terms():
        if sum(mon) <= order:
            out[tuple(mon)] = sp.expand(c * sp.prod([sp.factorial(k) for k in mon]))
    return out


def test_nef_examples():
    c = gaussian_cumulants(GaussianSpec([0], [[1]]), 4)
    f = nef_series([0], c)
    assert f[(0,)] == 1
    assert f[(2,)] == -1
    mean = [F(1, 2), F(-2)]
    c2 = gaussian_cumulants(GaussianSpec(mean, [[1, 0], [0, 2]]), 3)
    f2 = nef_series(mean, c2)
    assert f2[(1, 0)] == 0 and f2[(0, 1)] == 0
    x = [F(3), F(1, 7)]
    f3 = nef_series(x, c2)
    assert (f3[(1, 0)], f3[(0, 1)]) == (x[0] - mean[0], x[1] - mean[1])


def test_nef_against_direct_expansion():
    c = SequenceTable.from_sequence([F(1, 2), F(3), F(-1), F(2)])
    x = F(5, 4)
    th = sp.Symbol("th")
    K = sum(sp.Rational(c[k]) * th ** k / sp.factorial(k) for k in range(1, 5))
    ser = sp.series(sp.exp(th * sp.Rational(x) - K), th, 0, 5).removeO()
    f = nef_series([x], c)
    for k in range(5):
        assert sp.Rational(f[(k,)]) == ser.coeff(th, k) * sp.factorial(k)


def test_shift_examples():
    c = gaussian_cumulants(GaussianSpec([F(1, 3)], [[F(2)]]), 2)
    assert shifted_cumulants(c, [0]) == c
    t = F(-3, 5)
    s = shifted_cumulants(c, [t], polynomial=True)
    assert s[1] == F(1, 3) + 2 * t
    assert s[2] == 2


def test_tilted_two_point_moments():
    # X = a w.p. p, b otherwise; tilted moments E[X^k e^{tX}] / E[e^{tX}] as series in t
    a, b, p = F(2), F(-1), F(1, 3)
    D, J = 8, 4
    m = SequenceTable.from_sequence([p * a ** k + (1 - p) * b ** k for k in range(1, D + 1)], "moment")
    c = cumulants_from_moments(m)
    t = SparsePoly.var("t")
    tilted = moments_from_cumulants(shifted_cumulants(c, [t], theta_degree=J))
    assert tilted.order == D - J
    ts = sp.Symbol("t")
    M = sp.Rational(p) * sp.exp(sp.Rational(a) * ts) + sp.Rational(1 - p) * sp.exp(sp.Rational(b) * ts)
    for k in range(1, D - J + 1):
        ref = sp.series(sp.diff(M, ts, k) / M, ts, 0, J + 1).removeO()
        got = tilted[k]
        got = got.truncate("t", J) if isinstance(got, SparsePoly) else got
        got_expr = sp.sympify(str(got).replace("^", "**"), locals={"t": ts})
        assert sp.expand(got_expr - ref) == 0


def test_sheffer_examples():
    c = SequenceTable.from_sequence([F(1, 2), 3, -1])
    zero = SequenceTable(1, 3)
    assert sheffer_coefficients(zero, c) == moments_from_cumulants(c)
    assert sheffer_coefficients(c, zero) == moments_from_cumulants(c)
    ones = SequenceTable.from_sequence([1] * 4)
    s = sheffer_coefficients(ones, ones)
    assert s[2] == 6
    assert s == moments_from_cumulants(SequenceTable.from_sequence([2] * 4))


def test_model_json_round_trips():
    g = GaussianSpec([F(1, 2)], [[3]])
    m = MertonSpec([0], [[1]], F(1, 2), g, t=3)
    v = VGSpec(1, F(1, 4), [F(1, 10)], [[F(1, 25)]])
    assert GaussianSpec.from_json(g.to_json()) == g
    assert MertonSpec.from_json(m.to_json()) == m
    assert VGSpec.from_json(v.to_json()) == v

import itertools
import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cumpoly.cumulant import SequenceTable, cumulant_polynomial, var_names
from cumpoly.ring import SparsePoly, poly_eval
from cumpoly.series import series_exp, series_log, TruncatedSeries
from cumpoly.symfunc import (
    TraceMomentTable,
    elementary_symmetric,
    elementary_symmetric_by_cumulants,
    elementary_symmetric_by_product,
    inverse_bell_cumulants,
    matrix_cumulants_from_trace_moments,
    power_sum,
    sampling_invariance_check,
    trace_moments_from_matrix_cumulants,
    weighted_sum_moment,
)
from oracles import rand_fraction

rationals = st.fractions(min_value=-4, max_value=4, max_denominator=5)


def rand_table(rng, order):
    return SequenceTable.from_sequence([rand_fraction(rng) for _ in range(order)])


def test_weighted_sum_low_orders():
    c = SequenceTable.symbolic(1, 3)
    c1, c2, s1, s2 = SparsePoly.variables("c[1]", "c[2]", "s1", "s2")
    ps, _ = weighted_sum_moment(1, c, 3)
    assert ps.poly == c1 * s1
    ps, expanded = weighted_sum_moment(2, c, 2)
    assert ps.poly == c2 * s2 + c1 ** 2 * s1 ** 2
    y1, y2 = SparsePoly.variables("y1", "y2")
    assert expanded == c2 * (y1 ** 2 + y2 ** 2) + c1 ** 2 * (y1 + y2) ** 2


@pytest.mark.parametrize("i", range(1, 7))
def test_weighted_sum_at_ones_is_cumulant_polynomial(i):
    c = SequenceTable.symbolic(1, 6)
    for n in (1, 2, 3):
        _, expanded = weighted_sum_moment(i, c, n)
        at_ones = expanded.subs({v: 1 for v in var_names(n)})
        assert at_ones == cumulant_polynomial((i,), c)(n)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_weighted_sum_cumulants_are_c_i_s_i(n):
    # cumulants of <X, y> for i.i.d. coordinates are c_i * s_i
    order = 6
    c = SequenceTable.symbolic(1, order)
    names = var_names(n)
    moments = TruncatedSeries(1, order, {(0,): 1, **{(i,): weighted_sum_moment(i, c, n, names)[1]
                                                     for i in range(1, order + 1)}})
    cums = series_log(moments)
    for i in range(1, order + 1):
        assert cums[(i,)] == c[i] * power_sum(i, names)


def test_elementary_symmetric_two_variables():
    y1, y2 = SparsePoly.variables("y1", "y2")
    e = elementary_symmetric(2, 4)
    assert e[0] == 1 and e[1] == y1 + y2 and e[2] == 2 * y1 * y2
    assert e[3] == 0 and e[4] == 0


def test_inverse_bell_second_cumulant_is_negative():
    b = inverse_bell_cumulants(6)
    assert b[2] == -1
    assert [b[k] for k in range(1, 7)] == [1, -1, 2, -6, 24, -120]
    # composing with exp(z) - 1 gives back z
    e = series_exp(b.to_series())
    assert [e[(k,)] for k in range(1, 7)] == [1, 0, 0, 0, 0, 0]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_elementary_routes_agree(n):
    a = elementary_symmetric_by_product(n, 6)
    b = elementary_symmetric_by_cumulants(n, 6)
    assert a == b
    for i in range(n + 1, 7):
        assert a[i] == 0


def test_elementary_classical_bridge():
    rng = random.Random(1)
    ys = [rand_fraction(rng) for _ in range(4)]
    e = elementary_symmetric(4, 4)
    for i in range(5):
        classical = sum((Fraction(1) if not combo else _prod(combo)) for combo in itertools.combinations(ys, i))
        assert poly_eval(e[i], ys) == factorial(i) * classical


def _prod(xs):
    out = Fraction(1)
    for x in xs:
        out *= x
    return out


def test_trace_moment_examples():
    c = SequenceTable.symbolic(1, 3)
    c1, c2 = SparsePoly.var("c[1]"), SparsePoly.var("c[2]")
    tm = trace_moments_from_matrix_cumulants(c, 4, 2)
    assert tm.moments[0] == 4 * c1
    assert tm.moments[1] == 4 * c2 + 16 * c1 ** 2
    ident = trace_moments_from_matrix_cumulants(SequenceTable.from_sequence([1, 0, 0, 0]), 3)
    assert ident.moments == (3, 9, 27, 81)


def test_matrix_cumulants_examples():
    tm = TraceMomentTable(3, (3, 9, 27, 81))
    assert matrix_cumulants_from_trace_moments(tm) == SequenceTable.from_sequence([1, 0, 0, 0])
    gauss = SequenceTable.from_sequence([0, Fraction(5, 2), 0, 0, 0])
    assert matrix_cumulants_from_trace_moments(trace_moments_from_matrix_cumulants(gauss, 4)) == gauss


@settings(max_examples=40, deadline=None)
@given(st.lists(rationals, min_size=1, max_size=6), st.integers(1, 5))
def test_trace_round_trip(values, n):
    cA = SequenceTable.from_sequence(values)
    tm = trace_moments_from_matrix_cumulants(cA, n)
    assert matrix_cumulants_from_trace_moments(tm) == cA
    assert TraceMomentTable.from_json(tm.to_json()) == tm


def test_sampling_invariance_examples():
    rng = random.Random(7)
    cX = rand_table(rng, 6)
    assert sampling_invariance_check(cX, 3, 3).passed
    assert sampling_invariance_check(cX, 5, 2).passed
    lone = SequenceTable.from_sequence([Fraction(2, 3), 0, 0, 0])
    r = sampling_invariance_check(lone, 4, 1)
    assert r.passed and r.full == lone and r.sample == lone
    with pytest.raises(ValueError):
        sampling_invariance_check(cX, 2, 3)


@settings(max_examples=30, deadline=None)
@given(st.lists(rationals, min_size=1, max_size=6), st.integers(1, 6), st.data())
def test_sampling_invariance_property(values, n, data):
    m = data.draw(st.integers(1, n))
    assert sampling_invariance_check(SequenceTable.from_sequence(values), n, m).passed

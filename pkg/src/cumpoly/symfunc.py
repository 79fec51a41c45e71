"""Symmetric functions and cumulants of diagonal random matrices.

Conventions: generating functions are exponential, so the elementary
symmetric sequence here is ``e_i = i! * (classical e_i)``. Random matrices
are described by the cumulant table of their i.i.d. eigenvalue law.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .combinat import integer_partitions
from .cumulant import (
    SequenceTable,
    cumulant_polynomial,
    cumulants_from_moments,
    scale_cumulants,
    var_names,
)
from .ring import SparsePoly, as_scalar, format_rational, parse_rational
from .series import TruncatedSeries, series_exp

__all__ = [
    "PowerSumExpr",
    "SamplingReport",
    "TraceMomentTable",
    "elementary_symmetric",
    "elementary_symmetric_by_cumulants",
    "elementary_symmetric_by_product",
    "inverse_bell_cumulants",
    "matrix_cumulants_from_trace_moments",
    "power_sum",
    "sampling_invariance_check",
    "trace_moments_from_matrix_cumulants",
    "weighted_sum_moment",
]


def power_sum(j: int, names: Sequence[str]) -> SparsePoly:
    out = SparsePoly(tuple(names))
    for v in names:
        out = out + SparsePoly.var(v) ** j
    return out


@dataclass(frozen=True)
class PowerSumExpr:
    """A polynomial in the formal power sums ``s1, s2, ...``."""

    poly: SparsePoly

    def expand(self, n: int, names: Sequence[str] | None = None) -> SparsePoly:
        """Substitute ``s_j -> y_1^j + ... + y_n^j``."""
        names = tuple(names) if names else var_names(n)
        subs = {}
        for g in self.poly.gens:
            if g.startswith("s") and g[1:].isdigit():
                subs[g] = power_sum(int(g[1:]), names)
        out = self.poly.subs(subs)
        return out.with_gens(names + tuple(g for g in out.gens if g not in names))

    def __str__(self):
        return str(self.poly)


def weighted_sum_moment(i: int, c: SequenceTable, n: int, names: Sequence[str] | None = None):
    """``E[(X_1 y_1 + ... + X_n y_n)^i]`` for i.i.d. ``X_k`` with cumulants ``c``.

    Returns the power-sum form ``sum_{lambda |- i} d_lambda prod_j (c_j s_j)^{r_j}``
    and its expansion in ``y_1..y_n``.
    """
    if c.d != 1:
        raise ValueError("weighted sums take a univariate cumulant table")
    c.require(i)
    expr = SparsePoly()
    for lam in integer_partitions(i):
        term = SparsePoly.const(lam.d_lambda)
        for part, r in lam.multiplicities.items():
            term = term * (c[part] * SparsePoly.var(f"s{part}")) ** r
        expr = expr + term
    ps = PowerSumExpr(expr)
    return ps, ps.expand(n, names)


def inverse_bell_cumulants(order: int) -> SequenceTable:
    """Cumulants ``(-1)^(i-1) (i-1)!`` of the gf ``1 + log(1 + z)``.

    ``log(1 + z)`` is the compositional inverse of ``e^z - 1``.
    """
    return SequenceTable.from_sequence([(-1) ** (i - 1) * factorial(i - 1) for i in range(1, order + 1)])


def elementary_symmetric_by_product(n: int, order: int, names: Sequence[str] | None = None) -> list:
    """``e_i = i! sum_{j_1 < ... < j_i} y_{j_1} ... y_{j_i}``, read off ``prod (1 + y_j z)``."""
    names = tuple(names) if names else var_names(n)
    ys = [SparsePoly.var(v) for v in names]
    out = []
    for i in range(order + 1):
        e = SparsePoly(names)
        for combo in itertools.combinations(ys, i):
            term = SparsePoly.const(1, names)
            for y in combo:
                term = term * y
            e = e + term
        out.append(e * factorial(i))
    return out


def elementary_symmetric_by_cumulants(n: int, order: int, names: Sequence[str] | None = None) -> list:
    """``e_i`` as moments of ``sum_j y_j kappa``, ``kappa`` with gf ``1 + log(1 + z)``."""
    names = tuple(names) if names else var_names(n)
    beta_inv = inverse_bell_cumulants(order)
    total = TruncatedSeries(1, order)
    for v in names:
        total = total + scale_cumulants(SparsePoly.var(v), beta_inv).to_series()
    e = series_exp(total)
    return [_on(e[(k,)], names) for k in range(order + 1)]


def _on(c, names):
    if isinstance(c, SparsePoly):
        return c.with_gens(names + tuple(g for g in c.gens if g not in names))
    return SparsePoly.const(c, names)


def elementary_symmetric(n: int, order: int, names: Sequence[str] | None = None) -> list:
    """``[e_0, ..., e_order]`` in the exponential convention.

    Both constructions are run; a disagreement raises ``ArithmeticError``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    a = elementary_symmetric_by_product(n, order, names)
    b = elementary_symmetric_by_cumulants(n, order, names)
    for k, (pa, pb) in enumerate(zip(a, b)):
        if pa != pb:
            raise ArithmeticError(f"elementary symmetric routes disagree at order {k}")
    return a


@dataclass(frozen=True)
class TraceMomentTable:
    """``E[(Tr A)^i]`` for ``i = 1..D`` of an ``n x n`` random matrix."""

    n: int
    moments: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("matrix dimension n must be >= 1")
        object.__setattr__(self, "moments", tuple(as_scalar(m) for m in self.moments))

    @property
    def order(self) -> int:
        return len(self.moments)

    def to_json(self) -> dict:
        return {"n": self.n, "moments": [format_rational(m) for m in self.moments]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "TraceMomentTable":
        return cls(int(obj["n"]), tuple(parse_rational(m) for m in obj["moments"]))


def trace_moments_from_matrix_cumulants(cA: SequenceTable, n: int, order: int | None = None) -> TraceMomentTable:
    """``E[(Tr A)^i] = C_{i,A}(n)``."""
    if cA.d != 1:
        raise ValueError("matrix cumulants are univariate")
    order = cA.order if order is None else order
    cA.require(order)
    return TraceMomentTable(n, tuple(cumulant_polynomial((i,), cA)(n) for i in range(1, order + 1)))


def matrix_cumulants_from_trace_moments(tm: TraceMomentTable) -> SequenceTable:
    """``c_i(A) = C_{i,A}(1/n)``: cumulants of ``Tr A`` divided by ``n``."""
    m = SequenceTable.from_sequence(list(tm.moments), kind="moment")
    return cumulants_from_moments(m).multiply(Fraction(1, tm.n))


@dataclass(frozen=True)
class SamplingReport:
    n: int
    m: int
    full: SequenceTable
    sample: SequenceTable
    passed: bool

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "full": self.full.to_json(),
                "sample": self.sample.to_json(), "pass": self.passed}


def sampling_invariance_check(cX: SequenceTable, n: int, m: int, order: int | None = None) -> SamplingReport:
    """Recover matrix cumulants from ``diag(X_1..X_n)`` and from an ``m``-subsample.

    The two recovered tables must coincide (and equal ``cX``).
    """
    if m > n:
        raise ValueError(f"sample size m={m} exceeds population size n={n}")
    if m < 1:
        raise ValueError("sample size must be >= 1")
    order = cX.order if order is None else order
    full = matrix_cumulants_from_trace_moments(trace_moments_from_matrix_cumulants(cX, n, order))
    sample = matrix_cumulants_from_trace_moments(trace_moments_from_matrix_cumulants(cX, m, order))
    return SamplingReport(n, m, full, sample, full == sample == cX.truncate(order))

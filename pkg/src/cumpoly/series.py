"""Truncated multivariate formal power series in exponential format.

A :class:`TruncatedSeries` of dimension ``d`` and order ``D`` stands for
``sum_{|i| <= D} a_i z^i / i!``. Coefficients are Fractions or SparsePolys.
Every series stores its true constant term; operations that need a delta
series (zero constant term) check for it. The ``order`` of a result is the
total degree through which its coefficients are exact.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Mapping, Sequence

from .combinat import format_index, grlex_key, index_factorial, indices_up_to, parse_index
from .ring import as_scalar, decode_coeff, encode_coeff

__all__ = [
    "ShiftResult",
    "TruncatedSeries",
    "compose_multi_outer",
    "compose_uni_outer",
    "series_add",
    "series_exp",
    "series_log",
    "series_mul",
    "series_pow",
    "series_scale",
    "series_shift",
]

_ZERO = Fraction(0)


@lru_cache(maxsize=65536)
def _binom(i: tuple[int, ...], j: tuple[int, ...]) -> int:
    out = 1
    for a, b in zip(i, j):
        out *= comb(a, b)
    return out


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _le(a, b):
    return all(x <= y for x, y in zip(a, b))


class TruncatedSeries:
    """Exponential-format series truncated at total degree ``order``.

    ``polynomial=True`` records that every coefficient beyond ``order`` is
    known to be zero (the series is a polynomial), which makes re-centering
    exact.
    """

    __slots__ = ("d", "order", "coeffs", "polynomial")

    def __init__(self, d: int, order: int, coeffs: Mapping | None = None, polynomial: bool = False):
        if d < 1:
            raise ValueError("series dimension must be >= 1")
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        clean = {}
        for i, c in (coeffs or {}).items():
            i = tuple(int(k) for k in i)
            if len(i) != d or any(k < 0 for k in i):
                raise ValueError(f"bad index {i} for a {d}-variate series")
            if sum(i) > order:
                if polynomial and c:
                    raise ValueError(f"polynomial series has a term at {i} beyond order {order}")
                continue
            c = as_scalar(c)
            if c:
                clean[i] = c
        self.d = d
        self.order = order
        self.coeffs = clean
        self.polynomial = polynomial

    @property
    def zero_index(self):
        return (0,) * self.d

    def __getitem__(self, i):
        i = tuple(i)
        if sum(i) > self.order:
            raise KeyError(f"index {i} beyond truncation order {self.order}")
        return self.coeffs.get(i, _ZERO)

    @property
    def constant(self):
        return self.coeffs.get(self.zero_index, _ZERO)

    def is_delta(self) -> bool:
        return not self.constant

    def truncate(self, order: int) -> "TruncatedSeries":
        order = min(order, self.order)
        return TruncatedSeries(
            self.d, order, {i: c for i, c in self.coeffs.items() if sum(i) <= order},
            polynomial=self.polynomial and order == self.order)

    def with_constant(self, c) -> "TruncatedSeries":
        coeffs = dict(self.coeffs)
        coeffs[self.zero_index] = c
        return TruncatedSeries(self.d, self.order, coeffs, self.polynomial)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.d, self.order) == (other.d, other.order) and self.coeffs == other.coeffs

    def __add__(self, other):
        return series_add(self, other)

    def __sub__(self, other):
        return series_add(self, series_scale(-1, other))

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        return series_scale(other, self)

    __rmul__ = __mul__

    def __neg__(self):
        return series_scale(-1, self)

    def __repr__(self):
        body = ", ".join(f"{format_index(i)}: {c}" for i, c in sorted(self.coeffs.items(), key=lambda t: grlex_key(t[0])))
        return f"TruncatedSeries(d={self.d}, order={self.order}, {{{body}}})"

    def to_json(self) -> dict:
        out = {
            "d": self.d,
            "order": self.order,
            "coeffs": {format_index(i): encode_coeff(c)
                       for i, c in sorted(self.coeffs.items(), key=lambda t: grlex_key(t[0]))},
        }
        if self.polynomial:
            out["polynomial"] = True
        return out

    @classmethod
    def from_json(cls, obj: Mapping) -> "TruncatedSeries":
        return cls(int(obj["d"]), int(obj["order"]),
                   {parse_index(k): decode_coeff(v) for k, v in obj["coeffs"].items()},
                   polynomial=bool(obj.get("polynomial", False)))


def _check_pair(f: TruncatedSeries, g: TruncatedSeries) -> None:
    if f.d != g.d:
        raise ValueError(f"dimension mismatch: {f.d} vs {g.d}")


def series_add(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    _check_pair(f, g)
    order = min(f.order, g.order)
    out = {i: c for i, c in f.coeffs.items() if sum(i) <= order}
    for i, c in g.coeffs.items():
        if sum(i) <= order:
            out[i] = out.get(i, _ZERO) + c
    poly = f.polynomial and g.polynomial and f.order == g.order
    return TruncatedSeries(f.d, order, out, polynomial=poly)


def series_scale(c, f: TruncatedSeries) -> TruncatedSeries:
    return TruncatedSeries(f.d, f.order, {i: c * a for i, a in f.coeffs.items()}, f.polynomial)


def series_mul(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Exponential-format product ``h_i = sum_j binom(i; j) f_j g_{i-j}``."""
    _check_pair(f, g)
    order = min(f.order, g.order)
    out: dict = {}
    for j, a in f.coeffs.items():
        nj = sum(j)
        if nj > order:
            continue
        for k, b in g.coeffs.items():
            if nj + sum(k) > order:
                continue
            i = _add(j, k)
            out[i] = out.get(i, _ZERO) + _binom(i, j) * a * b
    return TruncatedSeries(f.d, order, out)


def series_pow(f: TruncatedSeries, n: int) -> TruncatedSeries:
    if n < 0:
        raise ValueError("only non-negative powers")
    out = TruncatedSeries(f.d, f.order, {f.zero_index: 1})
    for _ in range(n):
        out = series_mul(out, f)
    return out


def _first_nonzero(k):
    for r, v in enumerate(k):
        if v:
            return r
    raise ValueError("zero index")


def series_exp(f: TruncatedSeries) -> TruncatedSeries:
    """``exp(f)`` for a delta series, via ``d(exp f)/dz_r = (df/dz_r) exp f``.

    In exponential format differentiation in ``z_r`` shifts indices by the unit
    vector ``e_r``, so with ``k = i + e_r``:
    ``h_k = sum_{j <= i} binom(i; j) f_{j + e_r} h_{i - j}``.
    """
    if not f.is_delta():
        raise ValueError("exp requires a delta series")
    d, order = f.d, f.order
    zero = f.zero_index
    h = {zero: Fraction(1)}
    fitems = [(p, a) for p, a in f.coeffs.items() if any(p)]
    for k in indices_up_to(d, order, start=1):
        r = _first_nonzero(k)
        i = k[:r] + (k[r] - 1,) + k[r + 1:]
        s = _ZERO
        for p, a in fitems:
            if p[r] == 0:
                continue
            j = p[:r] + (p[r] - 1,) + p[r + 1:]
            if not _le(j, i):
                continue
            hv = h.get(_sub(i, j))
            if hv:
                s = s + _binom(i, j) * a * hv
        if s:
            h[k] = s
    return TruncatedSeries(d, order, h)


def series_log(f: TruncatedSeries) -> TruncatedSeries:
    """The delta series ``g`` with ``exp(g) = f``; requires constant term 1.

    From ``df = dg * f``: ``g_k = f_k - sum_{j < i} binom(i; j) g_{j + e_r} f_{i - j}``.
    """
    if f.constant != 1:
        raise ValueError("log requires constant term 1")
    d, order = f.d, f.order
    zero = f.zero_index
    g: dict = {}
    fitems = [(q, a) for q, a in f.coeffs.items() if q != zero]
    for k in indices_up_to(d, order, start=1):
        r = _first_nonzero(k)
        i = k[:r] + (k[r] - 1,) + k[r + 1:]
        s = f.coeffs.get(k, _ZERO)
        for q, a in fitems:
            if not _le(q, i):
                continue
            j = _sub(i, q)
            gv = g.get(j[:r] + (j[r] + 1,) + j[r + 1:])
            if gv:
                s = s - _binom(i, j) * gv * a
        if s:
            g[k] = s
    return TruncatedSeries(d, order, g)


def _outer_series(g) -> TruncatedSeries:
    if isinstance(g, TruncatedSeries):
        return g
    if hasattr(g, "to_series"):
        return g.to_series()
    # plain sequence g_0, g_1, ..., g_D
    g = list(g)
    return TruncatedSeries(1, len(g) - 1, {(j,): c for j, c in enumerate(g)})


def compose_uni_outer(g, f: TruncatedSeries) -> TruncatedSeries:
    """Coefficients of ``g(f(z)) = g_0 + sum_{j >= 1} g_j f(z)^j / j!``.

    ``g`` is a univariate series, a univariate SequenceTable, or a plain list
    ``[g_0, g_1, ...]``. ``f`` must be a delta series. The result is exact
    through ``min(order of g, order of f)``.
    """
    g = _outer_series(g)
    if g.d != 1:
        raise ValueError("outer series must be univariate")
    if not f.is_delta():
        raise ValueError("inner series must be a delta series")
    order = min(g.order, f.order)
    f = f.truncate(order)
    out = TruncatedSeries(f.d, order, {f.zero_index: g.constant})
    power = TruncatedSeries(f.d, order, {f.zero_index: 1})
    for j in range(1, order + 1):
        power = series_mul(power, f)
        gj = g.coeffs.get((j,))
        if gj:
            out = series_add(out, series_scale(gj / factorial(j), power))
    return out


def compose_multi_outer(G: TruncatedSeries, F: Sequence[TruncatedSeries]) -> TruncatedSeries:
    """Coefficients of ``G(F_1(z), ..., F_n(z))`` (multivariate Faa di Bruno).

    ``G`` is ``n``-variate; each ``F_r`` is a ``d``-variate delta series.
    """
    F = list(F)
    n = len(F)
    if n == 0:
        raise ValueError("need at least one inner series")
    if G.d != n:
        raise ValueError(f"outer series has {G.d} variables but {n} inner series were given")
    d = F[0].d
    for Fr in F:
        if Fr.d != d:
            raise ValueError("inner series must share one dimension")
        if not Fr.is_delta():
            raise ValueError("inner series must be delta series")
    order = min([G.order] + [Fr.order for Fr in F])
    F = [Fr.truncate(order) for Fr in F]
    zero = (0,) * d
    one = TruncatedSeries(d, order, {zero: 1})
    powers = []
    for Fr in F:
        pw = [one]
        for _ in range(order):
            pw.append(series_mul(pw[-1], Fr))
        powers.append(pw)
    out = TruncatedSeries(d, order, {zero: G.constant})
    for k, gk in sorted(G.coeffs.items(), key=lambda t: grlex_key(t[0])):
        if not any(k) or sum(k) > order:
            continue
        term = None
        for r, e in enumerate(k):
            if e:
                term = powers[r][e] if term is None else series_mul(term, powers[r][e])
        out = series_add(out, series_scale(gk / index_factorial(k), term))
    return out


@dataclass(frozen=True)
class ShiftResult:
    """Re-centered series plus its accuracy.

    ``series`` is exact through ``exact_order``. For a polynomial input every
    coefficient is exact. Otherwise each kept coefficient is the Taylor sum in
    ``theta`` complete through total ``theta``-degree ``theta_degree``.
    """

    series: TruncatedSeries
    exact_order: int
    theta_degree: int | None


def series_shift(f: TruncatedSeries, theta: Sequence, theta_degree: int | None = None) -> ShiftResult:
    """Taylor re-centering: ``c_i = sum_j a_{i+j} theta^j / j!``.

    All available coefficients are consulted. ``theta`` entries may be
    rationals or polynomials (symbolic shifts). When ``f`` is not known to be
    a polynomial the output is truncated to order ``D - theta_degree``
    (default ``theta_degree = D // 2``), the range where every Taylor term of
    ``theta``-degree at most ``theta_degree`` is present.
    """
    theta = [as_scalar(t) for t in theta]
    if len(theta) != f.d:
        raise ValueError(f"theta has {len(theta)} entries for a {f.d}-variate series")
    D = f.order
    if not any(theta):
        return ShiftResult(f, D, None)
    out: dict = {}
    powcache: dict = {}

    def theta_pow(j):
        if j not in powcache:
            v = Fraction(1)
            for t, e in zip(theta, j):
                if e:
                    v = v * t ** e
            powcache[j] = v / index_factorial(j)
        return powcache[j]

    for p, a in f.coeffs.items():
        for i in itertools.product(*(range(e + 1) for e in p)):
            j = _sub(p, i)
            out[i] = out.get(i, _ZERO) + a * theta_pow(j)
    if f.polynomial:
        return ShiftResult(TruncatedSeries(f.d, D, out, polynomial=True), D, None)
    J = D // 2 if theta_degree is None else theta_degree
    if not 0 <= J <= D:
        raise ValueError(f"theta_degree must lie in 0..{D}")
    exact = D - J
    res = TruncatedSeries(f.d, exact, {i: c for i, c in out.items() if sum(i) <= exact})
    return ShiftResult(res, exact, J)

"""Moment/cumulant conversion, cumulant polynomials and random-sum cumulants.

A sequence (a cumulant or moment sequence, or an umbra standing for one) is
held in a :class:`SequenceTable`. Sums over multi-index partitions are the
reference route; series composition is the scalable route used beyond the
enumeration caps. Both are available through ``method=``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from . import combinat
from .combinat import (
    augmented_partitions,
    compositions,
    enumerate_partitions,
    format_index,
    grlex_key,
    indices_up_to,
    multi_index,
    multinomial,
    parse_index,
)
from .ring import SparsePoly, as_scalar, decode_coeff, encode_coeff
from .series import TruncatedSeries, compose_uni_outer, series_exp, series_log

__all__ = [
    "CumulantPolynomial",
    "SequenceTable",
    "convolve_cumulant_tables",
    "correlated_substitution",
    "cumulant_poly_augmented",
    "cumulant_poly_multinomial",
    "cumulant_polynomial",
    "cumulants_from_moments",
    "moments_from_cumulants",
    "multivariable_cumulant_polynomial",
    "random_sum_cumulants",
    "scale_cumulants",
    "var_names",
]

KINDS = ("cumulant", "moment")
_ZERO = Fraction(0)


class SequenceTable:
    """Entries ``c_i`` for ``1 <= |i| <= order`` of a d-variate sequence.

    Indices within the order that are not stored are zero. The entry at the
    zero index is implicit: 1 for moment tables, 0 for cumulant tables.
    Asking for an index beyond the order raises ``KeyError``.
    Univariate tables also accept a plain int index.
    """

    __slots__ = ("d", "order", "entries", "kind")

    def __init__(self, d: int, order: int, entries: Mapping | None = None, kind: str = "cumulant"):
        if d < 1:
            raise ValueError("table dimension must be >= 1")
        if order < 0:
            raise ValueError("table order must be >= 0")
        if kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
        clean = {}
        for i, c in (entries or {}).items():
            i = (i,) if isinstance(i, int) else tuple(int(k) for k in i)
            if len(i) != d or any(k < 0 for k in i):
                raise ValueError(f"bad index {i} for a {d}-variate table")
            if not any(i):
                raise ValueError("the zero-index entry is implicit and cannot be set")
            if sum(i) > order:
                raise ValueError(f"index {format_index(i)} beyond table order {order}")
            c = as_scalar(c)
            if c:
                clean[i] = c
        self.d = d
        self.order = order
        self.entries = clean
        self.kind = kind

    # -- construction ------------------------------------------------------
    @classmethod
    def from_function(cls, d: int, order: int, fn: Callable, kind: str = "cumulant"):
        return cls(d, order, {i: fn(i) for i in indices_up_to(d, order, start=1)}, kind)

    @classmethod
    def from_sequence(cls, values: Sequence, kind: str = "cumulant"):
        """Univariate table from ``[v_1, v_2, ..., v_D]``."""
        return cls(1, len(values), {(k + 1,): v for k, v in enumerate(values)}, kind)

    @classmethod
    def symbolic(cls, d: int, order: int, name: str = "c", kind: str = "cumulant"):
        """Table whose entries are the indeterminates ``name[i1,...,id]``."""
        return cls.from_function(d, order, lambda i: SparsePoly.var(f"{name}[{format_index(i)}]"), kind)

    @classmethod
    def from_series(cls, s: TruncatedSeries, kind: str = "cumulant"):
        return cls(s.d, s.order, {i: c for i, c in s.coeffs.items() if any(i)}, kind)

    def to_series(self) -> TruncatedSeries:
        coeffs = dict(self.entries)
        if self.kind == "moment":
            coeffs[(0,) * self.d] = Fraction(1)
        return TruncatedSeries(self.d, self.order, coeffs)

    # -- access ------------------------------------------------------------
    def __getitem__(self, i):
        i = (i,) if isinstance(i, int) else tuple(i)
        if len(i) != self.d:
            raise KeyError(f"index {i} has wrong dimension for a {self.d}-variate table")
        if not any(i):
            return Fraction(1) if self.kind == "moment" else _ZERO
        if sum(i) > self.order:
            raise KeyError(
                f"missing {self.kind} at index {format_index(i)} (table order {self.order})")
        return self.entries.get(i, _ZERO)

    def indices(self):
        return indices_up_to(self.d, self.order, start=1)

    def require(self, order: int) -> None:
        if order > self.order:
            missing = (order,) + (0,) * (self.d - 1)
            raise KeyError(
                f"missing {self.kind} at index {format_index(missing)} (table order {self.order})")

    def truncate(self, order: int) -> "SequenceTable":
        order = min(order, self.order)
        return SequenceTable(self.d, order, {i: c for i, c in self.entries.items() if sum(i) <= order}, self.kind)

    def map(self, fn: Callable, kind: str | None = None) -> "SequenceTable":
        return SequenceTable(self.d, self.order, {i: fn(i, c) for i, c in self.entries.items()},
                             kind or self.kind)

    def multiply(self, a) -> "SequenceTable":
        """Entrywise product with a scalar (cumulants of an a-fold convolution)."""
        return self.map(lambda i, c: a * c)

    def with_kind(self, kind: str) -> "SequenceTable":
        return SequenceTable(self.d, self.order, self.entries, kind)

    def __eq__(self, other):
        if not isinstance(other, SequenceTable):
            return NotImplemented
        return (self.d, self.order, self.kind) == (other.d, other.order, other.kind) \
            and self.entries == other.entries

    def __repr__(self):
        body = ", ".join(f"{format_index(i)}: {c}" for i, c in self.sorted_items())
        return f"SequenceTable(d={self.d}, order={self.order}, kind={self.kind}, {{{body}}})"

    def sorted_items(self):
        return sorted(self.entries.items(), key=lambda t: grlex_key(t[0]))

    # -- serialization -----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "d": self.d,
            "order": self.order,
            "kind": self.kind,
            "entries": {format_index(i): encode_coeff(c) for i, c in self.sorted_items()},
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "SequenceTable":
        return cls(int(obj["d"]), int(obj["order"]),
                   {parse_index(k): decode_coeff(v) for k, v in obj.get("entries", {}).items()},
                   obj.get("kind", "cumulant"))


def _expect_kind(t: SequenceTable, kind: str, what: str) -> None:
    if t.kind != kind:
        raise ValueError(f"{what} expects a {kind} table, got a {t.kind} table")


def var_names(n: int, prefix: str = "y") -> tuple[str, ...]:
    return tuple(f"{prefix}{k}" for k in range(1, n + 1))


def _use_partitions(i, method: str) -> bool:
    if method not in ("auto", "partition", "series"):
        raise ValueError(f"unknown method {method!r}")
    if method == "auto":
        c = combinat.caps()
        return len(i) <= c.max_dim and sum(i) <= c.max_degree
    return method == "partition"


def _partition_monomial(lam, c: SequenceTable):
    out = Fraction(1)
    for col, r in lam.parts:
        out = out * c[col] ** r
    return out


# -- moments <-> cumulants --------------------------------------------------

def moments_from_cumulants(c: SequenceTable) -> SequenceTable:
    """Moment table whose cumulants are ``c`` (exponential of the cgf)."""
    _expect_kind(c, "cumulant", "moments_from_cumulants")
    return SequenceTable.from_series(series_exp(c.to_series()), kind="moment")


def cumulants_from_moments(m: SequenceTable) -> SequenceTable:
    """Cumulant table of the moment table ``m`` (logarithm of the mgf)."""
    _expect_kind(m, "moment", "cumulants_from_moments")
    return SequenceTable.from_series(series_log(m.to_series()), kind="cumulant")


# -- cumulant polynomials ---------------------------------------------------

@dataclass(frozen=True)
class CumulantPolynomial:
    """``C_{i,X}(y)``: a polynomial in ``var`` with cumulant coefficients."""

    index: tuple[int, ...]
    value: SparsePoly
    var: str = "y"

    def __call__(self, y):
        """Evaluate at a rational or polynomial value of ``var``."""
        return as_scalar(self.value.subs({self.var: y}))

    def umbral(self, g):
        """Replace ``var**l`` by ``g[l]`` (evaluation at an umbra with moments g)."""
        from .ring import umbral_substitute_power
        return umbral_substitute_power(self.value, g, self.var)

    def __str__(self):
        return str(self.value)


def _cumpoly_partitions(i, c: SequenceTable, y: SparsePoly):
    out = SparsePoly()
    for lam in enumerate_partitions(i):
        out = out + lam.coefficient * y ** lam.length * _partition_monomial(lam, c)
    return out


def _cumpoly_series(i, c: SequenceTable, y: SparsePoly):
    n = sum(i)
    c.require(n)
    K = TruncatedSeries(c.d, n, {j: y * v for j, v in c.truncate(n).entries.items()})
    val = series_exp(K)[i]
    return val if isinstance(val, SparsePoly) else SparsePoly.const(val)


def cumulant_polynomial(i, c: SequenceTable, var: str = "y", method: str = "auto") -> CumulantPolynomial:
    """``C_{i,X}(y) = i! sum_{lambda |- i} y^l(lambda) / (m(lambda)! lambda!) prod c_{lambda_j}^{r_j}``.

    ``method="series"`` instead reads the coefficient of ``z^i/i!`` in
    ``exp(y K(z))``. ``"auto"`` enumerates within the size caps.
    """
    i = multi_index(i)
    if len(i) != c.d:
        raise ValueError(f"index {i} does not match a {c.d}-variate table")
    if not any(i):
        return CumulantPolynomial(i, SparsePoly.const(1, (var,)), var)
    _expect_kind(c, "cumulant", "cumulant_polynomial")
    c.require(sum(i))
    y = SparsePoly.var(var)
    if _use_partitions(i, method):
        val = _cumpoly_partitions(i, c, y)
    else:
        val = _cumpoly_series(i, c, y)
    if val.constant_term():
        raise AssertionError("cumulant polynomial with nonzero constant term")
    return CumulantPolynomial(i, val, var)


def random_sum_cumulants(g: SequenceTable, c: SequenceTable, method: str = "auto") -> SequenceTable:
    """Cumulants of the (generalized) random sum with index cumulants ``g``.

    ``h_i = i! sum_{lambda |- i} g_{l(lambda)} / (m(lambda)! lambda!) prod c_{lambda_j}^{r_j}``,
    the coefficients of ``K_N(K_X(z))``.
    """
    if g.d != 1:
        raise ValueError("the index table g must be univariate")
    _expect_kind(c, "cumulant", "random_sum_cumulants")
    order = c.order
    g.require(order)
    if not _use_partitions((0,) * (c.d - 1) + (order,), method):
        inner = c.to_series()
        outer = TruncatedSeries(1, g.order, dict(g.entries))
        return SequenceTable.from_series(compose_uni_outer(outer, inner), kind="cumulant")
    out = {}
    for i in c.indices():
        h = _ZERO
        for lam in enumerate_partitions(i):
            h = h + lam.coefficient * g[lam.length] * _partition_monomial(lam, c)
        out[i] = h
    return SequenceTable(c.d, order, out, kind="cumulant")


def cumulant_poly_multinomial(i, c: SequenceTable, n: int, names: Sequence[str] | None = None) -> SparsePoly:
    """``C_{i,X}(y_1 + ... + y_n)`` expanded by direct substitution."""
    names = tuple(names) if names else var_names(n)
    if len(names) != n:
        raise ValueError("need one name per summand")
    if n < 1:
        raise ValueError("n must be >= 1")
    total = SparsePoly()
    for name in names:
        total = total + SparsePoly.var(name)
    p = cumulant_polynomial(i, c, var="_y")
    return p.value.subs({"_y": total})


def cumulant_poly_augmented(i, c: SequenceTable, n: int, names: Sequence[str] | None = None) -> SparsePoly:
    """``C_{i,X}(y_1 + ... + y_n)`` as the sum over augmented partitions P_n(i)."""
    i = multi_index(i)
    _expect_kind(c, "cumulant", "cumulant_poly_augmented")
    names = tuple(names) if names else var_names(n)
    if len(names) != n:
        raise ValueError("need one name per summand")
    c.require(sum(i))
    out = SparsePoly(names)
    for ap in augmented_partitions(i, n):
        mono = SparsePoly(names, {ap.lengths: ap.coefficient})
        for col, t in ap.grouped:
            mono = mono * c[col] ** t
        out = out + mono
    return out


def multivariable_cumulant_polynomial(i, cs: Sequence[SequenceTable], names: Sequence[str] | None = None) -> SparsePoly:
    """``sum_{i_1 + ... + i_n = i} binom(i; i_1..i_n) prod_k C_{i_k, X_k}(y_k)``."""
    i = multi_index(i)
    cs = list(cs)
    n = len(cs)
    if n < 1:
        raise ValueError("need at least one table")
    names = tuple(names) if names else var_names(n)
    if len(names) != n:
        raise ValueError("need one indeterminate per table")
    for t in cs:
        if t.d != len(i):
            raise ValueError("all tables must match the dimension of i")
    cache: dict = {}

    def C(k, j):
        if (k, j) not in cache:
            cache[(k, j)] = cumulant_polynomial(j, cs[k], var=names[k]).value
        return cache[(k, j)]

    out = SparsePoly(names)
    for parts in compositions(i, n):
        term = multinomial(i, parts)
        for k, j in enumerate(parts):
            if any(j):
                term = term * C(k, j)
        out = out + term
    return out


def correlated_substitution(i, cs: Sequence[SequenceTable], jointY: SequenceTable, mode: str):
    """Plug the n-variate ``Y`` into the multivariable cumulant polynomial.

    ``mode="moment"`` replaces each monomial ``y^e`` by the joint moment
    ``E[Y^e]``; ``mode="cumulant"`` replaces it by the joint cumulant of order
    ``e``, which yields the coefficients of ``K_Y(K_X1(z), ..., K_Xn(z))``.
    The mode is never inferred.
    """
    if mode not in ("moment", "cumulant"):
        raise ValueError("mode must be 'moment' or 'cumulant'")
    cs = list(cs)
    if jointY.d != len(cs):
        raise ValueError(f"jointY has {jointY.d} variables for {len(cs)} tables")
    if mode == "moment":
        values = jointY if jointY.kind == "moment" else moments_from_cumulants(jointY)
    else:
        values = jointY if jointY.kind == "cumulant" else cumulants_from_moments(jointY)
    names = var_names(len(cs), prefix="_y")
    p = multivariable_cumulant_polynomial(i, cs, names)
    p = p.with_gens(names + tuple(g for g in p.gens if g not in names))
    total = _ZERO
    k = len(names)
    for e, coeff in p.terms.items():
        ye, rest = e[:k], e[k:]
        mono = SparsePoly(p.gens[k:], {rest: coeff}) if rest else coeff
        if not any(ye):
            total = total + mono
        else:
            total = total + mono * values[ye]
    return as_scalar(total)


# -- homogeneity and convolution --------------------------------------------

def scale_cumulants(a, c: SequenceTable) -> SequenceTable:
    """Cumulants of ``aX``: entry ``i`` becomes ``a^|i| c_i``."""
    a = as_scalar(a)
    return c.map(lambda i, v: a ** sum(i) * v)


def convolve_cumulant_tables(cs: Sequence[SequenceTable]) -> SequenceTable:
    """Cumulants of a sum of independent vectors (entrywise sum)."""
    cs = list(cs)
    if not cs:
        raise ValueError("need at least one table")
    d = cs[0].d
    for t in cs:
        if t.d != d:
            raise ValueError("dimension mismatch among tables")
        _expect_kind(t, "cumulant", "convolve_cumulant_tables")
    order = min(t.order for t in cs)
    out: dict = {}
    for t in cs:
        for i, v in t.entries.items():
            if sum(i) <= order:
                out[i] = out.get(i, _ZERO) + v
    return SequenceTable(d, order, out, kind="cumulant")

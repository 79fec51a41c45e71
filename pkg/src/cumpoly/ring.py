"""Exact coefficient arithmetic.

Rationals are :class:`fractions.Fraction`. :class:`SparsePoly` is a sparse
multivariate polynomial with rational coefficients over named indeterminates
(``y``, ``y1..yn``, or symbolic cumulants such as ``c[1,0]``). Scalars and
polynomials mix freely under ``+``, ``-`` and ``*`` so that the series and
cumulant code can run unchanged on numeric or symbolic tables.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Union

__all__ = [
    "Fraction",
    "SparsePoly",
    "as_fraction",
    "as_scalar",
    "decode_coeff",
    "encode_coeff",
    "format_rational",
    "parse_rational",
    "poly_eval",
    "umbral_substitute_power",
]

Scalar = Union[int, Fraction]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def parse_rational(s: str) -> Fraction:
    s = s.strip()
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {s!r}") from exc


def format_rational(q) -> str:
    q = as_fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _grlex(e: tuple[int, ...]):
    return (sum(e), e)


class SparsePoly:
    """Polynomial ``sum c_e * x^e`` over the ordered generators ``gens``.

    ``terms`` maps exponent tuples (one entry per generator) to nonzero
    Fractions. Instances are treated as immutable.
    """

    __slots__ = ("gens", "terms")

    def __init__(self, gens: Iterable[str] = (), terms: Mapping | None = None):
        gens = tuple(gens)
        if len(set(gens)) != len(gens):
            raise ValueError(f"duplicate generators in {gens}")
        clean: dict[tuple[int, ...], Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != len(gens):
                raise ValueError(f"exponent {e} does not match generators {gens}")
            if any(k < 0 for k in e):
                raise ValueError(f"negative exponent {e}")
            c = as_fraction(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
                if not clean[e]:
                    del clean[e]
        self.gens = gens
        self.terms = clean

    # -- constructors ------------------------------------------------------
    @classmethod
    def var(cls, name: str) -> "SparsePoly":
        return cls((name,), {(1,): 1})

    @classmethod
    def const(cls, c, gens: Iterable[str] = ()) -> "SparsePoly":
        gens = tuple(gens)
        return cls(gens, {(0,) * len(gens): c})

    @classmethod
    def variables(cls, *names: str) -> list["SparsePoly"]:
        return [cls.var(n) for n in names]

    # -- structure ---------------------------------------------------------
    def with_gens(self, gens: Iterable[str]) -> "SparsePoly":
        """Re-express over ``gens``, which must contain every used generator."""
        gens = tuple(gens)
        pos = {g: k for k, g in enumerate(gens)}
        terms = {}
        for e, c in self.terms.items():
            new = [0] * len(gens)
            for g, k in zip(self.gens, e):
                if k:
                    if g not in pos:
                        raise ValueError(f"generator {g!r} missing from {gens}")
                    new[pos[g]] = k
            terms[tuple(new)] = c
        return SparsePoly(gens, terms)

    def used_gens(self) -> tuple[str, ...]:
        return tuple(g for k, g in enumerate(self.gens)
                     if any(e[k] for e in self.terms))

    def _aligned(self, other: "SparsePoly"):
        if self.gens == other.gens:
            return self.gens, self.terms, other.terms
        gens = self.gens + tuple(g for g in other.gens if g not in self.gens)
        return gens, self.with_gens(gens).terms, other.with_gens(gens).terms

    @staticmethod
    def _coerce(x) -> "SparsePoly":
        if isinstance(x, SparsePoly):
            return x
        return SparsePoly.const(as_fraction(x))

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.gens), Fraction(0))

    def degree(self, var: str | None = None) -> int:
        """Total degree, or degree in ``var``; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        if var not in self.gens:
            return 0
        k = self.gens.index(var)
        return max(e[k] for e in self.terms)

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        gens, a, b = self._aligned(other)
        out = dict(a)
        for e, c in b.items():
            out[e] = out.get(e, Fraction(0)) + c
        return SparsePoly(gens, out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly(self.gens, {e: -c for e, c in self.terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, SparsePoly):
            try:
                c = as_fraction(other)
            except TypeError:
                return NotImplemented
            return SparsePoly(self.gens, {e: v * c for e, v in self.terms.items()})
        gens, a, b = self._aligned(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, Fraction(0)) + ca * cb
        return SparsePoly(gens, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, SparsePoly):
            if not other.is_constant() or other.is_zero():
                raise ZeroDivisionError("division only by nonzero scalars")
            other = other.constant_term()
        c = as_fraction(other)
        if not c:
            raise ZeroDivisionError("division by zero")
        return self * (1 / c)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result = SparsePoly.const(1, self.gens)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- comparison --------------------------------------------------------
    def _canon(self):
        return frozenset(
            (frozenset((g, k) for g, k in zip(self.gens, e) if k), c)
            for e, c in self.terms.items()
        )

    def __eq__(self, other):
        if isinstance(other, SparsePoly):
            return self._canon() == other._canon()
        try:
            c = as_fraction(other)
        except TypeError:
            return NotImplemented
        return self.is_constant() and self.constant_term() == c

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_term())
        return hash(self._canon())

    def __bool__(self):
        return bool(self.terms)

    # -- substitution ------------------------------------------------------
    def subs(self, values: Mapping[str, object]) -> "SparsePoly":
        """Substitute scalars or polynomials for some generators."""
        keep = tuple(g for g in self.gens if g not in values)
        idx_keep = [k for k, g in enumerate(self.gens) if g not in values]
        idx_sub = [(k, g) for k, g in enumerate(self.gens) if g in values]
        out = SparsePoly(keep)
        powers: dict[tuple[str, int], object] = {}
        for e, c in self.terms.items():
            term = SparsePoly(keep, {tuple(e[k] for k in idx_keep): c})
            for k, g in idx_sub:
                if e[k]:
                    key = (g, e[k])
                    if key not in powers:
                        powers[key] = self._coerce(values[g]) ** e[k]
                    term = term * powers[key]
            out = out + term
        return out

    def coefficients_in(self, var: str) -> dict[int, "SparsePoly"]:
        """Split into ``{l: coefficient of var**l}`` (coefficients free of var)."""
        if var not in self.gens:
            return {0: self} if self.terms else {}
        k = self.gens.index(var)
        rest = self.gens[:k] + self.gens[k + 1:]
        parts: dict[int, dict] = {}
        for e, c in self.terms.items():
            parts.setdefault(e[k], {})[e[:k] + e[k + 1:]] = c
        return {l: SparsePoly(rest, t) for l, t in sorted(parts.items())}

    def truncate(self, var: str, degree: int) -> "SparsePoly":
        """Drop terms whose degree in ``var`` exceeds ``degree``."""
        if var not in self.gens:
            return self
        k = self.gens.index(var)
        return SparsePoly(self.gens, {e: c for e, c in self.terms.items() if e[k] <= degree})

    # -- display / serialization ------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grlex(t[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(g if k == 1 else f"{g}^{k}" for g, k in zip(self.gens, e) if k)
            if not mono:
                pieces.append(format_rational(c))
            elif c == 1:
                pieces.append(mono)
            elif c == -1:
                pieces.append("-" + mono)
            else:
                pieces.append(f"{format_rational(c)}*{mono}")
        return " + ".join(pieces).replace("+ -", "- ")

    def __repr__(self):
        return f"SparsePoly({self})"

    def to_json(self) -> dict:
        return {
            "vars": list(self.gens),
            "terms": {",".join(map(str, e)): format_rational(c) for e, c in self.sorted_terms()},
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "SparsePoly":
        gens = tuple(obj["vars"])
        terms = {}
        for key, val in obj["terms"].items():
            e = tuple(int(k) for k in key.split(",")) if key else ()
            terms[e] = parse_rational(val)
        return cls(gens, terms)


def as_scalar(x):
    """Collapse a constant polynomial to a Fraction; leave anything else alone."""
    if isinstance(x, SparsePoly):
        return x.constant_term() if x.is_constant() else x
    return as_fraction(x)


def poly_eval(p: SparsePoly, point) -> Fraction:
    """Evaluate ``p`` at ``point`` (one value per generator, in order)."""
    point = list(point)
    if len(point) != len(p.gens):
        raise ValueError(
            f"point has {len(point)} values but polynomial has {len(p.gens)} generators")
    vals = [as_fraction(v) for v in point]
    total = Fraction(0)
    for e, c in p.terms.items():
        term = c
        for v, k in zip(vals, e):
            if k:
                term *= v ** k
        total += term
    return total


def umbral_substitute_power(p: SparsePoly, g, var: str = "y"):
    """Replace every power ``var**l`` (l >= 1) by ``g[l]``.

    ``g`` is anything indexable by the integer order (a list, a dict or a
    univariate SequenceTable). The ``var``-free part of ``p`` is kept as is,
    so ``g[0]`` is never looked up.
    """
    out = SparsePoly()
    for l, coeff in p.coefficients_in(var).items():
        if l == 0:
            out = out + coeff
            continue
        try:
            gl = g[l]
        except (KeyError, IndexError) as exc:
            raise KeyError(f"substitution sequence has no entry of order {l}") from exc
        out = out + coeff * gl
    return as_scalar(out)


def encode_coeff(c):
    """JSON form of a coefficient: a rational string or a polynomial object."""
    c = as_scalar(c)
    return c.to_json() if isinstance(c, SparsePoly) else format_rational(c)


def decode_coeff(obj):
    """Inverse of :func:`encode_coeff`.

    A string that is not a rational is read as a symbol name, so a table may
    hold symbolic entries such as ``"c[1,0]"``.
    """
    if isinstance(obj, Mapping):
        return as_scalar(SparsePoly.from_json(obj))
    if isinstance(obj, bool):
        raise ValueError("booleans are not coefficients")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        try:
            return parse_rational(obj)
        except ValueError:
            if not obj.strip():
                raise ValueError("empty coefficient string") from None
            return SparsePoly.var(obj.strip())
    raise ValueError(f"cannot decode coefficient {obj!r}")

"""Multi-index partitions and the combinatorial weights of cumulant formulas.

Multi-indexes are plain tuples of non-negative ints. A partition of ``i`` is a
multiset of nonzero columns summing to ``i``; it is stored canonically with
distinct columns in strictly increasing lexicographic order, each carrying its
multiplicity.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod
from typing import Iterable, Sequence

__all__ = [
    "AugmentedPartition",
    "Caps",
    "IntegerPartition",
    "MultiIndexPartition",
    "SizeCapError",
    "augmented_partitions",
    "caps",
    "compositions",
    "enumerate_partitions",
    "format_index",
    "grlex_key",
    "index_factorial",
    "indices_up_to",
    "integer_partitions",
    "multi_index",
    "multinomial",
    "parse_index",
    "partition_coefficient",
    "set_caps",
    "unit",
]

MultiIndex = tuple[int, ...]


class SizeCapError(ValueError):
    """Raised when an enumeration would exceed the configured size caps."""


@dataclass(frozen=True)
class Caps:
    max_dim: int = 4
    max_degree: int = 12


def _caps_from_env() -> Caps:
    return Caps(
        max_dim=int(os.environ.get("CUMPOLY_MAX_DIM", Caps.max_dim)),
        max_degree=int(os.environ.get("CUMPOLY_MAX_DEGREE", Caps.max_degree)),
    )


_CAPS = _caps_from_env()


def caps() -> Caps:
    return _CAPS


def set_caps(max_dim: int | None = None, max_degree: int | None = None) -> Caps:
    """Change the enumeration caps; returns the previous setting."""
    global _CAPS
    old = _CAPS
    _CAPS = Caps(old.max_dim if max_dim is None else max_dim,
                 old.max_degree if max_degree is None else max_degree)
    return old


def _check_caps(i: MultiIndex) -> None:
    c = _CAPS
    if len(i) > c.max_dim or sum(i) > c.max_degree:
        raise SizeCapError(
            f"size cap exceeded: index {format_index(i)} (d={len(i)}, |i|={sum(i)}) "
            f"beyond d <= {c.max_dim}, |i| <= {c.max_degree}")


# -- multi-index helpers ----------------------------------------------------

def multi_index(i: Iterable[int]) -> MultiIndex:
    i = tuple(int(k) for k in i)
    if not i:
        raise ValueError("a multi-index needs at least one entry")
    if any(k < 0 for k in i):
        raise ValueError(f"negative entry in multi-index {i}")
    return i


def parse_index(s: str) -> MultiIndex:
    """Parse ``"2,1"`` into ``(2, 1)``."""
    try:
        return multi_index(int(t) for t in s.split(","))
    except ValueError as exc:
        raise ValueError(f"bad multi-index {s!r}: {exc}") from exc


def format_index(i: Sequence[int]) -> str:
    return ",".join(str(k) for k in i)


def grlex_key(i: Sequence[int]):
    """Sort key for graded lexicographic order."""
    return (sum(i), tuple(i))


def unit(d: int, r: int) -> MultiIndex:
    return tuple(1 if k == r else 0 for k in range(d))


def index_factorial(i: Sequence[int]) -> int:
    return prod(factorial(k) for k in i)


@lru_cache(maxsize=None)
def _indices_up_to(d: int, order: int) -> tuple[MultiIndex, ...]:
    out = [e for e in itertools.product(range(order + 1), repeat=d) if sum(e) <= order]
    return tuple(sorted(out, key=grlex_key))


def indices_up_to(d: int, order: int, start: int = 0) -> tuple[MultiIndex, ...]:
    """All ``i`` in N^d with ``start <= |i| <= order``, graded-lex sorted."""
    return tuple(i for i in _indices_up_to(d, order) if sum(i) >= start)


def _below(i: MultiIndex) -> list[MultiIndex]:
    """Nonzero ``j <= i`` entrywise, lexicographically increasing."""
    return [j for j in itertools.product(*(range(k + 1) for k in i)) if any(j)]


# -- partitions -------------------------------------------------------------

@dataclass(frozen=True)
class MultiIndexPartition:
    """A canonical partition ``lambda |- target``.

    ``parts`` is a tuple of ``(column, multiplicity)`` with distinct nonzero
    columns in strictly increasing lexicographic order.
    """

    target: MultiIndex
    parts: tuple[tuple[MultiIndex, int], ...]

    @classmethod
    def from_columns(cls, target: Sequence[int], columns: Iterable[Sequence[int]]):
        target = multi_index(target)
        counts: dict[MultiIndex, int] = {}
        for col in columns:
            col = tuple(col)
            counts[col] = counts.get(col, 0) + 1
        p = cls(target, tuple(sorted(counts.items())))
        p.validate()
        return p

    def validate(self) -> None:
        d = len(self.target)
        total = [0] * d
        prev = None
        for col, r in self.parts:
            if len(col) != d:
                raise ValueError(f"column {col} has wrong dimension for target {self.target}")
            if not any(col):
                raise ValueError("partitions have no zero columns")
            if r < 1:
                raise ValueError("multiplicities must be positive")
            if prev is not None and not prev < col:
                raise ValueError("columns must be distinct and lexicographically increasing")
            prev = col
            for k in range(d):
                total[k] += r * col[k]
        if tuple(total) != self.target:
            raise ValueError(f"columns sum to {tuple(total)}, not {self.target}")

    @property
    def columns(self) -> tuple[MultiIndex, ...]:
        """Columns listed with repetition."""
        return tuple(col for col, r in self.parts for _ in range(r))

    @property
    def length(self) -> int:
        return sum(r for _, r in self.parts)

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(r for _, r in self.parts)

    @property
    def mult_factorial(self) -> int:
        return prod(factorial(r) for _, r in self.parts)

    @property
    def part_factorial(self) -> int:
        return prod(index_factorial(col) ** r for col, r in self.parts)

    @property
    def coefficient(self) -> int:
        return index_factorial(self.target) // (self.mult_factorial * self.part_factorial)

    def sort_key(self):
        return (self.length, self.columns)

    def __str__(self):
        return "{" + ", ".join(f"({format_index(c)})^{r}" for c, r in self.parts) + "}"


@lru_cache(maxsize=512)
def _partitions(i: MultiIndex) -> tuple[MultiIndexPartition, ...]:
    cols = _below(i)
    out: list[MultiIndexPartition] = []
    chosen: list[MultiIndex] = []

    # next column >= previous one, so each multiset is produced exactly once
    def descend(residual: tuple[int, ...], start: int) -> None:
        if not any(residual):
            counts: dict[MultiIndex, int] = {}
            for c in chosen:
                counts[c] = counts.get(c, 0) + 1
            out.append(MultiIndexPartition(i, tuple(counts.items())))
            return
        for k in range(start, len(cols)):
            c = cols[k]
            if all(a <= b for a, b in zip(c, residual)):
                chosen.append(c)
                descend(tuple(b - a for a, b in zip(c, residual)), k)
                chosen.pop()

    descend(i, 0)
    out.sort(key=MultiIndexPartition.sort_key)
    return tuple(out)


def enumerate_partitions(i: Sequence[int]) -> list[MultiIndexPartition]:
    """Every partition of the multi-index ``i`` exactly once.

    Sorted by length, then lexicographically by the column list.

    >>> [str(p) for p in enumerate_partitions((2, 1))]
    ['{(2,1)^1}', '{(0,1)^1, (2,0)^1}', '{(1,0)^1, (1,1)^1}', '{(0,1)^1, (1,0)^2}']
    """
    i = multi_index(i)
    if not any(i):
        raise ValueError("no partitions of zero index")
    _check_caps(i)
    return list(_partitions(i))


def partition_coefficient(i: Sequence[int], lam: MultiIndexPartition) -> Fraction:
    """``i! / (m(lambda)! lambda!)``."""
    i = multi_index(i)
    if lam.target != i:
        raise ValueError(f"partition of {lam.target} does not partition {i}")
    lam.validate()
    return Fraction(index_factorial(i), lam.mult_factorial * lam.part_factorial)


@dataclass(frozen=True)
class IntegerPartition:
    target: int
    parts: tuple[int, ...]

    @property
    def multiplicities(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for p in self.parts:
            out[p] = out.get(p, 0) + 1
        return out

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def d_lambda(self) -> int:
        """Number of set partitions of a ``target``-set with these block sizes."""
        denom = 1
        for part, r in self.multiplicities.items():
            denom *= factorial(part) ** r * factorial(r)
        return factorial(self.target) // denom


def integer_partitions(n: int) -> list[IntegerPartition]:
    """Partitions of ``n`` with weakly decreasing parts."""
    if n < 1:
        raise ValueError("integer partitions need n >= 1")
    out = []

    def rec(rest, largest, acc):
        if rest == 0:
            out.append(IntegerPartition(n, tuple(acc)))
            return
        for p in range(min(rest, largest), 0, -1):
            acc.append(p)
            rec(rest - p, p, acc)
            acc.pop()

    rec(n, n, [])
    return out


# -- multinomials and compositions ------------------------------------------

def multinomial(i: Sequence[int], parts: Sequence[Sequence[int]]) -> Fraction:
    """``binom(i; i_1, ..., i_n)``, the product of per-coordinate multinomials."""
    i = multi_index(i)
    parts = [tuple(p) for p in parts]
    if any(len(p) != len(i) for p in parts):
        raise ValueError("parts must have the dimension of i")
    total = tuple(map(sum, zip(*parts))) if parts else (0,) * len(i)
    if total != i:
        raise ValueError(f"parts {parts} do not sum to {i}")
    out = 1
    for r, ir in enumerate(i):
        rest = ir
        for p in parts:
            out *= comb(rest, p[r])
            rest -= p[r]
    return Fraction(out)


def _int_compositions(k: int, n: int):
    if n == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in _int_compositions(k - first, n - 1):
            yield (first,) + rest


def compositions(i: Sequence[int], n: int) -> list[tuple[MultiIndex, ...]]:
    """Ordered ``n``-tuples of multi-indexes (zeros allowed) summing to ``i``."""
    i = multi_index(i)
    if n < 1:
        raise ValueError("compositions need n >= 1")
    per_coord = [list(_int_compositions(k, n)) for k in i]
    out = []
    for choice in itertools.product(*per_coord):
        out.append(tuple(tuple(choice[r][s] for r in range(len(i))) for s in range(n)))
    return out


@dataclass(frozen=True)
class AugmentedPartition:
    """An element ``(lambda_1 | ... | lambda_n)`` of the augmented set P_n(i).

    ``blocks[s]`` partitions ``slots[s]``; a zero slot has the empty block.
    """

    target: MultiIndex
    slots: tuple[MultiIndex, ...]
    blocks: tuple[tuple[tuple[MultiIndex, int], ...], ...]

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(sum(r for _, r in b) for b in self.blocks)

    @property
    def grouped(self) -> tuple[tuple[MultiIndex, int], ...]:
        """Distinct columns of the whole augmented matrix with total counts t_j."""
        counts: dict[MultiIndex, int] = {}
        for b in self.blocks:
            for col, r in b:
                counts[col] = counts.get(col, 0) + r
        return tuple(sorted(counts.items()))

    @property
    def labels(self) -> tuple[tuple[MultiIndex, tuple[int, ...]], ...]:
        """Each distinct column with the (1-based) slots it comes from."""
        return tuple(
            (col, tuple(s + 1 for s, b in enumerate(self.blocks) for c, r in b if c == col for _ in range(r)))
            for col, _ in self.grouped)

    @property
    def mult_factorial(self) -> int:
        return prod(factorial(r) for b in self.blocks for _, r in b)

    @property
    def part_factorial(self) -> int:
        return prod(index_factorial(col) ** r for b in self.blocks for col, r in b)

    @property
    def coefficient(self) -> Fraction:
        return Fraction(index_factorial(self.target), self.mult_factorial * self.part_factorial)


def augmented_partitions(i: Sequence[int], n: int) -> list[AugmentedPartition]:
    """The set P_n(i) of augmented partitions used by the multinomial expansion."""
    i = multi_index(i)
    if not any(i):
        raise ValueError("no partitions of zero index")
    _check_caps(i)
    out = []
    for slots in compositions(i, n):
        choices = [enumerate_partitions(s) if any(s) else [None] for s in slots]
        for combo in itertools.product(*choices):
            blocks = tuple(p.parts if p is not None else () for p in combo)
            out.append(AugmentedPartition(i, slots, blocks))
    return out

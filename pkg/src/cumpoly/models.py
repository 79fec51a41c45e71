"""Cumulant tables and moment computations for concrete models.

Gaussian vectors, Merton jump diffusion, the common-clock variance gamma
process, multivariate Hermite polynomials, natural exponential families,
Esscher-shifted cumulants and Sheffer-type coefficient sequences. All model
parameters are exact rationals.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .combinat import multi_index, unit
from .cumulant import (
    SequenceTable,
    convolve_cumulant_tables,
    moments_from_cumulants,
    multivariable_cumulant_polynomial,
    random_sum_cumulants,
)
from .ring import SparsePoly, as_fraction, format_rational
from .series import TruncatedSeries, series_shift

__all__ = [
    "GaussianSpec",
    "MertonSpec",
    "VGSpec",
    "gaussian_cumulants",
    "hermite",
    "merton_cumulants",
    "merton_moments",
    "nef_series",
    "sheffer_coefficients",
    "shifted_cumulants",
    "vg_cumulants",
    "vg_inner_cumulants",
    "vg_moments",
    "vg_outer_cumulants",
]


def _vec(v) -> tuple[Fraction, ...]:
    if isinstance(v, (int, str, Fraction)):
        v = [v]
    return tuple(as_fraction(x) for x in v)


def _mat(m, d: int) -> tuple[tuple[Fraction, ...], ...]:
    if isinstance(m, (int, str, Fraction)):
        m = [[m]]
    rows = tuple(tuple(as_fraction(x) for x in row) for row in m)
    if len(rows) != d or any(len(r) != d for r in rows):
        raise ValueError(f"covariance must be {d}x{d}")
    for r in range(d):
        for s in range(r):
            if rows[r][s] != rows[s][r]:
                raise ValueError("covariance matrix is not symmetric")
    return rows


def _jvec(v):
    return [format_rational(x) for x in v]


def _jmat(m):
    return [[format_rational(x) for x in row] for row in m]


@dataclass(frozen=True)
class GaussianSpec:
    mean: tuple
    cov: tuple

    def __post_init__(self):
        mean = _vec(self.mean)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", _mat(self.cov, len(mean)))

    @property
    def d(self) -> int:
        return len(self.mean)

    def to_json(self) -> dict:
        return {"mean": _jvec(self.mean), "cov": _jmat(self.cov)}

    @classmethod
    def from_json(cls, obj: Mapping) -> "GaussianSpec":
        return cls(obj["mean"], obj["cov"])


@dataclass(frozen=True)
class MertonSpec:
    """``X_t = m t + B_t + sum_{j <= N_t} Y_j`` with ``Y ~ N(jump.mean, jump.cov)``."""

    drift: tuple
    cov: tuple
    intensity: Fraction
    jump: GaussianSpec
    t: Fraction = Fraction(1)

    def __post_init__(self):
        drift = _vec(self.drift)
        object.__setattr__(self, "drift", drift)
        object.__setattr__(self, "cov", _mat(self.cov, len(drift)))
        object.__setattr__(self, "intensity", as_fraction(self.intensity))
        object.__setattr__(self, "t", as_fraction(self.t))
        if not isinstance(self.jump, GaussianSpec):
            object.__setattr__(self, "jump", GaussianSpec(*self.jump))
        if self.jump.d != len(drift):
            raise ValueError("jump law dimension differs from the drift dimension")
        if self.intensity < 0:
            raise ValueError("jump intensity must be >= 0")
        if self.t < 0:
            raise ValueError("horizon t must be >= 0")

    @property
    def d(self) -> int:
        return len(self.drift)

    def to_json(self) -> dict:
        return {"drift": _jvec(self.drift), "cov": _jmat(self.cov),
                "intensity": format_rational(self.intensity),
                "jump": self.jump.to_json(), "t": format_rational(self.t)}

    @classmethod
    def from_json(cls, obj: Mapping) -> "MertonSpec":
        return cls(obj["drift"], obj["cov"], obj["intensity"],
                   GaussianSpec.from_json(obj["jump"]), obj.get("t", 1))


@dataclass(frozen=True)
class VGSpec:
    """``X_t = theta G_t + B_{G_t}`` with ``G_t`` gamma of mean ``t`` and variance ``nu t``."""

    t: Fraction
    nu: Fraction
    theta: tuple
    cov: tuple

    def __post_init__(self):
        theta = _vec(self.theta)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "cov", _mat(self.cov, len(theta)))
        object.__setattr__(self, "t", as_fraction(self.t))
        object.__setattr__(self, "nu", as_fraction(self.nu))
        if self.nu <= 0:
            raise ValueError("nu must be > 0")
        if self.t < 0:
            raise ValueError("t must be >= 0")

    @property
    def d(self) -> int:
        return len(self.theta)

    def to_json(self) -> dict:
        return {"t": format_rational(self.t), "nu": format_rational(self.nu),
                "theta": _jvec(self.theta), "cov": _jmat(self.cov)}

    @classmethod
    def from_json(cls, obj: Mapping) -> "VGSpec":
        return cls(obj["t"], obj["nu"], obj["theta"], obj["cov"])


def gaussian_cumulants(spec: GaussianSpec, order: int) -> SequenceTable:
    """Cumulants of ``N(m, Sigma)``: means at unit indexes, covariances at degree 2."""
    d = spec.d
    entries = {}
    for r in range(d):
        entries[unit(d, r)] = spec.mean[r]
        if order >= 2:
            for s in range(r, d):
                i = tuple(a + b for a, b in zip(unit(d, r), unit(d, s)))
                entries[i] = spec.cov[r][s]
    if order < 1:
        entries = {}
    return SequenceTable(d, order, entries, kind="cumulant")


def merton_cumulants(spec: MertonSpec, order: int) -> SequenceTable:
    """Per-unit-time cumulants ``<m,z> + <z,z Sigma>/2 + lambda (M_Y(z) - 1)``."""
    diffusion = gaussian_cumulants(GaussianSpec(spec.drift, spec.cov), order)
    jump_moments = moments_from_cumulants(gaussian_cumulants(spec.jump, order))
    jumps = jump_moments.with_kind("cumulant").multiply(spec.intensity)
    return convolve_cumulant_tables([diffusion, jumps])


def merton_moments(spec: MertonSpec, order: int) -> SequenceTable:
    """Moments of ``X_t``: the cumulant polynomials of the unit-time law at ``y = t``."""
    return moments_from_cumulants(merton_cumulants(spec, order).multiply(spec.t))


def vg_outer_cumulants(t, nu, order: int) -> SequenceTable:
    """Cumulants ``(t/nu) (i-1)!`` of the gf ``1 - (t/nu) log(1 - z)``."""
    nu = as_fraction(nu)
    if nu == 0:
        raise ValueError("nu must be nonzero")
    a = as_fraction(t) / nu
    return SequenceTable.from_sequence([a * factorial(i - 1) for i in range(1, order + 1)])


def vg_inner_cumulants(spec: VGSpec, order: int) -> SequenceTable:
    nu = spec.nu
    return gaussian_cumulants(
        GaussianSpec([th * nu for th in spec.theta], [[s * nu for s in row] for row in spec.cov]),
        order)


def vg_cumulants(spec: VGSpec, order: int) -> SequenceTable:
    """Cumulants of ``X_t``: the outer log-series composed with the Gaussian cgf."""
    return random_sum_cumulants(vg_outer_cumulants(spec.t, spec.nu, order),
                                vg_inner_cumulants(spec, order))


def vg_moments(spec: VGSpec, order: int) -> SequenceTable:
    return moments_from_cumulants(vg_cumulants(spec, order))


def hermite(i, cov, names: Sequence[str] | None = None) -> SparsePoly:
    """Multivariate Hermite polynomial, the ``z^i/i!`` coefficient of
    ``exp(<y,z> - <z,z Sigma>/2)``.

    Built as the multivariable cumulant polynomial of a degenerate vector with
    cgf ``<y,z>`` and ``N(0, Sigma)``, evaluated at ``(1, -1)``.
    """
    i = multi_index(i)
    d = len(i)
    cov = _mat(cov, d)
    if names is None:
        names = ("y",) if d == 1 else tuple(f"y{r}" for r in range(1, d + 1))
    names = tuple(names)
    if len(names) != d:
        raise ValueError("need one variable name per coordinate")
    order = max(sum(i), 1)
    point = SequenceTable(d, order, {unit(d, r): SparsePoly.var(names[r]) for r in range(d)})
    gauss = gaussian_cumulants(GaussianSpec([0] * d, cov), order)
    p = multivariable_cumulant_polynomial(i, [point, gauss], names=("_u1", "_u2"))
    out = p.subs({"_u1": 1, "_u2": -1})
    return out.with_gens(names + tuple(g for g in out.gens if g not in names))


def nef_series(x, c: SequenceTable, order: int | None = None) -> TruncatedSeries:
    """Series in ``theta`` of ``F(theta) = exp(<theta, x> - K_X(theta))``.

    The exponent has unit-order coefficients ``x_r - c_{e_r}`` and higher
    coefficients ``-c_i``.
    """
    x = _vec(x)
    if len(x) != c.d:
        raise ValueError("x must have one entry per coordinate")
    c = c if order is None else c.truncate(order)
    d = c.d
    expo = c.map(lambda i, v: -v)
    entries = dict(expo.entries)
    for r in range(d):
        e = unit(d, r)
        entries[e] = x[r] - c[e]
    table = SequenceTable(d, c.order, entries)
    return moments_from_cumulants(table).to_series()


def shifted_cumulants(c: SequenceTable, theta, polynomial: bool = False,
                      theta_degree: int | None = None) -> SequenceTable:
    """Cumulants ``c_{i,theta}`` of the exponentially tilted law.

    They are the Taylor coefficients of ``K`` re-centred at ``theta``, so
    ``f(kappa_theta, z) = 1 + K(z + theta) - K(theta)``. Pass
    ``polynomial=True`` when every cumulant beyond the table order vanishes;
    otherwise the returned table is cut to the order through which it is
    complete to ``theta``-degree ``theta_degree`` (see ``series_shift``).
    """
    s = c.to_series()
    if polynomial:
        s = TruncatedSeries(s.d, s.order, s.coeffs, polynomial=True)
    res = series_shift(s, theta, theta_degree)
    return SequenceTable.from_series(res.series, kind="cumulant")


def sheffer_coefficients(c_tilde: SequenceTable, c: SequenceTable, order: int | None = None) -> SequenceTable:
    """Coefficients of ``g(theta) exp(K(theta))`` with ``g = exp(K~)``."""
    if c_tilde.d != c.d:
        raise ValueError("dimension mismatch")
    total = convolve_cumulant_tables([c_tilde, c])
    if order is not None:
        total.require(order)
        total = total.truncate(order)
    return moments_from_cumulants(total)

"""Seeded Monte Carlo moments for cross-checking the exact pipeline.

Samples are drawn in equal batches, each from its own Philox substream
spawned from one ``SeedSequence``, so results depend only on ``(seed, spec)``
and batches may run in any order or in parallel. Standard errors come from
batch means. This is the only module that uses floating point.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .combinat import format_index, indices_up_to, parse_index
from .cumulant import SequenceTable, moments_from_cumulants, random_sum_cumulants
from .models import GaussianSpec, MertonSpec, VGSpec, gaussian_cumulants, merton_moments, vg_moments
from .ring import as_fraction, format_rational
from .symfunc import trace_moments_from_matrix_cumulants

__all__ = [
    "CompareReport",
    "MatrixSpec",
    "MomentEstimate",
    "RandomSumSpec",
    "SampleSpec",
    "compare",
    "simulate_moments",
    "symbolic_moments",
    "validate",
]

N_BATCHES = 100


@dataclass(frozen=True)
class RandomSumSpec:
    """Compound Poisson sum ``Y_1 + ... + Y_N``, ``N ~ Poisson(intensity)``, Gaussian ``Y``."""

    intensity: Fraction
    summand: GaussianSpec

    def __post_init__(self):
        object.__setattr__(self, "intensity", as_fraction(self.intensity))
        if self.intensity < 0:
            raise ValueError("intensity must be >= 0")

    @property
    def d(self) -> int:
        return self.summand.d

    def to_json(self) -> dict:
        return {"intensity": format_rational(self.intensity), "summand": self.summand.to_json()}

    @classmethod
    def from_json(cls, obj) -> "RandomSumSpec":
        return cls(obj["intensity"], GaussianSpec.from_json(obj["summand"]))


@dataclass(frozen=True)
class MatrixSpec:
    """``Tr diag(X_1, ..., X_n)`` with i.i.d. univariate Gaussian eigenvalues."""

    n: int
    eigen: GaussianSpec

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.eigen.d != 1:
            raise ValueError("eigenvalue law must be univariate")

    @property
    def d(self) -> int:
        return 1

    def to_json(self) -> dict:
        return {"n": self.n, "eigen": self.eigen.to_json()}

    @classmethod
    def from_json(cls, obj) -> "MatrixSpec":
        return cls(int(obj["n"]), GaussianSpec.from_json(obj["eigen"]))


ModelSpec = Union[MertonSpec, VGSpec, RandomSumSpec, MatrixSpec]
MODELS = {"merton": MertonSpec, "vg": VGSpec, "randsum": RandomSumSpec, "matrix": MatrixSpec}


@dataclass(frozen=True)
class SampleSpec:
    model: ModelSpec
    n_samples: int
    seed: int
    max_order: int
    n_batches: int = N_BATCHES

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if self.max_order < 1:
            raise ValueError("max_order must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.n_batches < 2:
            raise ValueError("need at least two batches for a standard error")

    @property
    def model_name(self) -> str:
        return {v: k for k, v in MODELS.items()}[type(self.model)]

    def to_json(self) -> dict:
        return {"model": self.model_name, "params": self.model.to_json(),
                "n_samples": self.n_samples, "max_order": self.max_order,
                "n_batches": self.n_batches}


@dataclass(frozen=True)
class MomentEstimate:
    index: tuple
    estimate: float
    se: float
    n_samples: int


def _psd_factor(cov) -> np.ndarray:
    """``L`` with ``L @ L.T == cov``; works for singular PSD matrices."""
    a = np.array([[float(x) for x in row] for row in cov], dtype=float)
    w, v = np.linalg.eigh(a)
    tol = 1e-12 * max(1.0, float(np.abs(a).max(initial=0.0)))
    if w.min(initial=0.0) < -tol:
        raise ValueError("covariance matrix is not positive semidefinite")
    return v * np.sqrt(np.clip(w, 0.0, None))


def _floats(v) -> np.ndarray:
    return np.array([float(x) for x in v], dtype=float)


def _sampler(model: ModelSpec):
    if isinstance(model, MertonSpec):
        t = float(model.t)
        lam = float(model.intensity)
        drift, L = _floats(model.drift), _psd_factor(model.cov)
        jm, JL = _floats(model.jump.mean), _psd_factor(model.jump.cov)

        def draw(rng, size):
            d = len(drift)
            n = rng.poisson(lam * t, size=size).astype(float)[:, None]
            x = drift * t + np.sqrt(t) * rng.standard_normal((size, d)) @ L.T
            return x + n * jm + np.sqrt(n) * (rng.standard_normal((size, d)) @ JL.T)
        return draw
    if isinstance(model, VGSpec):
        shape, scale = float(model.t / model.nu), float(model.nu)
        theta, L = _floats(model.theta), _psd_factor(model.cov)

        def draw(rng, size):
            g = rng.gamma(shape, scale, size=size)[:, None]
            return theta * g + np.sqrt(g) * (rng.standard_normal((size, len(theta))) @ L.T)
        return draw
    if isinstance(model, RandomSumSpec):
        lam = float(model.intensity)
        mean, L = _floats(model.summand.mean), _psd_factor(model.summand.cov)

        def draw(rng, size):
            n = rng.poisson(lam, size=size).astype(float)[:, None]
            return n * mean + np.sqrt(n) * (rng.standard_normal((size, len(mean))) @ L.T)
        return draw
    if isinstance(model, MatrixSpec):
        mu = float(model.eigen.mean[0])
        sd = float(_psd_factor(model.eigen.cov)[0, 0])

        def draw(rng, size):
            eig = mu + sd * rng.standard_normal((size, model.n))
            return eig.sum(axis=1)[:, None]
        return draw
    raise TypeError(f"unsupported model spec {type(model).__name__}")


def _batch_sizes(total: int, batches: int) -> list[int]:
    batches = min(batches, total)
    base, extra = divmod(total, batches)
    return [base + (1 if b < extra else 0) for b in range(batches)]


def simulate_moments(spec: SampleSpec, workers: int = 1) -> list[MomentEstimate]:
    """Empirical raw mixed moments of every order ``1..max_order`` with batch-means SEs."""
    draw = _sampler(spec.model)
    d = spec.model.d
    indices = indices_up_to(d, spec.max_order, start=1)
    sizes = _batch_sizes(spec.n_samples, spec.n_batches)
    if len(sizes) < 2:
        raise ValueError("need at least two samples for a standard error")
    streams = np.random.SeedSequence(spec.seed).spawn(len(sizes))
    expo = np.array(indices, dtype=float)

    def run(b: int) -> np.ndarray:
        rng = np.random.Generator(np.random.Philox(streams[b]))
        x = draw(rng, sizes[b])
        # column k holds prod_r x_r^{i_r} for the k-th index
        vals = np.prod(x[:, None, :] ** expo[None, :, :], axis=2)
        return vals.mean(axis=0)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            means = list(pool.map(run, range(len(sizes))))
    else:
        means = [run(b) for b in range(len(sizes))]
    means = np.array(means)
    w = np.array(sizes, dtype=float) / spec.n_samples
    est = w @ means
    se = means.std(axis=0, ddof=1) / np.sqrt(len(sizes))
    return [MomentEstimate(i, float(e), float(s), spec.n_samples)
            for i, e, s in zip(indices, est, se)]


def symbolic_moments(model: ModelSpec, order: int) -> SequenceTable:
    """Exact moment table matching what :func:`simulate_moments` estimates."""
    if isinstance(model, MertonSpec):
        return merton_moments(model, order)
    if isinstance(model, VGSpec):
        return vg_moments(model, order)
    if isinstance(model, RandomSumSpec):
        poisson = SequenceTable.from_sequence([model.intensity] * order)
        return moments_from_cumulants(random_sum_cumulants(poisson, gaussian_cumulants(model.summand, order)))
    if isinstance(model, MatrixSpec):
        tm = trace_moments_from_matrix_cumulants(gaussian_cumulants(model.eigen, order), model.n, order)
        return SequenceTable.from_sequence(list(tm.moments), kind="moment")
    raise TypeError(f"unsupported model spec {type(model).__name__}")


@dataclass
class CompareReport:
    k: float
    results: list = field(default_factory=list)
    spec: dict | None = None
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return all(r["pass"] for r in self.results)

    def failures(self) -> list:
        return [r for r in self.results if not r["pass"]]

    def to_json(self) -> dict:
        return {"spec": self.spec, "seed": self.seed, "k": self.k, "results": self.results}


def compare(symbolic: SequenceTable, empirical: Sequence[MomentEstimate], k: float = 4.0) -> CompareReport:
    """Pass/fail per index at ``|symbolic - estimate| <= k * se``."""
    if k <= 0:
        raise ValueError("k must be positive")
    if not empirical:
        raise ValueError("no estimates to compare")
    seen = {tuple(e.index) for e in empirical}
    top = max(sum(i) for i in seen)
    for i in indices_up_to(symbolic.d, min(top, symbolic.order), start=1):
        if i not in seen:
            raise KeyError(f"no estimate for index {format_index(i)}")
    report = CompareReport(k=k)
    for e in empirical:
        exact = symbolic[tuple(e.index)]
        sym = float(exact)
        # slack for float rounding when the estimator has zero spread
        slack = 1e-12 * max(1.0, abs(sym))
        report.results.append({
            "index": format_index(e.index),
            "symbolic": format_rational(exact),
            "estimate": e.estimate,
            "se": e.se,
            "pass": bool(abs(sym - e.estimate) <= k * e.se + slack),
        })
    return report


def validate(spec: SampleSpec, k: float = 4.0, workers: int = 1) -> CompareReport:
    """Simulate ``spec`` and compare against the exact moments of the same model."""
    report = compare(symbolic_moments(spec.model, spec.max_order), simulate_moments(spec, workers), k)
    report.spec = spec.to_json()
    report.seed = spec.seed
    return report


def estimates_from_json(obj) -> list[MomentEstimate]:
    return [MomentEstimate(parse_index(r["index"]), float(r["estimate"]), float(r["se"]),
                           int(r.get("n_samples", 0))) for r in obj]

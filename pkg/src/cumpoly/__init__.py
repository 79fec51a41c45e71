"""Exact multivariate cumulant polynomials and their applications.

Everything in the exact layer works over ``fractions.Fraction`` and sparse
rational polynomials; only :mod:`cumpoly.mc` uses floating point.
"""
from .combinat import (
    AugmentedPartition,
    Caps,
    IntegerPartition,
    MultiIndexPartition,
    SizeCapError,
    augmented_partitions,
    caps,
    compositions,
    enumerate_partitions,
    integer_partitions,
    multinomial,
    partition_coefficient,
    set_caps,
)
from .cumulant import (
    CumulantPolynomial,
    SequenceTable,
    convolve_cumulant_tables,
    correlated_substitution,
    cumulant_poly_augmented,
    cumulant_poly_multinomial,
    cumulant_polynomial,
    cumulants_from_moments,
    moments_from_cumulants,
    multivariable_cumulant_polynomial,
    random_sum_cumulants,
    scale_cumulants,
)
from .models import (
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
)
from .ring import SparsePoly, poly_eval, umbral_substitute_power
from .series import (
    TruncatedSeries,
    compose_multi_outer,
    compose_uni_outer,
    series_exp,
    series_log,
    series_mul,
    series_shift,
)
from .symfunc import (
    elementary_symmetric,
    matrix_cumulants_from_trace_moments,
    sampling_invariance_check,
    trace_moments_from_matrix_cumulants,
    weighted_sum_moment,
)

__all__ = [
    "AugmentedPartition",
    "Caps",
    "CumulantPolynomial",
    "GaussianSpec",
    "IntegerPartition",
    "MertonSpec",
    "MultiIndexPartition",
    "SequenceTable",
    "SizeCapError",
    "SparsePoly",
    "TruncatedSeries",
    "VGSpec",
    "augmented_partitions",
    "caps",
    "compose_multi_outer",
    "compose_uni_outer",
    "compositions",
    "convolve_cumulant_tables",
    "correlated_substitution",
    "cumulant_poly_augmented",
    "cumulant_poly_multinomial",
    "cumulant_polynomial",
    "cumulants_from_moments",
    "elementary_symmetric",
    "enumerate_partitions",
    "gaussian_cumulants",
    "hermite",
    "integer_partitions",
    "matrix_cumulants_from_trace_moments",
    "merton_cumulants",
    "merton_moments",
    "moments_from_cumulants",
    "multinomial",
    "multivariable_cumulant_polynomial",
    "nef_series",
    "partition_coefficient",
    "poly_eval",
    "random_sum_cumulants",
    "sampling_invariance_check",
    "scale_cumulants",
    "series_exp",
    "series_log",
    "series_mul",
    "series_shift",
    "set_caps",
    "sheffer_coefficients",
    "shifted_cumulants",
    "trace_moments_from_matrix_cumulants",
    "umbral_substitute_power",
    "vg_cumulants",
    "vg_moments",
    "weighted_sum_moment",
]

__version__ = "0.1.0"

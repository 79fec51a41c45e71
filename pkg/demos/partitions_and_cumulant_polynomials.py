"""Partitions of a multi-index and the cumulant polynomials built from them.

Run with ``python3 demos/partitions_and_cumulant_polynomials.py``.
"""
from fractions import Fraction

from cumpoly import (
    SequenceTable,
    cumulant_polynomial,
    cumulants_from_moments,
    enumerate_partitions,
    moments_from_cumulants,
    random_sum_cumulants,
)

# The four partitions of (2,1), in canonical order, with their coefficients.
print("partitions of (2,1)")
for lam in enumerate_partitions((2, 1)):
    print("  ", lam, " coefficient", lam.coefficient)

# A symbolic bivariate cumulant table; C_i(y) is a polynomial in y and the c's.
c = SequenceTable.symbolic(2, 3)
print("\nC_(2,1)(y) =", cumulant_polynomial((2, 1), c).value)

# Unit cumulants are Poisson(1); its moments are the Bell numbers.
poisson = SequenceTable.from_sequence([1] * 6)
m = moments_from_cumulants(poisson)
print("\nPoisson(1) moments:", [int(m[k]) for k in range(1, 7)])
assert cumulants_from_moments(m) == poisson

# Evaluating at y = n gives the moments of an n-fold sum of i.i.d. copies.
x = SequenceTable.from_sequence([Fraction(1, 2), Fraction(3, 4), Fraction(-1, 5)])
cp = cumulant_polynomial((3,), x)
print("\nthird moment of X1 + X2 + X3:", cp(3))

# Random sum with a Poisson(2) count: cumulants are 2 * (moments of X).
h = random_sum_cumulants(SequenceTable.from_sequence([2] * 3), x)
print("compound Poisson cumulants:", [str(h[k]) for k in (1, 2, 3)])

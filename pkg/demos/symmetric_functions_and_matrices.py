"""Elementary symmetric polynomials and trace moments of random matrices.

Run with ``python3 demos/symmetric_functions_and_matrices.py``.
"""
from fractions import Fraction

from cumpoly import SequenceTable
from cumpoly.symfunc import (
    elementary_symmetric_by_cumulants,
    elementary_symmetric_by_product,
    inverse_bell_cumulants,
    matrix_cumulants_from_trace_moments,
    sampling_invariance_check,
    trace_moments_from_matrix_cumulants,
)

# The cumulants whose moments are 1, 0, 0, ...: note the second one is negative,
# so no real random variable has them.
b = inverse_bell_cumulants(6)
print("inverse-Bell cumulants:", [str(b[k]) for k in range(1, 7)])

e_prod = elementary_symmetric_by_product(3, 4)
e_cum = elementary_symmetric_by_cumulants(3, 4)
assert e_prod == e_cum
for i, p in enumerate(e_prod):
    print(f"  i! e_{i}(y1, y2, y3) = {p}")

# Trace moments of a diagonal matrix with i.i.d. entries, and back again.
cA = SequenceTable.from_sequence([Fraction(1, 2), 1, 0, Fraction(-1, 3)])
tm = trace_moments_from_matrix_cumulants(cA, 4)
print("\nE[Tr(A)^k] for n = 4:", [str(x) for x in tm.moments])
assert matrix_cumulants_from_trace_moments(tm) == cA

# Matrix cumulants do not change when only m of the n diagonal entries are kept.
report = sampling_invariance_check(cA, 4, 2)
print("sampling invariance (n=4, m=2):", "holds" if report.passed else "fails")

"""Numerical tolerances shared across the package."""

#: Hermiticity / idempotence / unit-norm checks at construction.
STRUCTURE_TOL = 1e-12

#: Algebraic parameter solves (forward formula must reproduce the target).
FIT_TOL = 1e-9

#: Born-rule readbacks of explicitly constructed vectors.
BORN_TOL = 1e-10

#: Default tolerance for the classicality conditions.
CLASSICAL_TOL = 1e-6

#: Comparing against published values that were rounded to two digits.
PUBLISHED_TOL = 0.05

#: m^2 + n^2 = 1 check for externally supplied parameters rounded to two
#: digits (0.45^2 + 0.9^2 = 1.0125 must pass).
EXTERNAL_NORM_TOL = 2e-2

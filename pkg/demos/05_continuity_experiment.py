"""Continuity of the maximal operator in BV norm, observed at desk scale.

Fix f and a perturbation g, and drive f_j = f + g/j for j = 1, 2, 4, ...
Both the BV distance between the maximal functions and the gap between
their total variations shrink with the perturbation.  The report prints
exact rationals and certified enclosures only.
"""

from fractions import Fraction

from maxbv.stepfn import StepFunction, bv_norm, combine
from maxbv.verify import continuity_experiment, random_stepfn

f = random_stepfn(48)
g = random_stepfn(41)
norm = bv_norm(g)
if norm:
    g = combine(g, StepFunction.constant(0), Fraction(1, 8) / norm, 0)

scales = [Fraction(1, 2**j) for j in range(15)]
report = continuity_experiment(f, g, scales, precision=Fraction(1, 10**9))
print(report.to_tsv())
print("verdict:", "PASS" if report.passed else "FAIL")

"""Pointwise maximal-function evaluation with witnesses.

The uncentered maximal function takes the supremum of averages of |f| over
all intervals containing the query point.  For a step function that
supremum is attained on a finite candidate family (endpoints at breakpoints
or at the query point) or in one of four limit regimes, so the value comes
out as an exact rational together with the interval realizing it.
"""

from fractions import Fraction

from maxbv.maximal import candidate_set, maximal_limit_at_infinity, maximal_value
from maxbv.stepfn import StepFunction, combine

chi = StepFunction.indicator(0, 1)

for x in (Fraction(1, 2), 2, -3):
    result = maximal_value(chi, x)
    print(f"maximal(indicator)({x}) = {result.value}  witness {result.witness}")

print("\ncandidates at x = 2:")
for c in sorted(candidate_set(chi, 2), key=lambda c: c.value, reverse=True)[:4]:
    print("  ", c.value, c)

# Between two bumps the best interval reaches into a neighbour; ties break
# deterministically (finite before limits, shorter before longer, leftmost).
two_bump = combine(
    StepFunction.indicator(0, 1, closed=False),
    StepFunction.indicator(2, 3, closed=False),
)
mid = maximal_value(two_bump, Fraction(3, 2))
print("\nbetween the bumps:", mid.value, "witness", mid.witness, "one-sided", mid.one_sided_witness)

# Tails: the maximal function tends to the larger tail modulus of |f|.
left_heavy = StepFunction(1, (0,), (0,), (0,))
print("\nlimit at infinity for a left-heavy tail:", maximal_limit_at_infinity(left_heavy))
print("value far right:", maximal_value(left_heavy, 10**6).value, "(witness", str(maximal_value(left_heavy, 10**6).witness) + ")")

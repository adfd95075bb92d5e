"""Step functions: construction, evaluation, variation, and the modulus identity.

Every number below is an exact rational; nothing is floated.
"""

from fractions import Fraction

from maxbv.stepfn import (
    StepFunction,
    bv_norm,
    combine,
    jump_records,
    modulus,
    modulus_defect,
    serialize,
    variation_on,
)

# The indicator of [0, 1]: value 1 at both breakpoints, 1 between them.
chi = StepFunction.indicator(0, 1)
print("f = indicator of [0,1]")
print("  f(0-) =", chi.left_limit(0), "  f(0) =", chi.value(0), "  f(1/2) =", chi.value(Fraction(1, 2)))
print("  Var(f) =", variation_on(chi), "  bv_norm(f) =", bv_norm(chi))

# Variation over an open window excludes breakpoints sitting on its boundary.
print("  Var over (0,1) =", variation_on(chi, 0, 1), " (boundary jumps excluded)")

# Linear combinations merge breakpoints and canonicalize.
two_bump = combine(
    StepFunction.indicator(0, 1, closed=False),
    StepFunction.indicator(2, 3, closed=False),
)
print("\ntwo disjoint bumps:", len(two_bump.breakpoints), "breakpoints, Var =", variation_on(two_bump))

# A sign flip: f jumps from 1 to -1 across 0, so |f| is constant.
flip = StepFunction(1, (0,), (1,), (-1,))
print("\nsign flip: Var(f) =", variation_on(flip), " Var(|f|) =", variation_on(modulus(flip)))
print("  jump records:", [(r.location, r.right_jump, r.modulus_right_jump) for r in jump_records(flip)])
print("  defect =", modulus_defect(flip), " equals Var(f) - Var(|f|) exactly")

# The serialization format round-trips canonically.
print("\nserialized form:")
print(serialize(flip))

"""Shared helpers: small random inputs and independent brute-force oracles.

The oracles here deliberately avoid the closed-form shortcuts used by the
library: variation is estimated by sweeping ever finer partitions, and
maximal values by maximizing averages over sampled intervals.
"""

import random
from fractions import Fraction

from maxbv.stepfn import AbsIntegral, StepFunction, variation_on_partition


def rand_fraction(rng, bound=3, denom=4):
    d = rng.randint(1, denom)
    return Fraction(rng.randint(-bound * d, bound * d), d)


def rand_stepfn(rng, n_max=5, bound=3, denom=4, span=8):
    n = rng.randint(0, n_max)
    points = set()
    while len(points) < n:
        d = rng.randint(1, denom)
        points.add(Fraction(rng.randint(-span * d, span * d), d))
    bps = sorted(points)
    tail = rand_fraction(rng, bound, denom)
    cons = [rand_fraction(rng, bound, denom) for _ in range(n)]
    vals = []
    for k in range(n):
        pick = rng.random()
        left = tail if k == 0 else cons[k - 1]
        if pick < 0.35:
            vals.append(left)
        elif pick < 0.7:
            vals.append(cons[k])
        else:
            vals.append(rand_fraction(rng, bound, denom))
    return StepFunction(tail, tuple(bps), tuple(vals), tuple(cons))


def sweep_variation(f, a, b, rounds=4):
    """Partition-refinement lower bounds for Var_(a,b): nondecreasing in the
    round count, converging to the true value for step functions."""
    assert a < b
    best = Fraction(0)
    values = []
    for r in range(1, rounds + 1):
        cells = 40 * r
        pts = [a + (b - a) * Fraction(i, cells + 1) for i in range(1, cells + 1)]
        for x in f.breakpoints:
            if a < x < b:
                gap = min(x - a, b - x) / (3 * r)
                pts.extend([x - gap, x, x + gap])
        pts = sorted(set(pts))
        est = variation_on_partition(f, pts)
        assert est >= best
        best = est
        values.append(est)
    return values


def interval_average_oracle(f, x, rng, count=300, span=12):
    """Best average of |f| over sampled finite intervals containing x, plus
    the four limit candidates.  Always a lower bound for the maximal value."""
    integ = AbsIntegral(f)
    consts = f.constants
    best = max(
        abs(consts[0]),
        abs(consts[-1]),
        abs(f.left_limit(x)),
        abs(f.right_limit(x)),
    )
    for _ in range(count):
        a = x - Fraction(rng.randint(0, span * 64), 64)
        b = x + Fraction(rng.randint(0, span * 64), 64)
        if a < b:
            best = max(best, integ.average(a, b))
    return best

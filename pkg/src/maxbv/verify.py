"""Independent oracles, randomized corpora, and experiment harnesses.

Everything here is deliberately redundant with the exact engines: the
interval oracle maximizes averages over sampled grids without knowing that
optima sit on breakpoints, the invariant suite re-checks every structural
invariant over random corpora with shrinking of failures, the continuity
experiment drives perturbations to zero and watches BV distances of maximal
functions, and the divergence construction reproduces, exactly, a family
where the perturbation's growing support keeps those distances away from
zero even though the perturbations themselves vanish in BV norm.

The divergence family is truncated to finitely many humps (K of them, with
K at least n+1).  Dropping humps beyond the perturbation's support only
removes candidate mass, so every asserted value is unchanged: the left tail
still forces the maximal function of the base function to be identically 1,
hump midpoints still average to 1 + 1/n, and gap midpoints stay at most 1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from . import envelope as env
from . import maximal as mx
from . import stepfn as sf
from .envelope import MaximalProfile, VariationEnclosure
from .exact import AlgebraicValue, Rat, compare, compare_with_rat, format_rat, rat, separate
from .stepfn import AbsIntegral, Partition, StepFunction


# --- randomized corpus -----------------------------------------------------


def random_stepfn(seed: int, n_max: int = 6, value_bound: int = 3, denom_bound: int = 4,
                  span: int = 8) -> StepFunction:
    """Deterministic pseudo-random step function with bounded-height data.

    Signed values and occasional free-standing point values are drawn so
    that sign-crossing and point-jump behaviour both appear across a seed
    sweep.
    """
    if n_max < 0 or value_bound <= 0 or denom_bound <= 0:
        raise ValueError("bounds must be positive")
    rng = random.Random(seed)
    n = rng.randint(0, n_max)
    points = set()
    while len(points) < n:
        den = rng.randint(1, denom_bound)
        points.add(Fraction(rng.randint(-span * den, span * den), den))
    breakpoints = tuple(sorted(points))

    def draw_value():
        den = rng.randint(1, denom_bound)
        return Fraction(rng.randint(-value_bound * den, value_bound * den), den)

    tail = draw_value()
    constants = [draw_value() for _ in range(n)]
    values = []
    for k in range(n):
        pick = rng.random()
        left = tail if k == 0 else constants[k - 1]
        if pick < 0.35:
            values.append(left)
        elif pick < 0.7:
            values.append(constants[k])
        else:
            values.append(draw_value())
    return StepFunction(tail, breakpoints, tuple(values), tuple(constants))


def sample_points(f: StepFunction, rng: random.Random, count: int = 20,
                  span: int = 12) -> List[Rat]:
    """Query points mixing breakpoints, near-breakpoint offsets and randoms."""
    points = set(f.breakpoints)
    for x in f.breakpoints:
        points.add(x + Fraction(1, 17))
        points.add(x - Fraction(1, 19))
    while len(points) < count + 3 * f.n:
        points.add(Fraction(rng.randint(-span * 8, span * 8), 8))
    return sorted(points)


# --- interval oracle -------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    """Sampling plan for the interval oracle.

    ``endpoint_count`` controls a uniform endpoint grid of that many steps
    across [x - span, x + span], shifted by ``offset`` grid steps so that
    endpoints avoid breakpoints; ``random_count`` adds seeded random
    intervals, and ``zoom_rounds`` refines locally around the best pair
    found.  Everything is deterministic given the seed.
    """

    endpoint_count: int = 24
    span: Rat = Fraction(16)
    random_count: int = 120
    seed: int = 0
    zoom_rounds: int = 2
    offset: Rat = Fraction(1, 997)


def oracle_maximal(f: StepFunction, x, grid: GridSpec) -> Rat:
    """Best average of |f| over sampled intervals containing x, plus the four
    limit candidates.  A guaranteed lower bound for the maximal value."""
    x = rat(x)
    integ = AbsIntegral(f)
    consts = f.constants
    best = max(abs(consts[0]), abs(consts[-1]), abs(f.left_limit(x)), abs(f.right_limit(x)))
    best_finite: Optional[Tuple[Rat, Rat]] = None
    best_finite_value = None

    def consider(a: Rat, b: Rat):
        nonlocal best, best_finite, best_finite_value
        if a < b and a <= x <= b:
            value = integ.average(a, b)
            if best_finite_value is None or value > best_finite_value:
                best_finite_value = value
                best_finite = (a, b)
            if value > best:
                best = value

    span = rat(grid.span)
    step = None
    if grid.endpoint_count > 0:
        step = 2 * span / grid.endpoint_count
        shift = step * grid.offset
        points = [x - span + i * step + shift for i in range(grid.endpoint_count + 1)]
        lefts = [p for p in points if p <= x] + [x]
        rights = [p for p in points if p >= x] + [x]
        for a in lefts:
            for b in rights:
                consider(a, b)
    rng = random.Random(grid.seed)
    for _ in range(grid.random_count):
        a = x - span * Fraction(rng.randint(0, 4096), 4096)
        b = x + span * Fraction(rng.randint(0, 4096), 4096)
        consider(a, b)
    spacing = step if step is not None else span / 8
    for _ in range(grid.zoom_rounds):
        if best_finite is None:
            break
        spacing = spacing / 4
        a0, b0 = best_finite
        for i in range(-5, 6):
            for j in range(-5, 6):
                consider(a0 + i * spacing, b0 + j * spacing)
    return best


# --- alternating partitions ------------------------------------------------


def _alternating_subsequence(points: Sequence[Rat], values: Sequence[Rat]) -> List[Rat]:
    """Thread the local extrema: the kept points alternate strictly and keep
    the full partition variation of the input sample."""
    pts: List[Rat] = []
    vals: List[Rat] = []
    for p, v in zip(points, values):
        if vals and v == vals[-1]:
            continue
        pts.append(p)
        vals.append(v)
    if len(pts) < 2:
        return list(points[:1]) + [points[-1]] if len(points) >= 2 else list(points)
    keep = [0]
    for i in range(1, len(pts) - 1):
        if (vals[i] - vals[i - 1] > 0) != (vals[i + 1] - vals[i] > 0):
            keep.append(i)
    keep.append(len(pts) - 1)
    return [pts[i] for i in keep]


def alternating_partition(target: Union[StepFunction, MaximalProfile], a, b, eps) -> Partition:
    """A partition inside (a, b) that is either two points or alternates
    against the target, with partition variation within eps of the true
    variation over (a, b)."""
    a, b, eps = rat(a), rat(b), rat(eps)
    if not a < b:
        raise ValueError("alternating_partition needs a < b")
    if eps <= 0:
        raise ValueError("eps must be positive")

    if isinstance(target, StepFunction):
        inner = [x for x in target.breakpoints if a < x < b]
        if not inner:
            third = (b - a) / 3
            return Partition((a + third, b - third))
        gaps = [second - first for first, second in zip(inner, inner[1:])]
        gaps.append(inner[0] - a)
        gaps.append(b - inner[-1])
        delta = min(gaps) / 4
        points: List[Rat] = []
        for x in inner:
            points.extend((x - delta, x, x + delta))
        points = sorted(set(points))
        values = [target.value(p) for p in points]
        chosen = _alternating_subsequence(points, values)
        if len(chosen) < 2:
            chosen = [points[0], points[-1]]
        return Partition(tuple(chosen))

    profile = target
    junctions = [
        j
        for j in profile.junctions()
        if compare_with_rat(j, a) > 0 and compare_with_rat(j, b) < 0
    ]
    tolerance = eps / (4 * (len(junctions) + 2))

    # Refine until consecutive brackets (including the endpoints) are disjoint;
    # nesting keeps earlier separations valid while later ones are enforced.
    chain = [AlgebraicValue.from_rat(a), *junctions, AlgebraicValue.from_rat(b)]
    for i in range(len(chain) - 1):
        chain[i], chain[i + 1] = separate(chain[i], chain[i + 1])
    junctions = chain[1:-1]

    proxies: List[Rat] = []
    for j in junctions:
        proxy = j.hi
        while True:
            piece = profile.piece_containing(proxy)
            try:
                drift = abs(piece.value_at(j.hi) - piece.value_at(j.lo))
            except ZeroDivisionError:
                drift = None
            if drift is not None and drift <= tolerance:
                break
            j = j.refine_below(j.width / 4)
            proxy = j.hi
        proxies.append(proxy)

    def edge_offset(base: Rat, inward: int, barrier: Rat) -> Rat:
        eta = (b - a) / 8
        while not (a < base + inward * eta < b) or not (
            (base + inward * eta - barrier) * inward < 0
        ):
            eta /= 2
        while abs(profile.value(base + inward * eta) - profile.value(base)) > tolerance:
            eta /= 2
        return base + inward * eta

    start = edge_offset(a, +1, proxies[0] if proxies else b)
    end = edge_offset(b, -1, proxies[-1] if proxies else start)
    points = [start, *proxies, end]
    values = [profile.value(p) for p in points]
    chosen = _alternating_subsequence(points, values)
    if len(chosen) < 2:
        chosen = [points[0], points[-1]]
    return Partition(tuple(chosen))


# --- divergence construction -----------------------------------------------


def counterexample_functions(n: int, K: int) -> Tuple[StepFunction, StepFunction]:
    """Base function (left tail 1, K humps of height 1 on (4k-2, 4k)) and its
    perturbed companion carrying an extra 1/n on (0, 4n+2)."""
    breakpoints: List[Rat] = [Fraction(0)]
    constants: List[Rat] = [Fraction(0)]
    for k in range(1, K + 1):
        breakpoints.extend((Fraction(4 * k - 2), Fraction(4 * k)))
        constants.extend((Fraction(1), Fraction(0)))
    values = tuple(Fraction(0) for _ in breakpoints)
    base = StepFunction(1, tuple(breakpoints), values, tuple(constants))
    bump = StepFunction.indicator(0, 4 * n + 2, closed=False)
    perturbed = sf.combine(base, bump, 1, Fraction(1, n))
    return base, perturbed


@dataclass(frozen=True)
class CounterexampleReport:
    n: int
    K: int
    norm_delta: Rat
    norm_ok: bool
    base_maximal_ok: bool
    bump_ok: bool
    gap_ok: bool
    partition_variation: Rat
    partition_ok: bool

    @property
    def passed(self) -> bool:
        return self.norm_ok and self.base_maximal_ok and self.bump_ok and self.gap_ok and self.partition_ok

    def lines(self) -> List[str]:
        def verdict(ok: bool) -> str:
            return "PASS" if ok else "FAIL"

        return [
            f"n={self.n} K={self.K}",
            f"bv_norm(perturbed - base) = {format_rat(self.norm_delta)} == 2/{self.n} : {verdict(self.norm_ok)}",
            f"maximal(base) == 1 at 50 sample points : {verdict(self.base_maximal_ok)}",
            f"maximal(perturbed)(4k-1) == 1 + 1/{self.n} for k <= {self.n} : {verdict(self.bump_ok)}",
            f"maximal(perturbed)(4k+1) <= 1 for k <= {self.n} : {verdict(self.gap_ok)}",
            f"Var(P_{self.n}) >= 2 : {verdict(self.partition_ok)}",
        ]

    def to_text(self) -> str:
        return "\n".join(self.lines()) + "\n"


def counterexample(n: int, K: Optional[int] = None, sample_count: int = 50) -> CounterexampleReport:
    """Exact reproduction of the divergence family at truncation K >= n+1."""
    if n < 3:
        raise ValueError("the gap bound max{1, 2/3 + 1/n} = 1 needs n >= 3")
    if K is None:
        K = n + 2
    if K < n + 1:
        raise ValueError("truncation K must be at least n + 1")
    base, perturbed = counterexample_functions(n, K)

    norm_delta = sf.bv_norm(sf.combine(perturbed, base, 1, -1))
    norm_ok = norm_delta == Fraction(2, n)

    hi = Fraction(4 * K + 10)
    lo = Fraction(-10)
    samples = [lo + (hi - lo) * Fraction(i, sample_count - 1) for i in range(sample_count)]
    base_maximal_ok = all(mx.maximal_value(base, x).value == 1 for x in samples)

    bump_ok = all(
        mx.maximal_value(perturbed, 4 * k - 1).value == 1 + Fraction(1, n)
        for k in range(1, n + 1)
    )
    gap_ok = all(
        mx.maximal_value(perturbed, 4 * k + 1).value <= 1 for k in range(0, n + 1)
    )

    partition = [Fraction(2 * i + 1) for i in range(2 * n + 1)]  # 1, 3, ..., 4n+1
    differences = [
        mx.maximal_value(perturbed, p).value - mx.maximal_value(base, p).value
        for p in partition
    ]
    partition_variation = sum(
        (abs(differences[i + 1] - differences[i]) for i in range(len(differences) - 1)),
        Fraction(0),
    )
    partition_ok = partition_variation >= 2

    return CounterexampleReport(
        n, K, norm_delta, norm_ok, base_maximal_ok, bump_ok, gap_ok,
        partition_variation, partition_ok,
    )


# --- continuity experiment -------------------------------------------------


@dataclass(frozen=True)
class ExperimentRow:
    index: int
    scale: Rat
    delta_norm: Rat
    distance: VariationEnclosure
    variation: VariationEnclosure


@dataclass(frozen=True)
class ContinuityReport:
    """Per-scale record of BV distances and maximal variations, with verdicts.

    The pass thresholds are calibration knobs, not theorems: the continuity
    being exercised is qualitative, so the harness pins down configured
    scales and tolerances to emit a binary verdict.
    """

    rows: Tuple[ExperimentRow, ...]
    base_variation: VariationEnclosure
    threshold: Rat
    variation_gap: Rat
    tail_count: int

    @property
    def final_distance_ok(self) -> bool:
        return self.rows[-1].distance.hi <= self.threshold

    @property
    def distance_eventually_nonincreasing(self) -> bool:
        tail = self.rows[-self.tail_count:]
        return all(
            second.distance.lo <= first.distance.hi
            for first, second in zip(tail, tail[1:])
        )

    @property
    def variation_converged(self) -> bool:
        # Enclosures may be exact (width zero), so "intersect" is taken at the
        # run's tolerance scale: the gap between the intervals must fit inside
        # the configured variation gap, as must the midpoint discrepancy.
        tail = self.rows[-self.tail_count:]
        return all(
            row.variation.gap_to(self.base_variation) <= self.variation_gap
            and abs(row.variation.midpoint - self.base_variation.midpoint) <= self.variation_gap
            for row in tail
        )

    @property
    def passed(self) -> bool:
        return (
            self.final_distance_ok
            and self.distance_eventually_nonincreasing
            and self.variation_converged
        )

    def to_tsv(self) -> str:
        lines = ["j\tscale\tbv_norm_delta\tbv_distance\tvar_maximal_j\tvar_maximal_base"]
        for row in self.rows:
            lines.append(
                "\t".join(
                    (
                        str(row.index),
                        format_rat(row.scale),
                        format_rat(row.delta_norm),
                        str(row.distance),
                        str(row.variation),
                        str(self.base_variation),
                    )
                )
            )
        lines.append(f"# final_distance_hi<=threshold\t{self.final_distance_ok}")
        lines.append(f"# distance_eventually_nonincreasing\t{self.distance_eventually_nonincreasing}")
        lines.append(f"# variation_converged\t{self.variation_converged}")
        lines.append(f"# verdict\t{'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


def continuity_experiment(
    f: StepFunction,
    perturbations: Union[StepFunction, Sequence[StepFunction]],
    scales: Sequence[Rat],
    precision=Fraction(1, 10**9),
    threshold=Fraction(1, 1000),
    variation_gap=Fraction(1, 1000),
    tail_count: int = 5,
) -> ContinuityReport:
    """Drive f_j = f + scale_j * perturbation_j and record BV behaviour.

    Scales must decrease strictly toward zero and each perturbation is a
    fixed BV function, so the perturbed family converges to f in BV norm:
    the hypotheses under which distances must vanish.
    """
    scales = [rat(s) for s in scales]
    if not scales or any(s <= 0 for s in scales):
        raise ValueError("scales must be positive")
    if any(second >= first for first, second in zip(scales, scales[1:])):
        raise ValueError("scales must be strictly decreasing")
    if isinstance(perturbations, StepFunction):
        perturbations = [perturbations] * len(scales)
    if len(perturbations) != len(scales):
        raise ValueError("need one perturbation per scale")
    precision = rat(precision)

    profile_f = env.build_profile(f)
    base_variation = env.variation_of_profile(profile_f, precision=precision)
    rows = []
    for index, (scale, bump) in enumerate(zip(scales, perturbations), start=1):
        f_j = sf.combine(f, bump, 1, scale)
        delta_norm = sf.bv_norm(sf.combine(f_j, f, 1, -1))
        profile_j = env.build_profile(f_j)
        distance = env.bv_distance(f_j, f, precision, profile_f=profile_j, profile_g=profile_f)
        variation = env.variation_of_profile(profile_j, precision=precision)
        rows.append(ExperimentRow(index, scale, delta_norm, distance, variation))
    return ContinuityReport(
        tuple(rows), base_variation, rat(threshold), rat(variation_gap), tail_count
    )


# --- invariant suite -----------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    subject: str
    check: str
    passed: bool
    detail: str = ""
    witness: Optional[str] = None


@dataclass(frozen=True)
class InvariantSuiteReport:
    results: Tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> List[CheckResult]:
        return [r for r in self.results if not r.passed]

    def to_tsv(self) -> str:
        lines = ["subject\tcheck\tstatus\tdetail"]
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            detail = r.detail if r.passed or not r.witness else f"{r.detail} witness={r.witness!r}"
            lines.append(f"{r.subject}\t{r.check}\t{status}\t{detail}")
        lines.append(f"# verdict\t{'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


def _drop_breakpoint_range(f: StepFunction, start: int, count: int) -> StepFunction:
    keep = [i for i in range(f.n) if not (start <= i < start + count)]
    return StepFunction(
        f.tail_left,
        tuple(f.breakpoints[i] for i in keep),
        tuple(f.point_values[i] for i in keep),
        tuple(f.right_constants[i] for i in keep),
    )


def shrink_failure(f: StepFunction, still_fails: Callable[[StepFunction], bool]) -> StepFunction:
    """Reduce the breakpoint count while the predicate keeps failing.

    Halving passes followed by single drops; every candidate reduction is
    re-checked before being accepted.
    """
    current = f
    progress = True
    while progress and current.n > 0:
        progress = False
        for chunk in sorted({max(1, current.n // 2), max(1, current.n // 4), 1}, reverse=True):
            for start in range(0, current.n, chunk):
                candidate = _drop_breakpoint_range(current, start, chunk)
                if candidate.n < current.n:
                    try:
                        failing = still_fails(candidate)
                    except Exception:
                        failing = True
                    if failing:
                        current = candidate
                        progress = True
                        break
            if progress:
                break
    return current


def _check_modulus_identity(f, ctx):
    windows = [(sf.NEG_INF, sf.POS_INF), (Fraction(-3), Fraction(2))]
    for a, b in windows:
        lhs = sf.variation_on(f, a, b) - sf.variation_on(sf.modulus(f), a, b)
        if lhs != sf.modulus_defect(f, a, b):
            return False, f"window ({a},{b})"
    return True, ""


def _check_partition_bound(f, ctx):
    rng = ctx["rng"]
    for _ in range(6):
        pts = sorted({Fraction(rng.randint(-40, 40), 4) for _ in range(5)})
        if len(pts) < 2:
            continue
        if sf.variation_on_partition(f, pts) > sf.variation_on(f, pts[0] - 1, pts[-1] + 1):
            return False, f"partition {pts}"
    return True, ""


def _check_adjusted_modulus_bounds(f, ctx):
    adj = sf.adjusted_modulus(f)
    m = sf.modulus(f)
    for x in f.breakpoints:
        lo_lim, hi_lim = m.left_limit(x), m.right_limit(x)
        value = adj.value(x)
        if not (max(lo_lim, hi_lim) == value):
            return False, f"breakpoint {format_rat(x)}"
    return True, ""


def _check_maximal_ge_adjusted(f, ctx):
    adj = sf.adjusted_modulus(f)
    for x in sample_points(f, ctx["rng"], count=10):
        if mx.maximal_value(f, x).value < adj.value(x):
            return False, f"x={format_rat(x)}"
    return True, ""


def _check_point_value_insensitivity(f, ctx):
    if f.n == 0:
        return True, "no breakpoints"
    rng = ctx["rng"]
    k = rng.randrange(f.n)
    values = list(f.point_values)
    values[k] += Fraction(rng.randint(1, 3), 2)
    g = StepFunction(f.tail_left, f.breakpoints, tuple(values), f.right_constants)
    for x in (f.breakpoints[k], f.breakpoints[0] - 1, f.breakpoints[-1] + Fraction(1, 3)):
        if mx.maximal_value(f, x).value != mx.maximal_value(g, x).value:
            return False, f"x={format_rat(x)}"
    return True, ""


def _check_tail_convergence(f, ctx):
    if f.n == 0:
        return True, "constant"
    limit = mx.maximal_limit_at_infinity(f)
    previous = None
    for t in range(1, 13):
        gap = mx.maximal_value(f, f.breakpoints[-1] + 2**t).value - limit
        if gap < 0 or (previous is not None and gap > previous):
            return False, f"t={t}"
        previous = gap
    return True, ""


def _check_candidate_dominance(f, ctx):
    rng = ctx["rng"]
    grid = GridSpec(endpoint_count=12, random_count=60, seed=rng.randrange(2**30), zoom_rounds=1)
    for x in sample_points(f, rng, count=6)[:8]:
        if oracle_maximal(f, x, grid) > mx.maximal_value(f, x).value:
            return False, f"x={format_rat(x)}"
    return True, ""


def _check_profile_agreement(f, ctx):
    profile = ctx["profile"]
    for x in sample_points(f, ctx["rng"], count=12):
        if profile.value(x) != mx.maximal_value(f, x).value:
            return False, f"x={format_rat(x)}"
    return True, ""


def _check_contraction(f, ctx):
    enclosure = env.variation_of_profile(ctx["profile"], precision=ctx["precision"])
    if enclosure.hi > sf.variation_on(f) + ctx["precision"]:
        return False, f"var={enclosure}"
    return True, ""


def _check_local_variation_bound(f, ctx):
    rng = ctx["rng"]
    profile = ctx["profile"]
    adj = sf.adjusted_modulus(f)
    for _ in range(4):
        a = Fraction(rng.randint(-40, 0), 4)
        b = a + Fraction(rng.randint(1, 40), 4)
        enclosure = env.variation_of_profile(profile, a, b, ctx["precision"])
        bound = (
            sf.variation_on(adj, a, b)
            + abs(profile.value(a) - adj.value(a))
            + abs(profile.value(b) - adj.value(b))
        )
        if enclosure.lo > bound + ctx["precision"]:
            return False, f"window ({format_rat(a)},{format_rat(b)})"
    return True, ""


def _overlap_interior(piece, lo, hi):
    """Does (piece.lo, piece.hi) meet (lo, hi) in a set with interior?"""
    left = piece.lo if lo is None else (lo if piece.lo is None else
                                        (piece.lo if compare(piece.lo, lo) >= 0 else lo))
    right = piece.hi if hi is None else (hi if piece.hi is None else
                                         (piece.hi if compare(piece.hi, hi) <= 0 else hi))
    if left is None or right is None:
        return True
    return compare(left, right) < 0


def _check_flat_on_touch(f, ctx):
    profile = ctx["profile"]
    _, touch = ctx["regions"]
    for piece in profile.pieces:
        if piece.is_constant:
            continue
        for lo, hi in touch.intervals:
            if lo is None and hi is None:
                return False, "whole line touches but piece is not constant"
            if _overlap_interior(piece, lo, hi):
                return False, f"piece {piece.provenance.tag()}"
    return True, ""


def _check_derivative_formula(f, ctx):
    rng = ctx["rng"]
    profile = ctx["profile"]
    regions, _ = ctx["regions"]
    m = sf.modulus(f)
    limit = mx.maximal_limit_at_infinity(f)
    tested = 0
    for _ in range(30):
        x = Fraction(rng.randint(-48, 48), 5)
        if not regions.contains(x):
            continue
        try:
            derivative = env.profile_derivative(profile, x)
        except ValueError:
            continue
        mv = mx.maximal_value(f, x)
        if mv.one_sided_witness is None:
            if mv.value != limit or derivative != 0:
                return False, f"x={format_rat(x)} flat case"
            continue
        w = mv.one_sided_witness
        expected = (
            (mv.value - m.value(x)) / (w.b - x)
            if w.a == x
            else (m.value(x) - mv.value) / (x - w.a)
        )
        if derivative != expected:
            return False, f"x={format_rat(x)}"
        tested += 1
    return True, f"{tested} points"


def _check_finite_difference(f, ctx):
    rng = ctx["rng"]
    profile = ctx["profile"]
    for _ in range(4):
        x = Fraction(rng.randint(-40, 40), 7)
        try:
            derivative = env.profile_derivative(profile, x)
        except ValueError:
            continue
        errors = []
        for t in (6, 8, 10):
            h = Fraction(1, 2**t)
            approx = (profile.value(x + h) - profile.value(x - h)) / (2 * h)
            errors.append(abs(approx - derivative))
        if not all(err <= Fraction(1, 2**t) for err, t in zip(errors, (6, 8, 10))):
            return False, f"x={format_rat(x)}"
    return True, ""


def _check_no_interior_max(f, ctx):
    profile = ctx["profile"]
    regions, _ = ctx["regions"]
    for lo, hi in regions.intervals:
        directions = []
        for piece in profile.pieces:
            if _overlap_interior(piece, lo, hi):
                if piece.direction != 0:
                    directions.append(piece.direction)
        for first, second in zip(directions, directions[1:]):
            if first > 0 > second:
                return False, "rise then fall inside one component"
    return True, ""


def _check_uniform_control_values(pair, ctx):
    f, g = pair
    budget = 2 * sf.bv_norm(sf.combine(f, g, 1, -1))
    for x in sample_points(f, ctx["rng"], count=8):
        if abs(f.value(x) - g.value(x)) > budget:
            return False, f"x={format_rat(x)}"
    return True, ""


def _check_uniform_control_maximal(pair, ctx):
    f, g = pair
    budget = 2 * sf.bv_norm(sf.combine(f, g, 1, -1))
    for x in sample_points(f, ctx["rng"], count=8):
        if abs(mx.maximal_value(f, x).value - mx.maximal_value(g, x).value) > budget:
            return False, f"x={format_rat(x)}"
    return True, ""


def _check_combine_exact(pair, ctx):
    f, g = pair
    rng = ctx["rng"]
    alpha = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
    beta = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
    h = sf.combine(f, g, alpha, beta)
    for x in sample_points(f, rng, count=6):
        if h.value(x) != alpha * f.value(x) + beta * g.value(x):
            return False, f"x={format_rat(x)}"
    return True, ""


_SINGLE_CHECKS = [
    ("modulus_identity", _check_modulus_identity),
    ("partition_bound", _check_partition_bound),
    ("adjusted_modulus_bounds", _check_adjusted_modulus_bounds),
    ("maximal_ge_adjusted", _check_maximal_ge_adjusted),
    ("point_value_insensitivity", _check_point_value_insensitivity),
    ("tail_convergence", _check_tail_convergence),
    ("candidate_dominance", _check_candidate_dominance),
    ("profile_agreement", _check_profile_agreement),
    ("contraction", _check_contraction),
    ("local_variation_bound", _check_local_variation_bound),
    ("flat_on_touch", _check_flat_on_touch),
    ("derivative_formula", _check_derivative_formula),
    ("finite_difference", _check_finite_difference),
    ("no_interior_max", _check_no_interior_max),
]

_PAIR_CHECKS = [
    ("uniform_control_values", _check_uniform_control_values),
    ("uniform_control_maximal", _check_uniform_control_maximal),
    ("combine_exact", _check_combine_exact),
]

_PROFILE_CHECKS = {
    "profile_agreement",
    "contraction",
    "local_variation_bound",
    "flat_on_touch",
    "derivative_formula",
    "finite_difference",
    "no_interior_max",
}


def invariant_suite(corpus: Sequence[StepFunction], precision=Fraction(1, 10**9),
                seed: int = 0) -> InvariantSuiteReport:
    """Run every structural invariant over the corpus, shrinking failures.

    Execution is sequential with deterministic ordering (corpus order, then
    check registration order); the arithmetic is pure CPython, so threads
    would serialize on the interpreter lock anyway.
    """
    if not corpus:
        raise ValueError("invariant_suite needs a nonempty corpus")
    precision = rat(precision)
    results: List[CheckResult] = []

    def run_single(index: int, f: StepFunction):
        ctx: Dict[str, object] = {
            "rng": random.Random(seed * 1_000_003 + index),
            "precision": precision,
        }
        profile = env.build_profile(f)
        ctx["profile"] = profile
        ctx["regions"] = env.detachment_regions(f, profile)
        for name, check in _SINGLE_CHECKS:
            ok, detail = check(f, ctx)
            witness = None
            if not ok:
                witness = sf.serialize(_shrink_single(f, name, seed, index, precision))
            results.append(CheckResult(f"fn[{index}]", name, ok, detail, witness))

    def run_pair(index: int, f: StepFunction, g: StepFunction):
        ctx = {"rng": random.Random(seed * 2_000_003 + index), "precision": precision}
        for name, check in _PAIR_CHECKS:
            ok, detail = check((f, g), ctx)
            witness = sf.serialize(f) if not ok else None
            results.append(CheckResult(f"pair[{index},{index + 1}]", name, ok, detail, witness))

    for index, f in enumerate(corpus):
        run_single(index, f)
    for index in range(len(corpus) - 1):
        run_pair(index, corpus[index], corpus[index + 1])
    return InvariantSuiteReport(tuple(results))


def _shrink_single(f: StepFunction, check_name: str, seed: int, index: int, precision) -> StepFunction:
    check = dict(_SINGLE_CHECKS)[check_name]

    def still_fails(candidate: StepFunction) -> bool:
        ctx: Dict[str, object] = {
            "rng": random.Random(seed * 1_000_003 + index),
            "precision": precision,
        }
        try:
            if check_name in _PROFILE_CHECKS:
                profile = env.build_profile(candidate)
                ctx["profile"] = profile
                ctx["regions"] = env.detachment_regions(candidate, profile)
            ok, _ = check(candidate, ctx)
        except Exception:
            return True
        return not ok

    return shrink_failure(f, still_fails)

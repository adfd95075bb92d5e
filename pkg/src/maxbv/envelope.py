"""Global structure of the maximal function: exact piecewise-Moebius profiles.

Between consecutive breakpoints of f, the maximal function is the upper
envelope of finitely many candidate functions of the query point x: averages
of |f| anchored at a breakpoint on one side with x as the other endpoint
(Moebius functions of x), plus constants (averages over fixed spanning
intervals, the two tail limits, and the local value).  Envelope crossings
solve quadratics with rational coefficients, so every junction is rational
or a quadratic surd; both are carried exactly.

Because each non-constant piece is a Moebius function with its pole strictly
outside the closed piece domain, every piece is monotone, and variation
computations reduce to telescoping endpoint values.  Sums involving surds
from different quadratics are reported as certified rational enclosures of
arbitrary requested precision rather than symbolic closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exact import (
    AlgebraicValue,
    Rat,
    compare,
    compare_with_rat,
    format_rat,
    isolate_quadratic_roots,
    moebius_of_algebraic,
    rat,
    rational_between,
    sign,
    sort_values,
)
from .maximal import maximal_limit_at_infinity, maximal_value
from .stepfn import NEG_INF, POS_INF, AbsIntegral, StepFunction, _endpoint


@dataclass(frozen=True)
class Provenance:
    """Which candidate family a piece came from."""

    kind: str  # 'left' | 'right' | 'constant'
    anchor: Optional[Rat] = None  # fixed endpoint a (left) or b (right)
    source: Optional[str] = None  # constants: 'interval' | 'tail_left' | 'tail_right' | 'local'
    interval: Optional[Tuple[Rat, Rat]] = None

    def tag(self) -> str:
        if self.kind == "left":
            return f"left({format_rat(self.anchor)})"
        if self.kind == "right":
            return f"right({format_rat(self.anchor)})"
        if self.source == "interval":
            a, b = self.interval
            return f"const({format_rat(a)},{format_rat(b)})"
        return f"const:{self.source}"


def _normalize(alpha, beta, gamma, delta) -> Tuple[Rat, Rat, Rat, Rat]:
    alpha, beta, gamma, delta = (Fraction(v) for v in (alpha, beta, gamma, delta))
    if beta * gamma - alpha * delta == 0:
        constant = beta / delta if delta else alpha / gamma
        return (constant, Fraction(0), Fraction(1), Fraction(0))
    if delta:
        return (alpha / delta, beta / delta, gamma / delta, Fraction(1))
    return (alpha / gamma, beta / gamma, Fraction(1), Fraction(0))


@dataclass(frozen=True)
class MoebiusPiece:
    """x -> (alpha + beta*x)/(gamma + delta*x) on a domain with exact ends.

    ``lo``/``hi`` are domain endpoints (None for the infinities) and
    ``lo_value``/``hi_value`` the profile values there.  The denominator has
    no zero on the closed domain, so the piece is monotone throughout.
    """

    alpha: Rat
    beta: Rat
    gamma: Rat
    delta: Rat
    lo: Optional[AlgebraicValue]
    hi: Optional[AlgebraicValue]
    lo_value: Optional[AlgebraicValue]
    hi_value: Optional[AlgebraicValue]
    provenance: Provenance

    @property
    def coefficients(self) -> Tuple[Rat, Rat, Rat, Rat]:
        return (self.alpha, self.beta, self.gamma, self.delta)

    @property
    def det(self) -> Rat:
        return self.beta * self.gamma - self.alpha * self.delta

    @property
    def is_constant(self) -> bool:
        return self.beta == 0 and self.delta == 0

    @property
    def direction(self) -> int:
        """Monotonicity: the sign of the derivative, constant on the domain."""
        return sign(self.det)

    def value_at(self, x) -> Rat:
        x = rat(x)
        den = self.gamma + self.delta * x
        if den == 0:
            raise ZeroDivisionError("evaluation at the pole of a profile piece")
        return (self.alpha + self.beta * x) / den

    def value_at_algebraic(self, v: AlgebraicValue) -> AlgebraicValue:
        return moebius_of_algebraic(self.alpha, self.beta, self.gamma, self.delta, v)

    def derivative_at(self, x) -> Rat:
        x = rat(x)
        den = self.gamma + self.delta * x
        return self.det / (den * den)

    def limit_at(self, direction: int) -> Rat:
        """Value limit toward -oo (direction < 0) or +oo (direction > 0)."""
        if self.delta:
            return self.beta / self.delta
        if self.beta:
            raise ArithmeticError("affine piece is unbounded; no limit at infinity")
        return self.alpha / self.gamma

    def dump_line(self, decimal: Optional[int] = None) -> str:
        cells = [
            _bound_text(self.lo, -1, decimal),
            _bound_text(self.hi, +1, decimal),
            format_rat(self.alpha),
            format_rat(self.beta),
            format_rat(self.gamma),
            format_rat(self.delta),
            self.provenance.tag(),
        ]
        return "\t".join(cells)


def _bound_text(bound: Optional[AlgebraicValue], direction: int, decimal: Optional[int]) -> str:
    if bound is None:
        return "-inf" if direction < 0 else "inf"
    if bound.is_rational:
        return format_rat(bound.rational_value)
    tight = bound.refine(30)
    from .exact import decimal_str

    digits = decimal if decimal else 9
    return f"{decimal_str(tight.midpoint, digits)}±{float(tight.width / 2):.1e}"


@dataclass(frozen=True)
class MaximalProfile:
    """Ordered monotone pieces covering the whole line; continuous by
    construction (adjacent pieces agree at junctions)."""

    pieces: Tuple[MoebiusPiece, ...]

    def piece_containing(self, x) -> MoebiusPiece:
        x = rat(x)
        for piece in self.pieces:
            if piece.hi is None or compare_with_rat(piece.hi, x) >= 0:
                return piece
        raise AssertionError("profile does not cover the line")

    def value(self, x) -> Rat:
        return self.piece_containing(x).value_at(x)

    def limit_at(self, direction: int) -> Rat:
        piece = self.pieces[0] if direction < 0 else self.pieces[-1]
        return piece.limit_at(direction)

    def junctions(self) -> List[AlgebraicValue]:
        return [piece.hi for piece in self.pieces[:-1]]

    def dump(self, decimal: Optional[int] = None) -> str:
        return "\n".join(piece.dump_line(decimal) for piece in self.pieces) + "\n"


@dataclass(frozen=True)
class RegionSet:
    """Disjoint sorted intervals with exact endpoints (None = infinity).

    Open intervals for the detachment set; its complement is reported as
    closed intervals, possibly degenerate (single touch points).
    """

    intervals: Tuple[Tuple[Optional[AlgebraicValue], Optional[AlgebraicValue]], ...]
    closed: bool = False

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def contains(self, x) -> bool:
        x = rat(x)
        for lo, hi in self.intervals:
            lo_cmp = 1 if lo is None else compare_with_rat(lo, x) * -1
            hi_cmp = 1 if hi is None else compare_with_rat(hi, x)
            if self.closed:
                if lo_cmp >= 0 and hi_cmp >= 0:
                    return True
            else:
                if lo_cmp > 0 and hi_cmp > 0:
                    return True
        return False


@dataclass(frozen=True)
class VariationEnclosure:
    """Certified rational interval around a variation value."""

    lo: Rat
    hi: Rat
    requested_precision: Rat

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        object.__setattr__(self, "requested_precision", Fraction(self.requested_precision))
        if self.lo > self.hi:
            raise ValueError("enclosure needs lo <= hi")
        if self.hi - self.lo > self.requested_precision:
            raise ValueError("enclosure wider than the requested precision")

    @property
    def width(self) -> Rat:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Rat:
        return (self.lo + self.hi) / 2

    def intersects(self, other: "VariationEnclosure") -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    def gap_to(self, other: "VariationEnclosure") -> Rat:
        """Distance between the two intervals (zero when they intersect)."""
        return max(Fraction(0), self.lo - other.hi, other.lo - self.hi)

    def __str__(self):
        return f"{format_rat(self.lo)}..{format_rat(self.hi)}"


@dataclass(frozen=True)
class _Candidate:
    alpha: Rat
    beta: Rat
    gamma: Rat
    delta: Rat
    provenance: Provenance

    @property
    def coefficients(self):
        return (self.alpha, self.beta, self.gamma, self.delta)

    def value_at(self, x: Rat) -> Rat:
        return (self.alpha + self.beta * x) / (self.gamma + self.delta * x)


def _sample_between(lo: Optional[AlgebraicValue], hi: Optional[AlgebraicValue]) -> Rat:
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return hi.lo - 1
    if hi is None:
        return lo.hi + 1
    return rational_between(lo, hi)


def _cross_quadratic(c1: _Candidate, c2: _Candidate):
    a1, b1, g1, d1 = c1.coefficients
    a2, b2, g2, d2 = c2.coefficients
    return (
        b1 * d2 - b2 * d1,
        a1 * d2 + b1 * g2 - a2 * d1 - b2 * g1,
        a1 * g2 - a2 * g1,
    )


def _upper_envelope(
    candidates: Sequence[_Candidate], u: Optional[Rat], v: Optional[Rat]
) -> List[Tuple[Optional[AlgebraicValue], Optional[AlgebraicValue], _Candidate]]:
    """Envelope of distinct candidates over the open segment (u, v).

    All pairwise crossings inside the segment partition it into cells on
    which the candidate order is fixed; the winner of each cell is read off
    at an interior rational sample, which cannot tie (a tie would be a
    crossing, and those are cell boundaries).
    """
    lo_av = None if u is None else AlgebraicValue.from_rat(u)
    hi_av = None if v is None else AlgebraicValue.from_rat(v)
    if len(candidates) == 1:
        return [(lo_av, hi_av, candidates[0])]
    splits: List[AlgebraicValue] = []
    for i in range(len(candidates)):
        for j in range(i + 1, len(candidates)):
            quad = _cross_quadratic(candidates[i], candidates[j])
            if not any(quad):
                continue
            for root in isolate_quadratic_roots(quad):
                if u is not None and compare_with_rat(root, u) <= 0:
                    continue
                if v is not None and compare_with_rat(root, v) >= 0:
                    continue
                splits.append(root)
    splits = sort_values(splits)
    bounds: List[Optional[AlgebraicValue]] = [lo_av, *splits, hi_av]
    cells = []
    for idx in range(len(bounds) - 1):
        s, t = bounds[idx], bounds[idx + 1]
        x = _sample_between(s, t)
        values = [(c.value_at(x), pos) for pos, c in enumerate(candidates)]
        best = max(val for val, _ in values)
        winners = [pos for val, pos in values if val == best]
        if len(winners) != 1:
            raise AssertionError("envelope sample hit a tie; crossing enumeration incomplete")
        cells.append([s, t, candidates[winners[0]]])
    merged = [cells[0]]
    for cell in cells[1:]:
        if cell[2] is merged[-1][2]:
            merged[-1][1] = cell[1]
        else:
            merged.append(cell)
    return [(c[0], c[1], c[2]) for c in merged]


def _value_at_bound(cand: _Candidate, bound: AlgebraicValue) -> AlgebraicValue:
    if bound.is_rational:
        return AlgebraicValue.from_rat(cand.value_at(bound.rational_value))
    return moebius_of_algebraic(cand.alpha, cand.beta, cand.gamma, cand.delta, bound)


def build_profile(f: StepFunction) -> MaximalProfile:
    """Assemble the exact global profile of the maximal function of f."""
    if f.n == 0:
        c = abs(f.tail_left)
        piece = MoebiusPiece(
            c, Fraction(0), Fraction(1), Fraction(0), None, None, None, None,
            Provenance("constant", source="tail_left"),
        )
        return MaximalProfile((piece,))

    integ = AbsIntegral(f)
    bps = f.breakpoints
    n = f.n
    abs_consts = [abs(c) for c in f.constants]

    cells_in_order: List[Tuple[Optional[AlgebraicValue], Optional[AlgebraicValue], _Candidate]] = []
    for k in range(n + 1):
        u = bps[k - 1] if k >= 1 else None
        v = bps[k] if k <= n - 1 else None
        ell = abs_consts[k]
        x_ref = bps[k - 1] if k >= 1 else bps[0]
        f_ref = integ.at(x_ref)

        # Constants: only the largest can appear on an upper envelope.
        const_options = [
            (abs_consts[0], (1, 0, 0), Provenance("constant", source="tail_left")),
            (abs_consts[-1], (1, 1, 0), Provenance("constant", source="tail_right")),
            (ell, (1, 2, 0), Provenance("constant", source="local")),
        ]
        for i in range(0, k):
            for j in range(k, n):
                value = integ.average(bps[i], bps[j])
                prov = Provenance("constant", source="interval", interval=(bps[i], bps[j]))
                const_options.append((value, (0, bps[j] - bps[i], bps[i]), prov))
        best_value = max(option[0] for option in const_options)
        best = min((o for o in const_options if o[0] == best_value), key=lambda o: o[1])
        candidates = [_Candidate(*_normalize(best_value, 0, 1, 0), provenance=best[2])]

        # Anchored families; anchors at the segment boundary degenerate to the
        # local constant (already included) and are skipped.
        for i in range(0, k - 1):
            a = bps[i]
            alpha = f_ref - ell * x_ref - integ.at(a)
            coeffs = _normalize(alpha, ell, -a, 1)
            if coeffs[1] == 0 and coeffs[3] == 0:
                continue
            candidates.append(_Candidate(*coeffs, provenance=Provenance("left", anchor=a)))
        for j in range(k + 1, n):
            b = bps[j]
            alpha = integ.at(b) - f_ref + ell * x_ref
            coeffs = _normalize(alpha, -ell, b, -1)
            if coeffs[1] == 0 and coeffs[3] == 0:
                continue
            candidates.append(_Candidate(*coeffs, provenance=Provenance("right", anchor=b)))

        cells_in_order.extend(_upper_envelope(candidates, u, v))

    # Merge adjacent cells with identical coefficients (continuity across
    # breakpoints makes the shared function one piece).
    merged = [list(cells_in_order[0])]
    for lo, hi, cand in cells_in_order[1:]:
        if cand.coefficients == merged[-1][2].coefficients:
            merged[-1][1] = hi
        else:
            merged.append([lo, hi, cand])

    pieces: List[MoebiusPiece] = []
    prev_value: Optional[AlgebraicValue] = None
    for lo, hi, cand in merged:
        hi_value = None if hi is None else _value_at_bound(cand, hi)
        pieces.append(
            MoebiusPiece(*cand.coefficients, lo, hi, prev_value, hi_value, cand.provenance)
        )
        prev_value = hi_value

    profile = MaximalProfile(tuple(pieces))

    # Internal consistency: adjacent pieces agree at rational junctions and
    # the profile matches the pointwise engine at every breakpoint.
    for left, right in zip(pieces, pieces[1:]):
        if left.hi.is_rational:
            x0 = left.hi.rational_value
            if right.value_at(x0) != left.hi_value.rational_value:
                raise AssertionError("profile pieces disagree at a junction")
    for x0 in bps:
        if profile.value(x0) != maximal_value(f, x0).value:
            raise AssertionError("profile disagrees with the pointwise engine")
    return profile


# --- detachment set --------------------------------------------------------


def detachment_regions(f: StepFunction, profile: MaximalProfile) -> Tuple[RegionSet, RegionSet]:
    """Split the line into the open set where the profile strictly exceeds
    the adjusted modulus and its closed complement (touch set)."""
    bound_values: List[AlgebraicValue] = list(profile.junctions())
    bound_values.extend(AlgebraicValue.from_rat(x) for x in f.breakpoints)
    bounds = sort_values(bound_values)
    if not bounds:
        only = profile.pieces[0]
        if only.is_constant and only.value_at(0) == abs(f.value(0)):
            return RegionSet((), closed=False), RegionSet(((None, None),), closed=True)
        return RegionSet(((None, None),), closed=False), RegionSet((), closed=True)

    items: List[Tuple[str, Optional[AlgebraicValue], Optional[AlgebraicValue]]] = []
    previous: Optional[AlgebraicValue] = None
    for b in bounds:
        items.append(("interval", previous, b))
        items.append(("point", b, None))
        previous = b
    items.append(("interval", previous, None))

    flags: List[bool] = []
    for kind, first, second in items:
        if kind == "interval":
            x = _sample_between(first, second)
            piece = profile.piece_containing(x)
            in_e = not (piece.is_constant and piece.value_at(x) == abs(f.value(x)))
        else:
            if first.is_rational:
                x0 = first.rational_value
                adjusted = max(abs(f.left_limit(x0)), abs(f.right_limit(x0)))
                in_e = profile.value(x0) != adjusted
            else:
                # Surd junctions join two strictly monotone pieces whose common
                # value is irrational, while the adjusted modulus is rational.
                in_e = True
        flags.append(in_e)

    runs: List[Tuple[Optional[AlgebraicValue], Optional[AlgebraicValue]]] = []
    run_start: object = _UNSET
    for (kind, first, second), in_e in zip(items, flags):
        if kind == "interval":
            if in_e:
                if run_start is _UNSET:
                    run_start = first
            elif run_start is not _UNSET:
                raise AssertionError("open detachment run hit a touching interval directly")
        else:
            if not in_e and run_start is not _UNSET:
                runs.append((run_start, first))  # type: ignore[arg-type]
                run_start = _UNSET
            elif in_e and run_start is _UNSET:
                raise AssertionError("isolated detachment point; the set must be open")
    if run_start is not _UNSET:
        runs.append((run_start, None))  # type: ignore[arg-type]

    complement: List[Tuple[Optional[AlgebraicValue], Optional[AlgebraicValue]]] = []
    if not runs:
        complement.append((None, None))
    else:
        if runs[0][0] is not None:
            complement.append((None, runs[0][0]))
        for (_, e1), (s2, _) in zip(runs, runs[1:]):
            complement.append((e1, s2))
        if runs[-1][1] is not None:
            complement.append((runs[-1][1], None))
    return RegionSet(tuple(runs), closed=False), RegionSet(tuple(complement), closed=True)


class _Unset:
    pass


_UNSET = _Unset()


# --- derivative ------------------------------------------------------------


def profile_derivative(profile: MaximalProfile, x) -> Rat:
    """Exact derivative at a rational point interior to a piece.

    At junctions the two one-sided derivatives may differ, so they are
    rejected rather than assigned a value.  For a piece carried by an
    interval anchored on the right at b, the derivative equals
    (value - |f|(x))/(b - x); anchored on the left at a it equals
    (|f|(x) - value)/(x - a); constant pieces are flat.
    """
    x = rat(x)
    for piece in profile.pieces:
        hi_cmp = 1 if piece.hi is None else compare_with_rat(piece.hi, x)
        if hi_cmp < 0:
            continue
        lo_cmp = -1 if piece.lo is None else compare_with_rat(piece.lo, x)
        if lo_cmp == 0 or hi_cmp == 0:
            raise ValueError("derivative is one-sided at piece junctions")
        if lo_cmp < 0 < hi_cmp:
            return piece.derivative_at(x)
        raise AssertionError("piece lookup failed")
    raise AssertionError("profile does not cover the line")


# --- certified variation ---------------------------------------------------


def _is_neg_inf(x) -> bool:
    return isinstance(x, float) and math.isinf(x) and x < 0


def _is_pos_inf(x) -> bool:
    return isinstance(x, float) and math.isinf(x) and x > 0


def variation_of_profile(
    profile: MaximalProfile, a=NEG_INF, b=POS_INF, precision=Fraction(1, 10**9)
) -> VariationEnclosure:
    """Certified total variation of the profile over the open interval (a, b).

    Each piece is monotone, so the variation telescopes over piece endpoint
    values; surd junction values are refined until the enclosure meets the
    requested precision.  All-rational junctions give an exact (width-zero)
    answer.
    """
    precision = rat(precision)
    if precision <= 0:
        raise ValueError("precision must be positive")
    a, b = _endpoint(a), _endpoint(b)
    if not a < b:
        raise ValueError("variation_of_profile needs a < b")

    terms: List[Tuple[AlgebraicValue, AlgebraicValue, int]] = []
    for piece in profile.pieces:
        if not _is_neg_inf(a) and piece.hi is not None and compare_with_rat(piece.hi, a) <= 0:
            continue
        if not _is_pos_inf(b) and piece.lo is not None and compare_with_rat(piece.lo, b) >= 0:
            continue
        if piece.direction == 0:
            continue
        if not _is_neg_inf(a) and (piece.lo is None or compare_with_rat(piece.lo, a) < 0):
            start = AlgebraicValue.from_rat(piece.value_at(a))
        elif piece.lo is None:
            start = AlgebraicValue.from_rat(piece.limit_at(-1))
        else:
            start = piece.lo_value
        if not _is_pos_inf(b) and (piece.hi is None or compare_with_rat(piece.hi, b) > 0):
            end = AlgebraicValue.from_rat(piece.value_at(b))
        elif piece.hi is None:
            end = AlgebraicValue.from_rat(piece.limit_at(+1))
        else:
            end = piece.hi_value
        terms.append((start, end, piece.direction))

    surds: Dict[int, AlgebraicValue] = {}
    for start, end, _ in terms:
        for av in (start, end):
            if not av.is_rational:
                surds[id(av)] = av
    if surds:
        per_value = precision / (4 * len(surds))
        surds = {key: av.refine_below(per_value) for key, av in surds.items()}

    lo_sum = Fraction(0)
    hi_sum = Fraction(0)
    for start, end, direction in terms:
        start = surds.get(id(start), start)
        end = surds.get(id(end), end)
        if direction > 0:
            term_lo, term_hi = end.lo - start.hi, end.hi - start.lo
        else:
            term_lo, term_hi = start.lo - end.hi, start.hi - end.lo
        lo_sum += max(term_lo, Fraction(0))
        hi_sum += max(term_hi, Fraction(0))
    return VariationEnclosure(lo_sum, hi_sum, precision)


def _difference_critical_quadratic(p1: MoebiusPiece, p2: MoebiusPiece):
    d1, d2 = p1.det, p2.det
    g1, dl1 = p1.gamma, p1.delta
    g2, dl2 = p2.gamma, p2.delta
    return (
        d1 * dl2 * dl2 - d2 * dl1 * dl1,
        2 * (d1 * g2 * dl2 - d2 * g1 * dl1),
        d1 * g2 * g2 - d2 * g1 * g1,
    )


def _difference_enclosure(
    m1: MoebiusPiece,
    m2: MoebiusPiece,
    bound: Optional[AlgebraicValue],
    direction: int,
    cache: Dict[int, AlgebraicValue],
    width: Rat,
) -> Tuple[Rat, Rat]:
    """Enclosure of (m1 - m2) at a cell endpoint (None = infinity)."""
    if bound is None:
        v = m1.limit_at(direction) - m2.limit_at(direction)
        return (v, v)
    if bound.is_rational:
        x0 = bound.rational_value
        v = m1.value_at(x0) - m2.value_at(x0)
        return (v, v)
    key = id(bound)
    av = cache.get(key, bound).refine_below(width)
    while True:
        signs = [
            sign(m.gamma + m.delta * edge)
            for m in (m1, m2)
            for edge in (av.lo, av.hi)
        ]
        if 0 not in signs and signs[0] == signs[1] and signs[2] == signs[3]:
            break
        av = av.refine_below(av.width / 4)
    cache[key] = av
    vals1 = sorted((m1.value_at(av.lo), m1.value_at(av.hi)))
    vals2 = sorted((m2.value_at(av.lo), m2.value_at(av.hi)))
    return (vals1[0] - vals2[1], vals1[1] - vals2[0])


def variation_of_difference(
    p1: MaximalProfile, p2: MaximalProfile, precision=Fraction(1, 10**9)
) -> VariationEnclosure:
    """Certified total variation of (p1 - p2) over the whole line.

    The piece grids are merged; on each common cell the difference of two
    Moebius functions has a derivative whose zeros solve a quadratic, so the
    cell splits into monotone stretches whose endpoint differences telescope.
    """
    precision = rat(precision)
    if precision <= 0:
        raise ValueError("precision must be positive")

    bounds = sort_values([j for p in (p1, p2) for j in p.junctions()])
    cells: List[Tuple[Optional[AlgebraicValue], Optional[AlgebraicValue], MoebiusPiece, MoebiusPiece]] = []
    walk: List[Optional[AlgebraicValue]] = [None, *bounds, None]
    for idx in range(len(walk) - 1):
        s, t = walk[idx], walk[idx + 1]
        x = _sample_between(s, t)
        cells.append((s, t, p1.piece_containing(x), p2.piece_containing(x)))

    monotone: List[Tuple[Optional[AlgebraicValue], Optional[AlgebraicValue], MoebiusPiece, MoebiusPiece, int]] = []
    for s, t, m1, m2 in cells:
        quad = _difference_critical_quadratic(m1, m2)
        splits: List[AlgebraicValue] = []
        if any(quad):
            for root in isolate_quadratic_roots(quad):
                if s is not None and compare(root, s) <= 0:
                    continue
                if t is not None and compare(root, t) >= 0:
                    continue
                splits.append(root)
            splits = sort_values(splits)
        subwalk: List[Optional[AlgebraicValue]] = [s, *splits, t]
        for idx in range(len(subwalk) - 1):
            u, w = subwalk[idx], subwalk[idx + 1]
            x = _sample_between(u, w)
            trend = sign(m1.derivative_at(x) - m2.derivative_at(x))
            if trend == 0:
                continue
            monotone.append((u, w, m1, m2, trend))

    cache: Dict[int, AlgebraicValue] = {}
    width = Fraction(1, 2**40)
    while True:
        lo_sum = Fraction(0)
        hi_sum = Fraction(0)
        for u, w, m1, m2, trend in monotone:
            du = _difference_enclosure(m1, m2, u, -1, cache, width)
            dw = _difference_enclosure(m1, m2, w, +1, cache, width)
            if trend > 0:
                term_lo, term_hi = dw[0] - du[1], dw[1] - du[0]
            else:
                term_lo, term_hi = du[0] - dw[1], du[1] - dw[0]
            lo_sum += max(term_lo, Fraction(0))
            hi_sum += max(term_hi, Fraction(0))
        if hi_sum - lo_sum <= precision:
            return VariationEnclosure(lo_sum, hi_sum, precision)
        width /= 2**16


def bv_distance(
    f: StepFunction,
    g: StepFunction,
    precision=Fraction(1, 10**9),
    profile_f: Optional[MaximalProfile] = None,
    profile_g: Optional[MaximalProfile] = None,
) -> VariationEnclosure:
    """BV distance between the maximal functions of f and g: the gap of their
    limits at infinity plus the variation of their difference."""
    precision = rat(precision)
    if precision <= 0:
        raise ValueError("precision must be positive")
    profile_f = profile_f or build_profile(f)
    profile_g = profile_g or build_profile(g)
    base = abs(maximal_limit_at_infinity(f) - maximal_limit_at_infinity(g))
    spread = variation_of_difference(profile_f, profile_g, precision)
    return VariationEnclosure(base + spread.lo, base + spread.hi, precision)

"""Explicit one-parameter families x* + lambda*d of sparsest solutions.

Each multiplicity condition comes with a constructive interval for the
step parameter lambda:

  * ratio endpoints  min/max over inactive rows of slack_j / (B_Ibar,S d)_j,
    exact rationals;
  * margin endpoints (eps - ||e*||_2) / (||A_S d||_inf sqrt(m)), generally
    irrational, kept symbolically as (eps, residual_sq, coeff, m) and
    compared to rationals exactly via nested-radical sign tests.

The margin formula is deliberately the conservative ||.||_inf sqrt(m)
variant rather than the tighter 2-norm; sampled members are verified
exactly anyway, so the slack only shortens the certified interval.

For every interval a certified rational enclosure is computed with
directed rational square-root bounds (Newton from above, outward rounding),
so that each sampled lambda admits a fully exact feasibility recheck.
Unbounded interval sides are sampled through a finite surrogate, since any
rational on that side lies in the family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Optional, Sequence

from .conditions import ConditionContext
from .errors import InvalidDirection, VerificationFailure
from .linalg import Vec, ZERO, is_zero_vec, primitive, vec, vec_add, vec_scale
from .model import ProblemInstance, SolutionRecord, make_record
from .qp import embed

SAMPLE_SURROGATE = Fraction(4)


def sqrt_exact(q: Fraction) -> Optional[Fraction]:
    """The exact rational square root of q, or None if irrational."""
    if q < 0:
        raise ValueError("negative radicand")
    rn, rd = isqrt(q.numerator), isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def sqrt_upper(q: Fraction, steps: int = 8, max_den: int = 10 ** 6) -> Fraction:
    """A rational upper bound on sqrt(q), outward-rounded to a small denominator."""
    if q == 0:
        return ZERO
    exact = sqrt_exact(q)
    if exact is not None:
        return exact
    x = (q + 1) / 2
    for _ in range(steps):
        x = (x + q / x) / 2
    num = x.numerator * max_den
    return Fraction(-(-num // x.denominator), max_den)


def sqrt_lower(q: Fraction, steps: int = 8, max_den: int = 10 ** 6) -> Fraction:
    if q == 0:
        return ZERO
    return q / sqrt_upper(q, steps, max_den)


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


def sign_linear_sqrt(p: Fraction, r: Fraction, s: Fraction) -> int:
    """Exact sign of p + r*sqrt(s) for rational p, r and s >= 0."""
    if s < 0:
        raise ValueError("negative radicand")
    if r == 0 or s == 0:
        return _sign(p)
    if p == 0:
        return _sign(r)
    if (p > 0) == (r > 0):
        return _sign(p)
    d = p * p - r * r * s
    if d == 0:
        return 0
    return _sign(p) if d > 0 else _sign(r)


@dataclass(frozen=True)
class Bound:
    """Interval endpoint: rational, symbolic sqrt margin, or infinite.

    kind "sqrt" stands for sign * (eps - sqrt(rho)) / (coeff * sqrt(m))
    with coeff > 0 and sign -1 when negate is set.
    """

    kind: str                               # "rat" | "sqrt" | "+inf" | "-inf"
    value: Optional[Fraction] = None
    eps: Optional[Fraction] = None
    rho: Optional[Fraction] = None
    coeff: Optional[Fraction] = None
    m: Optional[int] = None
    negate: bool = False

    @staticmethod
    def rational(q: Fraction) -> "Bound":
        return Bound("rat", value=q)

    @staticmethod
    def sqrt_margin(eps: Fraction, rho: Fraction, coeff: Fraction, m: int,
                    negate: bool = False) -> "Bound":
        if coeff <= 0:
            raise ValueError("coeff must be positive")
        return Bound("sqrt", eps=eps, rho=rho, coeff=coeff, m=m, negate=negate)

    @staticmethod
    def pos_inf() -> "Bound":
        return Bound("+inf")

    @staticmethod
    def neg_inf() -> "Bound":
        return Bound("-inf")

    def to_float(self) -> float:
        if self.kind == "rat":
            return float(self.value)
        if self.kind == "sqrt":
            mag = (float(self.eps) - math.sqrt(float(self.rho))) / (
                float(self.coeff) * math.sqrt(self.m))
            return -mag if self.negate else mag
        return math.inf if self.kind == "+inf" else -math.inf

    def compare_rational(self, q: Fraction) -> int:
        """Exact sign of (self - q)."""
        if self.kind == "+inf":
            return 1
        if self.kind == "-inf":
            return -1
        if self.kind == "rat":
            return _sign(self.value - q)
        # sign of (eps - sqrt(rho)) - a*sqrt(m), a = +-q*coeff, all exact:
        a = (-q if self.negate else q) * self.coeff
        sign_y = sign_linear_sqrt(self.eps, Fraction(-1), self.rho)
        sign_x = _sign(a)
        if sign_y != sign_x:
            cmp = 1 if sign_y > sign_x else -1
        elif sign_y == 0:
            cmp = 0
        else:
            d = sign_linear_sqrt(self.eps * self.eps + self.rho - a * a * Fraction(self.m),
                                 -2 * self.eps, self.rho)
            cmp = sign_y * d
        return -cmp if self.negate else cmp

    def _margin_inner(self) -> Fraction:
        """Rational 0 < r <= (eps - sqrt(rho))/(coeff*sqrt(m)), tightened as needed."""
        for steps, max_den in ((8, 10 ** 6), (20, 10 ** 12), (40, 10 ** 24)):
            t = sqrt_upper(self.rho, steps, max_den)
            s = sqrt_upper(Fraction(self.m), steps, max_den)
            if t < self.eps:
                return (self.eps - t) / (self.coeff * s)
        raise ArithmeticError("margin too thin to enclose; not expected for "
                              "strict-interior inputs")

    def inner(self, side: str, surrogate: Fraction = SAMPLE_SURROGATE) -> Fraction:
        """A rational on the zero side of this endpoint, inside the interval."""
        if self.kind == "rat":
            return self.value
        if self.kind == "+inf":
            return surrogate
        if self.kind == "-inf":
            return -surrogate
        mag = self._margin_inner()
        return -mag if self.negate else mag


@dataclass(frozen=True)
class SignPartition:
    """Inactive rows split by the sign of (B_{Ibar,S} d)_j."""

    plus: tuple[int, ...]
    minus: tuple[int, ...]
    zero: tuple[int, ...]

    @staticmethod
    def of(values: Sequence[Fraction]) -> "SignPartition":
        return SignPartition(
            plus=tuple(j for j, v in enumerate(values) if v > 0),
            minus=tuple(j for j, v in enumerate(values) if v < 0),
            zero=tuple(j for j, v in enumerate(values) if v == 0))


@dataclass(frozen=True)
class LambdaInterval:
    lower: Bound
    upper: Bound
    lower_open: bool
    upper_open: bool
    inner_lower: Fraction
    inner_upper: Fraction
    note: str = ""


@dataclass(frozen=True)
class SolutionFamily:
    base: SolutionRecord
    direction: Vec                 # full n-dimensional, primitive, zero off S
    interval: LambdaInterval
    condition_label: str


def _bound_str(b: Bound) -> str:
    if b.kind == "rat":
        return str(b.value)
    if b.kind == "sqrt":
        body = f"({b.eps} - sqrt({b.rho}))/({b.coeff}*sqrt({b.m}))"
        return f"-{body}" if b.negate else body
    return b.kind


def _max_bound(ratio: Bound, margin: Bound) -> tuple[Bound, str]:
    """Exact max of a rational/-inf ratio bound and a negated sqrt margin."""
    if ratio.kind == "-inf":
        return margin, f"max(-inf, {_bound_str(margin)}) -> margin"
    cmp = margin.compare_rational(ratio.value)
    chosen = margin if cmp > 0 else ratio
    return chosen, (f"max({_bound_str(ratio)}, {_bound_str(margin)}) -> "
                    f"{'margin' if cmp > 0 else 'ratio'}")


def _min_bound(ratio: Bound, margin: Bound) -> tuple[Bound, str]:
    if ratio.kind == "+inf":
        return margin, f"min(+inf, {_bound_str(margin)}) -> margin"
    cmp = margin.compare_rational(ratio.value)
    chosen = margin if cmp < 0 else ratio
    return chosen, (f"min({_bound_str(ratio)}, {_bound_str(margin)}) -> "
                    f"{'margin' if cmp < 0 else 'ratio'}")


def _restrict(direction: Vec, support: Sequence[int], n: int) -> Vec:
    if len(direction) != n:
        raise InvalidDirection(f"direction has {len(direction)} entries, expected {n}")
    off = [i for i in range(n) if i not in support and direction[i] != 0]
    if off:
        raise InvalidDirection(f"direction is nonzero off the support at {off}")
    d_s = tuple(direction[i] for i in sorted(support))
    if is_zero_vec(d_s):
        raise InvalidDirection("direction restricted to the support is zero")
    return d_s


def _require(cond: bool, label: str, what: str) -> None:
    if not cond:
        raise InvalidDirection(f"direction fails {label} membership: needs {what}")


def build_family(ctx: ConditionContext, label: str, direction: Vec) -> SolutionFamily:
    """Construct the lambda interval of the family x* + lambda*d for one label.

    The direction's defining memberships are re-verified exactly, regardless
    of what the classifier reported (defense in depth).  Empty min/max index
    sets yield an unbounded interval side.
    """
    inst = ctx.instance
    rec = ctx.record
    d_s = primitive(_restrict(vec(direction), ctx.support, inst.n))
    full_d = embed(ctx.support, d_s, inst.n)

    a_d = ctx.A_S.mat_vec(d_s)
    bis_d = ctx.B_IS.mat_vec(d_s)
    bibar_d = ctx.B_IbarS.mat_vec(d_s)
    x_s = tuple(rec.x[i] for i in sorted(ctx.support))
    slack = [inst.b[j] - v for j, v in zip(ctx.inactive, ctx.B_IbarS.mat_vec(x_s))]
    assert all(sl > 0 for sl in slack), "inactive rows must have strict slack"

    part = SignPartition.of(bibar_d)

    def ratio_max() -> Bound:
        if not part.plus:
            return Bound.pos_inf()
        return Bound.rational(min(slack[j] / bibar_d[j] for j in part.plus))

    def ratio_min() -> Bound:
        if not part.minus:
            return Bound.neg_inf()
        return Bound.rational(max(slack[j] / bibar_d[j] for j in part.minus))

    coeff = max((abs(v) for v in a_d), default=ZERO)

    def margin(negate: bool) -> Bound:
        if not rec.strict_interior:
            raise InvalidDirection(
                f"{label} with A_S d != 0 needs the strict epsilon interior")
        return Bound.sqrt_margin(inst.epsilon, rec.residual_sq, coeff, inst.m, negate)

    note = ""
    if label == "C1":
        _require(is_zero_vec(a_d), label, "A_S d = 0")
        _require(is_zero_vec(bis_d), label, "B_{I,S} d = 0")
        lower, upper = ratio_min(), ratio_max()
        lower_open, upper_open = lower.kind == "-inf", upper.kind == "+inf"
    elif label == "C2":
        _require(is_zero_vec(bis_d) and is_zero_vec(bibar_d), label, "B_S d = 0")
        if coeff == 0:
            lower, upper = Bound.neg_inf(), Bound.pos_inf()
            lower_open = upper_open = True
        else:
            lower, upper = margin(True), margin(False)
            lower_open = upper_open = False
    elif label in ("C3", "C4"):
        _require(is_zero_vec(bibar_d), label, "B_{Ibar,S} d = 0")
        if label == "C3":
            _require(all(v > 0 for v in bis_d), label, "B_{I,S} d > 0")
            upper, upper_open = Bound.rational(ZERO), True
            if coeff == 0:
                lower, lower_open = Bound.neg_inf(), True
            else:
                lower, lower_open = margin(True), False
        else:
            _require(all(v < 0 for v in bis_d), label, "B_{I,S} d < 0")
            lower, lower_open = Bound.rational(ZERO), True
            if coeff == 0:
                upper, upper_open = Bound.pos_inf(), True
            else:
                upper, upper_open = margin(False), False
    elif label in ("D1", "D2"):
        _require(is_zero_vec(a_d), label, "A_S d = 0")
        if label == "D1":
            _require(all(v > 0 for v in bis_d), label, "B_{I,S} d > 0")
            lower = ratio_min()
            lower_open = lower.kind == "-inf"
            upper, upper_open = Bound.rational(ZERO), True
        else:
            _require(all(v < 0 for v in bis_d), label, "B_{I,S} d < 0")
            lower, lower_open = Bound.rational(ZERO), True
            upper = ratio_max()
            upper_open = upper.kind == "+inf"
    elif label == "D3":
        _require(is_zero_vec(bis_d), label, "B_{I,S} d = 0")
        two_sided = part.plus + part.minus
        if two_sided:
            lam1 = Bound.rational(min(slack[j] / abs(bibar_d[j]) for j in two_sided))
        else:
            lam1 = Bound.pos_inf()
        if coeff == 0:
            lam2 = Bound.pos_inf()
        else:
            lam2 = margin(False)
        if lam2.kind == "+inf":
            bound, note = lam1, "margin side unbounded"
        else:
            bound, note = _min_bound(lam1, lam2)
        if bound.kind == "+inf":
            lower, upper = Bound.neg_inf(), Bound.pos_inf()
            lower_open = upper_open = True
        else:
            upper = bound
            lower = (Bound.rational(-bound.value) if bound.kind == "rat" else
                     Bound.sqrt_margin(bound.eps, bound.rho, bound.coeff, bound.m, True))
            lower_open = upper_open = False
    elif label in ("D4", "D5"):
        _require(not is_zero_vec(a_d), label, "A_S d != 0")
        if label == "D4":
            _require(all(v > 0 for v in bis_d), label, "B_{I,S} d > 0")
            lower, note = _max_bound(ratio_min(), margin(True))
            lower_open = False
            upper, upper_open = Bound.rational(ZERO), True
        else:
            _require(all(v < 0 for v in bis_d), label, "B_{I,S} d < 0")
            lower, lower_open = Bound.rational(ZERO), True
            upper, note = _min_bound(ratio_max(), margin(False))
            upper_open = False
    else:
        raise ValueError(f"unknown condition label {label!r}")

    interval = LambdaInterval(
        lower=lower, upper=upper, lower_open=lower_open, upper_open=upper_open,
        inner_lower=lower.inner("lower"), inner_upper=upper.inner("upper"),
        note=note)
    if not interval.inner_lower <= 0 <= interval.inner_upper:
        raise AssertionError("enclosure must straddle the base point")
    return SolutionFamily(base=rec, direction=full_d, interval=interval,
                          condition_label=label)


def sample_and_verify(inst: ProblemInstance, fam: SolutionFamily,
                      count: int) -> list[SolutionRecord]:
    """Sample count distinct lambdas in the certified enclosure and recheck.

    Every sampled point must be exactly feasible with the base support;
    anything else would falsify the construction and raises
    VerificationFailure.  The grid is uniform over the enclosure with open
    endpoints excluded, so reports are reproducible.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    lo, hi = fam.interval.inner_lower, fam.interval.inner_upper
    if hi < lo or (hi == lo and (fam.interval.lower_open or fam.interval.upper_open)):
        raise VerificationFailure("degenerate enclosure; cannot sample")
    if hi == lo:
        if count > 1:
            raise VerificationFailure("enclosure is a point; cannot sample distinct values")
        lambdas = [lo]
    else:
        denom = count - 1 + int(fam.interval.lower_open) + int(fam.interval.upper_open)
        denom = max(denom, 1)
        start = 1 if fam.interval.lower_open else 0
        span = hi - lo
        lambdas = [lo + span * Fraction(start + i, denom) for i in range(count)]
    records = []
    for lam in lambdas:
        x = vec_add(fam.base.x, vec_scale(lam, fam.direction))
        try:
            rec = make_record(inst, x)
        except Exception as exc:
            raise VerificationFailure(
                f"family member at lambda={lam} is infeasible: {exc}") from exc
        if rec.support != fam.base.support:
            raise VerificationFailure(
                f"family member at lambda={lam} changed support to {rec.support}")
        records.append(rec)
    return records

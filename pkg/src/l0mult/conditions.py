"""Checks for necessary conditions, multiplicity conditions, and boundedness.

For a sparsest point x* with support S and active rows I, the necessary
check asks whether the stacked matrix [A_S; B_S] has full column rank, and
the stronger M* = [A_S; B_{I,S}] rank test applies to points of maximum
active cardinality.

Multiplicity splits into four structural cases by the kernels of M* and
of the inactive block B_{Ibar,S}:

    case 1/2:  Null(M*) != {0}                       -> condition C1
    case 3:    Null(M*) = {0}, Null(B_Ibar,S) != {0} -> conditions C2, C3, C4
    case 4:    Null(M*) = {0}, Null(B_Ibar,S) = {0}  -> conditions D1..D5

Conditions outside the matching case are reported NotApplicable, as are
the ones that require the residual to sit strictly inside the epsilon
ball when it does not (C2-C4, D3-D5).  C3/C4, D1/D2 and D4/D5 are
sign-mirrored pairs; both sides are evaluated independently and their
agreement is asserted as a self-check.

Boundedness is certified by any of: every kstar-column cone
{A_Pi eta = 0, B_Pi eta <= 0} trivial (E1), every kstar columns of A
independent (E2), or kstar < spark(A) (E3).  These are sufficient only;
when all fail the report says "undetermined", never "unbounded".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Optional

from .enumerator import EnumerationResult
from .errors import WorkCapExceeded
from .linalg import Mat, Vec, null_space_basis, nullity, primitive, rank
from .lp import cone_is_trivial, exists_nonkernel_point, strict_cone_feasible
from .model import ProblemInstance, SolutionRecord
from .qp import embed

HOLDS = "holds"
FAILS = "fails"
NOT_APPLICABLE = "not_applicable"

C_LABELS = ("C1", "C2", "C3", "C4")
D_LABELS = ("D1", "D2", "D3", "D4", "D5")
ALL_LABELS = C_LABELS + D_LABELS


@dataclass(frozen=True)
class ConditionContext:
    """Submatrices of one solution record, computed once."""

    instance: ProblemInstance
    record: SolutionRecord
    support: tuple[int, ...]
    active: tuple[int, ...]
    inactive: tuple[int, ...]
    A_S: Mat
    B_S: Mat
    B_IS: Mat
    B_IbarS: Mat
    Mstar: Mat
    mstar_nullity: int


def build_context(inst: ProblemInstance, record: SolutionRecord) -> ConditionContext:
    s = record.support
    act = record.active_set
    inact = tuple(j for j in range(inst.l) if j not in act)
    a_s = inst.A.select_cols(s)
    b_s = inst.B.select_cols(s)
    b_is = b_s.select_rows(act)
    b_ibars = b_s.select_rows(inact)
    mstar = a_s.vstack(b_is)
    return ConditionContext(
        instance=inst, record=record, support=s, active=act, inactive=inact,
        A_S=a_s, B_S=b_s, B_IS=b_is, B_IbarS=b_ibars,
        Mstar=mstar, mstar_nullity=nullity(mstar))


def check_necessary(ctx: ConditionContext) -> tuple[bool, Optional[Vec]]:
    """Full-column-rank test of [A_S; B_S]; a common null vector disproves it."""
    stacked = ctx.A_S.vstack(ctx.B_S)
    basis = null_space_basis(stacked)
    if basis.cols == 0:
        return True, None
    return False, basis.col(0)


def check_mstar(ctx: ConditionContext) -> bool:
    return ctx.mstar_nullity == 0


@dataclass(frozen=True)
class ConditionFinding:
    status: str
    directions: tuple[Vec, ...] = ()   # full n-dimensional, zero off the support
    note: str = ""


@dataclass(frozen=True)
class MultiplicityReport:
    findings: dict[str, ConditionFinding]
    case: int                     # 1..4 per the structural split (1 covers 1/2)
    strict_interior: bool
    mstar_nullity: int
    inactive_nullity: int

    def status(self, label: str) -> str:
        return self.findings[label].status

    def holds(self, label: str) -> bool:
        return self.findings[label].status == HOLDS


def _embed_all(ctx: ConditionContext, vectors: list[Vec]) -> tuple[Vec, ...]:
    n = ctx.instance.n
    return tuple(embed(ctx.support, primitive(v), n) for v in vectors)


def classify_multiplicity(ctx: ConditionContext,
                          enum: EnumerationResult) -> MultiplicityReport:
    """Decide each multiplicity condition exactly, with witness directions.

    The record must be a sparsest solution of the enumerated instance; the
    C1 clause about maximum active cardinality is decided globally via the
    enumerator, the only oracle that quantifies over the whole solution set.
    """
    strict = ctx.record.strict_interior
    inact_nullity = nullity(ctx.B_IbarS)
    if ctx.mstar_nullity > 0:
        case = 1 if inact_nullity == 0 else 2
    else:
        case = 3 if inact_nullity > 0 else 4

    na = ConditionFinding(NOT_APPLICABLE)
    findings: dict[str, ConditionFinding] = {}

    # C1: nontrivial Null(M*) and non-maximal active cardinality.
    if ctx.mstar_nullity > 0:
        if len(ctx.active) < enum.max_active_cardinality:
            basis = null_space_basis(ctx.Mstar)
            dirs = _embed_all(ctx, [basis.col(j) for j in range(basis.cols)])
            findings["C1"] = ConditionFinding(HOLDS, dirs,
                                              "one family per kernel basis vector")
        else:
            findings["C1"] = ConditionFinding(
                FAILS, note="active cardinality already maximal")
    else:
        findings["C1"] = na

    # C2-C4 live in case 3 and need the strict epsilon interior.
    if case == 3 and strict:
        basis_bs = null_space_basis(ctx.B_S)
        if basis_bs.cols > 0:
            findings["C2"] = ConditionFinding(HOLDS, _embed_all(ctx, [basis_bs.col(0)]))
        else:
            findings["C2"] = ConditionFinding(FAILS)
        ok3, d3 = strict_cone_feasible(ctx.B_IS, ctx.B_IbarS)
        neg_bis = Mat(ctx.B_IS.rows, ctx.B_IS.cols,
                      tuple(tuple(-a for a in r) for r in ctx.B_IS.data))
        ok4, d4 = strict_cone_feasible(neg_bis, ctx.B_IbarS)
        if ok3 != ok4:
            raise AssertionError("mirror self-check failed for C3/C4")
        findings["C3"] = (ConditionFinding(HOLDS, _embed_all(ctx, [d3]))
                          if ok3 else ConditionFinding(FAILS))
        findings["C4"] = (ConditionFinding(HOLDS, _embed_all(ctx, [d4]))
                          if ok4 else ConditionFinding(FAILS))
    else:
        note = "" if case == 3 else "structural case does not match"
        if case == 3 and not strict:
            note = "residual on the epsilon sphere, no strict interior"
        findings["C2"] = findings["C3"] = findings["C4"] = ConditionFinding(
            NOT_APPLICABLE, note=note)

    # D1-D5 live in case 4; D1/D2 do not need the interior, D3-D5 do.
    if case == 4:
        neg_bis = Mat(ctx.B_IS.rows, ctx.B_IS.cols,
                      tuple(tuple(-a for a in r) for r in ctx.B_IS.data))
        ok1, w1 = strict_cone_feasible(ctx.B_IS, ctx.A_S)
        ok2, w2 = strict_cone_feasible(neg_bis, ctx.A_S)
        if ok1 != ok2:
            raise AssertionError("mirror self-check failed for D1/D2")
        findings["D1"] = (ConditionFinding(HOLDS, _embed_all(ctx, [w1]))
                          if ok1 else ConditionFinding(FAILS))
        findings["D2"] = (ConditionFinding(HOLDS, _embed_all(ctx, [w2]))
                          if ok2 else ConditionFinding(FAILS))
        if strict:
            basis_bis = null_space_basis(ctx.B_IS)
            if basis_bis.cols > 0:
                findings["D3"] = ConditionFinding(HOLDS,
                                                  _embed_all(ctx, [basis_bis.col(0)]))
            else:
                findings["D3"] = ConditionFinding(FAILS)
            ok4, w4 = exists_nonkernel_point(ctx.B_IS, ctx.A_S)
            ok5, w5 = exists_nonkernel_point(neg_bis, ctx.A_S)
            if ok4 != ok5:
                raise AssertionError("mirror self-check failed for D4/D5")
            findings["D4"] = (ConditionFinding(HOLDS, _embed_all(ctx, [w4]))
                              if ok4 else ConditionFinding(FAILS))
            findings["D5"] = (ConditionFinding(HOLDS, _embed_all(ctx, [w5]))
                              if ok5 else ConditionFinding(FAILS))
        else:
            note = "residual on the epsilon sphere, no strict interior"
            findings["D3"] = findings["D4"] = findings["D5"] = ConditionFinding(
                NOT_APPLICABLE, note=note)
    else:
        for label in D_LABELS:
            findings[label] = ConditionFinding(
                NOT_APPLICABLE, note="structural case does not match")

    return MultiplicityReport(findings=findings, case=case, strict_interior=strict,
                              mstar_nullity=ctx.mstar_nullity,
                              inactive_nullity=inact_nullity)


def spark(a: Mat) -> int:
    """Smallest count of linearly dependent columns; n+1 when none exist."""
    for size in range(1, a.cols + 1):
        for cols in combinations(range(a.cols), size):
            if rank(a.select_cols(cols)) < size:
                return size
    return a.cols + 1


@dataclass(frozen=True)
class BoundednessReport:
    E1: bool
    E2: bool
    E3: bool
    spark: int
    bounded_certified: bool
    empirical_gamma: Optional[Fraction]
    e1_failure: Optional[tuple[tuple[int, ...], Vec]]  # (Pi, eta) when E1 fails
    subsets_tested: int


def check_boundedness(inst: ProblemInstance, kstar: int,
                      empirical_gamma: Optional[Fraction] = None,
                      max_subsets: int = 10 ** 6) -> BoundednessReport:
    """Evaluate the three sufficient boundedness conditions.

    E1 parameterizes eta over the null-space basis of A_Pi, reducing each
    subset to a cone-triviality test; subsets with a trivial kernel pass
    immediately.  E2 checks every kstar-subset rank directly and E3 uses
    the spark; their agreement and E2 -> E1 are asserted as self-checks.
    """
    if kstar < 0 or kstar > inst.n:
        raise ValueError("kstar out of range")
    n_subsets = comb(inst.n, kstar)
    if n_subsets > max_subsets:
        raise WorkCapExceeded(
            f"boundedness scan needs {n_subsets} column subsets, cap is {max_subsets}")

    e2 = True
    tested = 0
    for cols in combinations(range(inst.n), kstar):
        tested += 1
        if rank(inst.A.select_cols(cols)) < kstar:
            e2 = False
            break

    spk = spark(inst.A)
    e3 = kstar < spk
    if e2 != e3:
        raise AssertionError("spark and direct subset ranks disagree")

    e1 = True
    e1_failure = None
    for pi in combinations(range(inst.n), kstar):
        basis = null_space_basis(inst.A.select_cols(pi))
        if basis.cols == 0:
            continue
        cone = inst.B.select_cols(pi).mat_mul(basis)
        trivial, witness_t = cone_is_trivial(cone)
        if not trivial:
            e1 = False
            e1_failure = (pi, primitive(basis.mat_vec(witness_t)))
            break
    if e2 and not e1:
        raise AssertionError("E2 holds but E1 failed; kernels disagree")

    return BoundednessReport(E1=e1, E2=e2, E3=e3, spark=spk,
                             bounded_certified=e1 or e2 or e3,
                             empirical_gamma=empirical_gamma,
                             e1_failure=e1_failure, subsets_tested=tested)

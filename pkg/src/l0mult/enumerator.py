"""Brute-force oracle for the sparsest-point problem.

Finds the optimal value kstar by testing supports of size 0, 1, ... in
order, records every optimal support with one exact witness each, then
derives the maximum active-set cardinality over the solution set and the
empirical lower bound on nonzero magnitudes.

The witnesses are representatives: the solution set may be infinite, so
no claim of exhaustiveness beyond the support list is made.  The gamma
value bounds only the enumerated witnesses and is labeled EMPIRICAL in
reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Optional

from .errors import NoSolutionWithinCap, WorkCapExceeded
from .model import ProblemInstance, SolutionRecord, make_record
from .qp import embed, min_residual, region_nonempty, support_feasible


@dataclass
class EnumerationResult:
    kstar: int
    optimal_supports: tuple[tuple[int, ...], ...]
    witnesses: dict[tuple[int, ...], SolutionRecord]
    max_active_cardinality: int
    max_active_witness: Optional[SolutionRecord]
    empirical_gamma: Optional[Fraction]
    supports_tested: int = 0
    active_subsets_tested: int = 0


def enumerate_sparsest(inst: ProblemInstance, kcap: Optional[int] = None,
                       max_supports: int = 10 ** 6,
                       max_active_subsets: int = 10 ** 6) -> EnumerationResult:
    """Exhaustive support scan for the optimal value and all optimal supports.

    Supports of one size are independent; they are visited in lexicographic
    order so results (including witness values) are deterministic.  At the
    optimal size, a feasible point found within a size-k set S necessarily
    has support exactly S, otherwise a smaller feasible support would have
    been found earlier; this is asserted, not re-derived.
    """
    if kcap is None:
        kcap = inst.n
    if kcap > inst.n:
        raise ValueError("kcap exceeds the number of variables")

    tested = 0
    for k in range(kcap + 1):
        tested += comb(inst.n, k)
        if tested > max_supports:
            raise WorkCapExceeded(
                f"support scan would exceed {max_supports} supports at size {k}")
        found: list[tuple[int, ...]] = []
        recs: dict[tuple[int, ...], SolutionRecord] = {}
        for s in combinations(range(inst.n), k):
            ok, witness = support_feasible(inst, s)
            if ok:
                rec = make_record(inst, witness)
                assert rec.support == s, "witness support shrank below the optimum"
                found.append(s)
                recs[s] = rec
        if found:
            result = EnumerationResult(
                kstar=k,
                optimal_supports=tuple(found),
                witnesses=recs,
                max_active_cardinality=0,
                max_active_witness=None,
                empirical_gamma=None,
                supports_tested=tested,
            )
            card, wit, subsets = _max_active(inst, result, max_active_subsets)
            result.max_active_cardinality = card
            result.max_active_witness = wit
            result.active_subsets_tested = subsets
            result.empirical_gamma = empirical_gamma(result)
            return result
    raise NoSolutionWithinCap(f"no feasible support of size <= {kcap}")


def _max_active(inst: ProblemInstance, res: EnumerationResult,
                max_active_subsets: int) -> tuple[int, Optional[SolutionRecord], int]:
    """Largest forced-active cardinality with a nonempty region, plus witness.

    Any point of a nonempty (S, I) region is a sparsest solution whose
    active set includes I, and conversely every sparsest solution x makes
    the (supp(x), I(x)) region nonempty, so scanning all pairs decides the
    maximum exactly.  Scanned by size descending, then support, then I,
    both lexicographic, for a deterministic witness.
    """
    total = len(res.optimal_supports) * (2 ** inst.l)
    if total > max_active_subsets:
        raise WorkCapExceeded(
            f"active-set scan needs {total} region tests, cap is {max_active_subsets}")
    tried = 0
    for size in range(inst.l, -1, -1):
        for s in res.optimal_supports:
            for forced in combinations(range(inst.l), size):
                tried += 1
                if region_nonempty(inst, s, forced):
                    rr = min_residual(inst, s, forced)
                    rec = make_record(inst, embed(s, rr.witness, inst.n))
                    return size, rec, tried
    return 0, None, tried


def max_active_cardinality(inst: ProblemInstance, res: EnumerationResult,
                           max_active_subsets: int = 10 ** 6
                           ) -> tuple[int, Optional[SolutionRecord]]:
    card, wit, _ = _max_active(inst, res, max_active_subsets)
    return card, wit


def empirical_gamma(res: EnumerationResult) -> Optional[Fraction]:
    """Minimum absolute nonzero entry over the stored witnesses.

    A surrogate for the positive lower bound that exists whenever the
    solution set is bounded; it constrains only the enumerated witnesses.
    None when kstar = 0 (no nonzero entries exist).
    """
    if res.kstar == 0:
        return None
    values = [abs(rec.x[i]) for rec in res.witnesses.values() for i in rec.support]
    return min(values) if values else None

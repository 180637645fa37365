"""Exact minimization of ||y - A_S z||^2 over a support, under Bx <= b.

The feasibility questions behind every support test reduce to

    qstar = min { ||y - A_S z||^2 : B_{I,S} z = b_I,  B_S z <= b }

decided exactly by enumerating, for every subset W of inequality rows with
W containing I, the equality-constrained least squares with rows W forced
to equality, and keeping candidates that satisfy the remaining rows.  For
a convex quadratic the optimum is attained and its active set at the
minimum-norm optimal point certifies one such W, so the scan is complete.
Exactness and simplicity beat a pivoting QP at desk scale; callers cap l.

A support is feasible iff qstar <= epsilon^2 (compared in rationals, no
square root); epsilon = 0 degenerates to exact solvability of A_S z = y
under the polyhedral constraints.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .errors import EmptyPolyhedron
from .linalg import Vec, ZERO, solve_eq_least_squares, vec
from .model import ProblemInstance


@dataclass(frozen=True)
class RestrictedResult:
    """Exact minimizer data for one (support, forced-active) pair."""

    qstar: Fraction
    witness: Vec                      # over the support coordinates
    active_rows: tuple[int, ...]      # rows of Bx <= b tight at the witness
    forced_active: tuple[int, ...]
    subsets_tried: int


def _forced_supersets(l: int, forced: Sequence[int]) -> list[tuple[int, ...]]:
    rest = [j for j in range(l) if j not in forced]
    subsets = []
    for r in range(len(rest) + 1):
        for extra in combinations(rest, r):
            subsets.append(tuple(sorted(set(forced) | set(extra))))
    subsets.sort()
    return subsets


def min_residual(inst: ProblemInstance, support: Sequence[int],
                 forced_active: Sequence[int] = ()) -> RestrictedResult:
    """Exact qstar with a deterministic witness.

    Ties between active subsets are broken by lexicographically smallest W;
    within one W the equality-constrained solver already returns the
    minimum-norm minimizer.  Raises EmptyPolyhedron when no subset admits a
    point satisfying the whole inequality system.
    """
    support = tuple(sorted(support))
    forced = tuple(sorted(forced_active))
    a_s = inst.A.select_cols(support)
    b_s = inst.B.select_cols(support)

    best: Optional[tuple[Fraction, tuple[int, ...], Vec]] = None
    tried = 0
    for w in _forced_supersets(inst.l, forced):
        tried += 1
        e = b_s.select_rows(w)
        f = vec(inst.b[j] for j in w)
        out = solve_eq_least_squares(a_s, inst.y, e, f)
        if out is None:
            continue
        q, z = out
        bz = b_s.mat_vec(z)
        if any(bz[j] > inst.b[j] for j in range(inst.l) if j not in w):
            continue
        if best is None or q < best[0]:
            best = (q, w, z)
    if best is None:
        raise EmptyPolyhedron(
            f"no point satisfies the system for support {support}, forced {forced}")
    q, w, z = best
    bz = b_s.mat_vec(z)
    active = tuple(j for j in range(inst.l) if bz[j] == inst.b[j])
    return RestrictedResult(qstar=q, witness=z, active_rows=active,
                            forced_active=forced, subsets_tried=tried)


def embed(support: Sequence[int], z: Vec, n: int) -> Vec:
    x = [ZERO] * n
    for i, s in enumerate(sorted(support)):
        x[s] = z[i]
    return tuple(x)


def support_feasible(inst: ProblemInstance,
                     support: Sequence[int]) -> tuple[bool, Optional[Vec]]:
    """Whether some feasible point is supported within the index set.

    The witness, when feasible, is the deterministic minimizer embedded
    into R^n with zeros off the support.
    """
    try:
        res = min_residual(inst, support)
    except EmptyPolyhedron:
        return False, None
    if res.qstar > inst.eps_sq:
        return False, None
    return True, embed(support, res.witness, inst.n)


def region_nonempty(inst: ProblemInstance, support: Sequence[int],
                    forced_active: Sequence[int]) -> bool:
    """Whether {z : ||y - A_S z||^2 <= eps^2, B_{I,S} z = b_I, B_S z <= b} != {}."""
    try:
        res = min_residual(inst, support, forced_active)
    except EmptyPolyhedron:
        return False
    return res.qstar <= inst.eps_sq

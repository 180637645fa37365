"""Exact rational linear programming and derived polyhedral cone tests.

The solver is a dense two-phase simplex on Fractions with Bland's rule
(lowest eligible index enters, lowest basic index leaves on ratio ties),
which terminates on every input; degenerate pivots are common at desk
scale with exact arithmetic, so anti-cycling is not optional here.

On top of ``lp_max`` sit the three decision procedures the condition
checks reduce to: triviality of a closed cone {t: Ct <= 0}, feasibility
of a strictly positive system {Pd > 0, Zd = 0}, and existence of a point
with Pd > 0 outside the kernel of another matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Optional

from .linalg import Mat, Vec, ZERO, ONE, dot, null_space_basis, primitive, vec

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class LPOutcome:
    """Result of lp_max; exactly one of point/ray is set per status."""

    status: str
    value: Optional[Fraction] = None
    point: Optional[Vec] = None
    ray: Optional[Vec] = None


class _Tableau:
    """Simplex tableau over free original variables split as u - w."""

    def __init__(self, c: Vec, g: Mat, h: Vec, e: Mat, f: Vec):
        self.n = len(c)
        self.mg = g.rows
        self.me = e.rows
        nrows = self.mg + self.me
        # columns: u (n), w (n), slacks (mg), artificials (nrows), rhs
        self.nstruct = 2 * self.n + self.mg
        self.ncols = self.nstruct + nrows
        self.body: list[list[Fraction]] = []
        self.rhs: list[Fraction] = []
        for i in range(nrows):
            if i < self.mg:
                grow, rhs = g.row(i), h[i]
                slack = i
            else:
                grow, rhs = e.row(i - self.mg), f[i - self.mg]
                slack = None
            row = [ZERO] * self.ncols
            for j in range(self.n):
                row[j] = grow[j]
                row[self.n + j] = -grow[j]
            if slack is not None:
                row[2 * self.n + slack] = ONE
            if rhs < 0:
                row = [-a for a in row]
                rhs = -rhs
            row[self.nstruct + i] = ONE
            self.body.append(row)
            self.rhs.append(rhs)
        self.basis = [self.nstruct + i for i in range(nrows)]
        self.c_orig = c

    def _pivot(self, prow: int, pcol: int) -> None:
        pv = self.body[prow][pcol]
        if pv != 1:
            inv = 1 / pv
            self.body[prow] = [a * inv for a in self.body[prow]]
            self.rhs[prow] *= inv
        prow_data = self.body[prow]
        prow_rhs = self.rhs[prow]
        for i in range(len(self.body)):
            if i == prow:
                continue
            factor = self.body[i][pcol]
            if factor != 0:
                self.body[i] = [a - factor * b for a, b in zip(self.body[i], prow_data)]
                self.rhs[i] -= factor * prow_rhs
        self.basis[prow] = pcol

    def _reduced_costs(self, cost: list[Fraction]) -> list[Fraction]:
        # r_j = c_j - sum_i c_basis(i) * T[i][j]
        red = list(cost)
        for i, bv in enumerate(self.basis):
            cb = cost[bv]
            if cb != 0:
                row = self.body[i]
                for j in range(self.ncols):
                    if row[j] != 0:
                        red[j] -= cb * row[j]
        return red

    def _objective_value(self, cost: list[Fraction]) -> Fraction:
        return sum((cost[bv] * self.rhs[i] for i, bv in enumerate(self.basis)), ZERO)

    def _run(self, cost: list[Fraction], banned: set[int]) -> tuple[str, Optional[int]]:
        """Bland's-rule simplex for max cost.x; returns (status, entering col on unbounded)."""
        while True:
            red = self._reduced_costs(cost)
            entering = None
            for j in range(self.ncols):
                if j in banned or j in self.basis:
                    continue
                if red[j] > 0:
                    entering = j
                    break
            if entering is None:
                return OPTIMAL, None
            leaving = None
            best_ratio = None
            for i in range(len(self.body)):
                a = self.body[i][entering]
                if a > 0:
                    ratio = self.rhs[i] / a
                    if best_ratio is None or ratio < best_ratio or (
                            ratio == best_ratio and self.basis[i] < self.basis[leaving]):
                        best_ratio = ratio
                        leaving = i
            if leaving is None:
                return UNBOUNDED, entering
            self._pivot(leaving, entering)

    def extract_point(self) -> Vec:
        xs = [ZERO] * self.n
        for i, bv in enumerate(self.basis):
            if bv < self.n:
                xs[bv] += self.rhs[i]
            elif bv < 2 * self.n:
                xs[bv - self.n] -= self.rhs[i]
        return tuple(xs)

    def extract_ray(self, entering: int) -> Vec:
        d = [ZERO] * self.nstruct
        if entering < self.nstruct:
            d[entering] = ONE
        for i, bv in enumerate(self.basis):
            if bv < self.nstruct:
                d[bv] -= self.body[i][entering]
        return tuple(d[j] - d[self.n + j] for j in range(self.n))


def lp_max(c: Vec, g: Mat, h: Vec, e: Optional[Mat] = None,
           f: Optional[Vec] = None) -> LPOutcome:
    """Maximize c.x over {x : Gx <= h, Ex = f} with free x, exactly.

    Every case is encoded in the outcome: an optimal point, an improving
    feasible ray certifying unboundedness (G ray <= 0, E ray = 0,
    c.ray > 0), or infeasibility.
    """
    n = len(c)
    if e is None:
        e = Mat(0, n, ())
        f = ()
    if g.cols != n or e.cols != n:
        raise ValueError("objective/constraint column counts differ")
    if len(h) != g.rows or f is None or len(f) != e.rows:
        raise ValueError("right-hand side length mismatch")

    if n == 0:
        ok = all(hi >= 0 for hi in h) and all(fi == 0 for fi in f)
        return LPOutcome(OPTIMAL, ZERO, ()) if ok else LPOutcome(INFEASIBLE)

    tab = _Tableau(c, g, h, e, f)
    nrows = len(tab.body)

    if nrows > 0:
        phase1 = [ZERO] * tab.ncols
        for i in range(nrows):
            phase1[tab.nstruct + i] = -ONE
        status, _ = tab._run(phase1, banned=set())
        assert status == OPTIMAL  # phase 1 is bounded above by 0
        if tab._objective_value(phase1) != 0:
            return LPOutcome(INFEASIBLE)
        # Drive remaining artificials out of the basis (degenerate pivots);
        # rows with no structural entry are redundant and can stay put with
        # their column banned.
        for i in range(nrows):
            if tab.basis[i] >= tab.nstruct:
                for j in range(tab.nstruct):
                    if tab.body[i][j] != 0:
                        tab._pivot(i, j)
                        break

    banned = {tab.nstruct + i for i in range(nrows)}
    cost = [ZERO] * tab.ncols
    for j in range(n):
        cost[j] = c[j]
        cost[n + j] = -c[j]
    status, entering = tab._run(cost, banned)
    if status == UNBOUNDED:
        assert entering is not None
        return LPOutcome(UNBOUNDED, ray=tab.extract_ray(entering))
    point = tab.extract_point()
    return LPOutcome(OPTIMAL, value=dot(vec(c), point), point=point)


def _feasibility(g: Mat, h: Vec, e: Mat, f: Vec) -> LPOutcome:
    zero_obj = tuple(ZERO for _ in range(g.cols))
    return lp_max(zero_obj, g, h, e, f)


def cone_is_trivial(c: Mat) -> tuple[bool, Optional[Vec]]:
    """Decide whether {t : Ct <= 0} = {0}.

    Cone membership is scale invariant, so each coordinate is probed inside
    the box -1 <= t <= 1: the cone is nontrivial iff max +-t_j over the
    boxed cone is positive for some (coordinate, sign), scanned in that
    order for a deterministic witness.  A zero-row C with at least one
    column is the whole space, hence nontrivial.
    """
    dim = c.cols
    if dim == 0:
        return True, None
    box_rows = [[ONE if k == j else ZERO for k in range(dim)] for j in range(dim)]
    box_rows += [[-ONE if k == j else ZERO for k in range(dim)] for j in range(dim)]
    g = Mat.from_rows(list(c.data) + box_rows, cols=dim)
    h = tuple([ZERO] * c.rows + [ONE] * (2 * dim))
    for j in range(dim):
        for sign in (ONE, -ONE):
            obj = tuple(sign if k == j else ZERO for k in range(dim))
            out = lp_max(obj, g, h)
            assert out.status == OPTIMAL  # t = 0 feasible, box bounds
            if out.value > 0:
                return False, primitive(out.point)
    return True, None


def _min_scale_to_one(p: Mat, d: Vec) -> Vec:
    """Smallest positive integer multiple of d with P d >= 1 componentwise."""
    prods = p.mat_vec(d)
    if p.rows == 0:
        return d
    worst = min(prods)
    assert worst > 0
    scale = Fraction(ceil(1 / worst)) if worst < 1 else ONE
    return tuple(scale * a for a in d)


def strict_cone_feasible(p: Mat, z: Mat) -> tuple[bool, Optional[Vec]]:
    """Decide whether some d satisfies Pd > 0 componentwise and Zd = 0.

    Strict positivity is homogeneous, so it is normalized to Pd >= 1.  The
    witness is the primitive integer direction scaled by the least positive
    integer that restores Pd >= 1 exactly.  With no P rows the positivity
    is vacuous and the set is the nonzero kernel of Z.
    """
    k = p.cols
    if z.cols != k:
        raise ValueError("column counts differ")
    if k == 0:
        return False, None
    if p.rows == 0:
        basis = null_space_basis(z)
        if basis.cols == 0:
            return False, None
        return True, basis.col(0)
    g = Mat(p.rows, k, tuple(tuple(-a for a in row) for row in p.data))
    h = tuple(-ONE for _ in range(p.rows))
    out = _feasibility(g, h, z, tuple(ZERO for _ in range(z.rows)))
    if out.status == INFEASIBLE:
        return False, None
    assert out.status == OPTIMAL
    return True, _min_scale_to_one(p, primitive(out.point))


def exists_nonkernel_point(p: Mat, m: Mat) -> tuple[bool, Optional[Vec]]:
    """Decide whether some d satisfies Pd > 0 componentwise and Md != 0.

    Over the relaxed region {Pd >= 1}, each row r of M is probed by
    maximizing +r.d and -r.d; the set is nonempty iff some optimum is
    positive or some probe is unbounded.  Scanned by (row, sign) for
    determinism; the witness is returned primitive.
    """
    k = p.cols
    if m.cols != k:
        raise ValueError("column counts differ")
    if k == 0:
        return False, None
    g = Mat(p.rows, k, tuple(tuple(-a for a in row) for row in p.data))
    h = tuple(-ONE for _ in range(p.rows))
    base = _feasibility(g, h, Mat(0, k, ()), ())
    if base.status == INFEASIBLE:
        return False, None
    for i in range(m.rows):
        r = m.row(i)
        for sign in (ONE, -ONE):
            obj = tuple(sign * a for a in r)
            out = lp_max(obj, g, h)
            if out.status == UNBOUNDED:
                d = base.point
                if dot(r, d) == 0:
                    d = tuple(a + b for a, b in zip(d, out.ray))
                    if dot(r, d) == 0:
                        d = tuple(a + b for a, b in zip(d, out.ray))
                assert dot(r, d) != 0
                return True, primitive(d)
            if out.value > 0:
                return True, primitive(out.point)
    return False, None

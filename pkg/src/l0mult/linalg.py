"""Dense exact linear algebra over the rationals.

All entries are ``fractions.Fraction``; every rank, null-space and
least-squares decision is a true dichotomy with no tolerance anywhere.
Matrices are immutable and may have zero rows or zero columns, which the
calling modules rely on for empty supports and instances without
inequality constraints.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

Vec = tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def vec(entries: Iterable) -> Vec:
    return tuple(_frac(e) for e in entries)


def vec_add(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vec_sub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vec_scale(c: Fraction, u: Vec) -> Vec:
    return tuple(c * a for a in u)


def dot(u: Vec, v: Vec) -> Fraction:
    return sum((a * b for a, b in zip(u, v, strict=True)), ZERO)


def norm_sq(u: Vec) -> Fraction:
    return sum((a * a for a in u), ZERO)


def is_zero_vec(u: Vec) -> bool:
    return all(a == 0 for a in u)


def primitive(u: Vec, *, positive_lead: bool = False) -> Vec:
    """Scale a nonzero rational vector to integer entries with gcd 1.

    The sign of the vector is preserved unless ``positive_lead`` is set, in
    which case the first nonzero entry is made positive (the canonical form
    used for null-space bases; cone witnesses keep their orientation).
    """
    if is_zero_vec(u):
        return u
    denom = lcm(*(a.denominator for a in u))
    ints = [a.numerator * (denom // a.denominator) for a in u]
    g = gcd(*ints)
    ints = [a // g for a in ints]
    if positive_lead:
        lead = next(a for a in ints if a != 0)
        if lead < 0:
            ints = [-a for a in ints]
    return tuple(Fraction(a) for a in ints)


@dataclass(frozen=True)
class Mat:
    """Immutable dense rational matrix, row-major."""

    rows: int
    cols: int
    data: tuple[Vec, ...]

    def __post_init__(self):
        if len(self.data) != self.rows:
            raise ValueError("row count mismatch")
        for r in self.data:
            if len(r) != self.cols:
                raise ValueError("column count mismatch")

    @staticmethod
    def from_rows(rows: Sequence[Sequence], cols: Optional[int] = None) -> "Mat":
        data = tuple(vec(r) for r in rows)
        if cols is None:
            if not data:
                raise ValueError("cols must be given for a 0-row matrix")
            cols = len(data[0])
        return Mat(len(data), cols, data)

    @staticmethod
    def zeros(rows: int, cols: int) -> "Mat":
        return Mat(rows, cols, tuple(tuple(ZERO for _ in range(cols)) for _ in range(rows)))

    @staticmethod
    def identity(n: int) -> "Mat":
        return Mat(n, n, tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)))

    def at(self, i: int, j: int) -> Fraction:
        return self.data[i][j]

    def row(self, i: int) -> Vec:
        return self.data[i]

    def col(self, j: int) -> Vec:
        return tuple(r[j] for r in self.data)

    def transpose(self) -> "Mat":
        return Mat(self.cols, self.rows, tuple(self.col(j) for j in range(self.cols)))

    def mat_vec(self, x: Vec) -> Vec:
        if len(x) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(dot(r, x) for r in self.data)

    def mat_mul(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        ot = other.transpose()
        return Mat(self.rows, other.cols,
                   tuple(tuple(dot(r, c) for c in ot.data) for r in self.data))

    def select_rows(self, idx: Sequence[int]) -> "Mat":
        return Mat(len(idx), self.cols, tuple(self.data[i] for i in idx))

    def select_cols(self, idx: Sequence[int]) -> "Mat":
        return Mat(self.rows, len(idx), tuple(tuple(r[j] for j in idx) for r in self.data))

    def vstack(self, other: "Mat") -> "Mat":
        if self.cols != other.cols:
            raise ValueError("dimension mismatch")
        return Mat(self.rows + other.rows, self.cols, self.data + other.data)

    def is_zero(self) -> bool:
        return all(is_zero_vec(r) for r in self.data)


def rref(m: Mat) -> tuple[Mat, tuple[int, ...], int]:
    """Reduced row-echelon form with pivot columns and rank.

    The RREF over Q is unique, so the output is canonical for its input.
    """
    work = [list(r) for r in m.data]
    pivots: list[int] = []
    pr = 0
    for pc in range(m.cols):
        pivot_row = None
        for i in range(pr, m.rows):
            if work[i][pc] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        work[pr], work[pivot_row] = work[pivot_row], work[pr]
        pv = work[pr][pc]
        if pv != 1:
            work[pr] = [a / pv for a in work[pr]]
        for i in range(m.rows):
            if i != pr and work[i][pc] != 0:
                factor = work[i][pc]
                work[i] = [a - factor * b for a, b in zip(work[i], work[pr])]
        pivots.append(pc)
        pr += 1
        if pr == m.rows:
            break
    reduced = Mat(m.rows, m.cols, tuple(tuple(r) for r in work))
    return reduced, tuple(pivots), len(pivots)


def rank(m: Mat) -> int:
    return rref(m)[2]


def nullity(m: Mat) -> int:
    return m.cols - rank(m)


def null_space_basis(m: Mat) -> Mat:
    """Basis of {v : Mv = 0} as columns, in primitive integer form.

    The result has 0 columns exactly when the null space is trivial.  Basis
    vectors are ordered by free column index; each is scaled to integers
    with gcd 1 and positive first nonzero entry, so the output is canonical.
    """
    reduced, pivots, rk = rref(m)
    free = [j for j in range(m.cols) if j not in pivots]
    basis_cols: list[Vec] = []
    for f in free:
        v = [ZERO] * m.cols
        v[f] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -reduced.at(r, f)
        basis_cols.append(primitive(tuple(v), positive_lead=True))
    if not basis_cols:
        return Mat(m.cols, 0, tuple(() for _ in range(m.cols)))
    return Mat(m.cols, len(basis_cols),
               tuple(tuple(c[i] for c in basis_cols) for i in range(m.cols)))


def solve_linear(a: Mat, b: Vec) -> Optional[Vec]:
    """One particular solution of Ax = b (free variables set to 0), or None."""
    if len(b) != a.rows:
        raise ValueError("dimension mismatch")
    aug = Mat(a.rows, a.cols + 1, tuple(r + (bi,) for r, bi in zip(a.data, b)))
    reduced, pivots, _ = rref(aug)
    if a.cols in pivots:
        return None
    x = [ZERO] * a.cols
    for r, pc in enumerate(pivots):
        x[pc] = reduced.at(r, a.cols)
    return tuple(x)


def solve_eq_least_squares(m: Mat, v: Vec, e: Optional[Mat] = None,
                           f: Optional[Vec] = None) -> Optional[tuple[Fraction, Vec]]:
    """Minimize ||v - Mz||_2^2 subject to Ez = f, exactly.

    Returns (qstar, z) where qstar is the exact minimal squared residual and
    z is the minimum-norm point of the affine set of minimizers.  Returns
    None when {z : Ez = f} is empty.  With no equality system the problem is
    an ordinary least squares; with M of zero columns the residual is v.
    """
    k = m.cols
    if e is None:
        e = Mat(0, k, ())
        f = ()
    if e.cols != k:
        raise ValueError("column counts of M and E differ")
    if f is None or len(f) != e.rows:
        raise ValueError("equality right-hand side mismatch")

    if e.rows == 0:
        z0: Vec = tuple(ZERO for _ in range(k))
        nbasis = Mat.identity(k)
    else:
        sol = solve_linear(e, f)
        if sol is None:
            return None
        z0 = sol
        nbasis = null_space_basis(e)

    w = vec_sub(v, m.mat_vec(z0))
    if nbasis.cols == 0:
        return norm_sq(w), z0

    g = m.mat_mul(nbasis)
    gt = g.transpose()
    gram = gt.mat_mul(g)
    rhs = gt.mat_vec(w)
    t_part = solve_linear(gram, rhs)
    # The normal equations are always consistent for a Gram system.
    assert t_part is not None
    z1 = vec_add(z0, nbasis.mat_vec(t_part))

    kernel = null_space_basis(g)
    if kernel.cols > 0:
        # Non-unique minimizer: shift within the solution set to minimum norm.
        h = nbasis.mat_mul(kernel)
        ht = h.transpose()
        s = solve_linear(ht.mat_mul(h), tuple(-c for c in ht.mat_vec(z1)))
        assert s is not None
        z1 = vec_add(z1, h.mat_vec(s))

    qstar = norm_sq(vec_sub(v, m.mat_vec(z1)))
    return qstar, z1

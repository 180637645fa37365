import random
from fractions import Fraction

import numpy as np

from l0mult.linalg import (Mat, dot, norm_sq, null_space_basis, primitive, rank,
                           rref, solve_eq_least_squares, solve_linear, vec, vec_sub)

F = Fraction


def rand_mat(rng, rows, cols, lim=10):
    return Mat.from_rows(
        [[F(rng.randint(-lim, lim), rng.randint(1, lim)) for _ in range(cols)]
         for _ in range(rows)], cols=cols)


class TestRref:
    def test_identity(self):
        r, piv, rk = rref(Mat.identity(3))
        assert r == Mat.identity(3)
        assert piv == (0, 1, 2)
        assert rk == 3

    def test_proportional_rows(self):
        r, piv, rk = rref(Mat.from_rows([[1, 2], [2, 4]]))
        assert r.data == ((F(1), F(2)), (F(0), F(0)))
        assert rk == 1

    def test_example_submatrix_full_rank(self):
        a = Mat.from_rows([[-2, 5], [4, -9], [-2, 5]])
        assert rref(a)[2] == 2

    def test_idempotent(self):
        rng = random.Random(1)
        for _ in range(50):
            m = rand_mat(rng, rng.randint(1, 5), rng.randint(1, 5))
            r, _, _ = rref(m)
            r2, _, _ = rref(r)
            assert r2 == r

    def test_rank_equals_rank_of_transpose(self):
        rng = random.Random(2)
        for _ in range(60):
            m = rand_mat(rng, rng.randint(1, 6), rng.randint(1, 6))
            assert rank(m) == rank(m.transpose())


class TestNullSpace:
    def test_single_row(self):
        basis = null_space_basis(Mat.from_rows([[-1, 2]]))
        assert basis.cols == 1
        assert basis.col(0) == (F(2), F(1))

    def test_identity_trivial(self):
        for n in (1, 2, 4):
            assert null_space_basis(Mat.identity(n)).cols == 0

    def test_full_example_matrix(self):
        a = Mat.from_rows([[1, 0, -2, 5], [0, 1, 4, -9], [1, 0, -2, 5]])
        basis = null_space_basis(a)
        assert basis.cols == 2
        for j in range(basis.cols):
            assert all(x == 0 for x in a.mat_vec(basis.col(j)))

    def test_rank_nullity_and_exactness(self):
        rng = random.Random(3)
        for _ in range(60):
            m = rand_mat(rng, rng.randint(1, 5), rng.randint(1, 5))
            basis = null_space_basis(m)
            assert basis.cols + rank(m) == m.cols
            for j in range(basis.cols):
                col = basis.col(j)
                assert all(x == 0 for x in m.mat_vec(col))
                # primitive form: integers, gcd 1, positive leading entry
                assert all(x.denominator == 1 for x in col)
                lead = next(x for x in col if x != 0)
                assert lead > 0

    def test_zero_row_matrix_gives_standard_basis(self):
        basis = null_space_basis(Mat(0, 3, ()))
        assert basis.cols == 3
        assert basis == Mat.identity(3)


class TestSolveLinear:
    def test_unique(self):
        a = Mat.from_rows([[1, -F(5, 2)], [-2, 3]])
        x = solve_linear(a, vec([-F(1, 2), -1]))
        assert x == (F(2), F(1))

    def test_inconsistent(self):
        a = Mat.from_rows([[1, 2], [1, 2]])
        assert solve_linear(a, vec([1, 2])) is None

    def test_underdetermined_consistent(self):
        a = Mat.from_rows([[1, 1]])
        x = solve_linear(a, vec([3]))
        assert x is not None and sum(x) == 3


class TestEqLeastSquares:
    def test_example_unconstrained(self):
        a = Mat.from_rows([[-2, 5], [4, -9], [-2, 5]])
        q, z = solve_eq_least_squares(a, vec([1, -1, 1]))
        assert q == 0
        assert z == (F(2), F(1))

    def test_empty_model(self):
        q, z = solve_eq_least_squares(Mat(3, 0, ((), (), ())), vec([1, -1, 1]))
        assert q == 3
        assert z == ()

    def test_example_with_equality(self):
        a = Mat.from_rows([[0, -2], [1, 4], [0, -2]])
        q, z = solve_eq_least_squares(a, vec([1, -1, 1]),
                                      Mat.from_rows([[0, 1]]), vec([-F(1, 2)]))
        assert q == 0
        assert z == (F(1), -F(1, 2))

    def test_infeasible_equalities(self):
        a = Mat.identity(2)
        e = Mat.from_rows([[1, 0], [1, 0]])
        assert solve_eq_least_squares(a, vec([0, 0]), e, vec([1, 2])) is None

    def test_min_norm_tie_break(self):
        # Rank-deficient model: minimizers form a line, the min-norm one wins.
        a = Mat.from_rows([[1, 1]])
        q, z = solve_eq_least_squares(a, vec([2]))
        assert q == 0
        assert z == (F(1), F(1))

    def test_residual_orthogonal_to_feasible_directions(self):
        rng = random.Random(4)
        for _ in range(40):
            k = rng.randint(1, 4)
            m = rand_mat(rng, rng.randint(1, 4), k)
            v = vec(F(rng.randint(-10, 10), rng.randint(1, 10))
                    for _ in range(m.rows))
            ne = rng.randint(0, 2)
            e = rand_mat(rng, ne, k)
            zfree = vec(F(rng.randint(-3, 3)) for _ in range(k))
            f = e.mat_vec(zfree)  # consistent by construction
            out = solve_eq_least_squares(m, v, e, f)
            assert out is not None
            q, z = out
            r = vec_sub(v, m.mat_vec(z))
            assert norm_sq(r) == q
            basis = null_space_basis(e)
            for j in range(basis.cols):
                assert dot(r, m.mat_vec(basis.col(j))) == 0

    def test_against_float_reference(self):
        rng = random.Random(5)
        checked = 0
        while checked < 60:
            k = rng.randint(1, 4)
            m = rand_mat(rng, rng.randint(1, 4), k)
            v = vec(F(rng.randint(-10, 10)) for _ in range(m.rows))
            ne = rng.randint(0, 2)
            e = rand_mat(rng, ne, k)
            zfree = vec(F(rng.randint(-3, 3)) for _ in range(k))
            f = e.mat_vec(zfree)
            out = solve_eq_least_squares(m, v, e, f)
            assert out is not None
            q, _ = out
            # Null-space method in floats as the independent reference.
            mf = np.array([[float(x) for x in row] for row in m.data]).reshape(m.rows, k)
            vf = np.array([float(x) for x in v])
            if ne:
                ef = np.array([[float(x) for x in row] for row in e.data]).reshape(ne, k)
                ff = np.array([float(x) for x in f])
                z0, *_ = np.linalg.lstsq(ef, ff, rcond=None)
                _, s, vh = np.linalg.svd(ef)
                nb = vh[(s > 1e-12).sum():].T
            else:
                z0 = np.zeros(k)
                nb = np.eye(k)
            if nb.size:
                t, *_ = np.linalg.lstsq(mf @ nb, vf - mf @ z0, rcond=None)
                zf = z0 + nb @ t
            else:
                zf = z0
            qf = float(np.sum((vf - mf @ zf) ** 2))
            assert abs(float(q) - qf) < 1e-9
            checked += 1


class TestPrimitive:
    def test_clears_denominators(self):
        assert primitive((F(1, 2), F(1, 3))) == (F(3), F(2))

    def test_sign_preserved_by_default(self):
        assert primitive((F(-2), F(-4))) == (F(-1), F(-2))

    def test_positive_lead(self):
        assert primitive((F(-2), F(4)), positive_lead=True) == (F(1), F(-2))
